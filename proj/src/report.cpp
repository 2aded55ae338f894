#include "tsfm/report.hpp"

#include "tsfm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tsfm {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v, int precision = 3) {
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.*f", precision, v);
	return buf;
}

std::vector<std::string> model_order(const RunOutput& run) {
	std::vector<std::string> models;
	for (const auto& r : run.records) {
		if (std::find(models.begin(), models.end(), r.model) == models.end()) {
			models.push_back(r.model);
		}
	}
	return models;
}

std::string escape_xml(const std::string& s) {
	std::string out;
	for (char c : s) {
		switch (c) {
		case '&': out += "&amp;"; break;
		case '<': out += "&lt;"; break;
		case '>': out += "&gt;"; break;
		case '"': out += "&quot;"; break;
		case '\'': out += "&apos;"; break;
		default: out += c;
		}
	}
	return out;
}

std::string file_stem(const std::string& task_id) {
	std::string out;
	for (char c : task_id) {
		out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
	}
	return out;
}

} // namespace

std::string score_table_markdown(const RunOutput& run) {
	const auto models = model_order(run);
	std::map<std::string, std::map<std::string, const EvalRecord*>> by_task;
	std::vector<std::string> tasks;
	for (const auto& r : run.records) {
		if (by_task.find(r.task_id) == by_task.end()) {
			tasks.push_back(r.task_id);
		}
		by_task[r.task_id][r.model] = &r;
	}
	std::ostringstream out;
	out << "| Task |";
	for (const auto& m : models) {
		out << ' ' << m << " MASE | " << m << " WQL |";
	}
	out << "\n|---|";
	for (std::size_t i = 0; i < models.size(); ++i) {
		out << "---:|---:|";
	}
	out << '\n';
	for (const auto& t : tasks) {
		out << "| " << t << " |";
		for (const auto& m : models) {
			const auto it = by_task[t].find(m);
			if (it == by_task[t].end()) {
				out << " - | - |";
			} else {
				out << ' ' << fmt(it->second->mase) << " | " << fmt(it->second->wql) << " |";
			}
		}
		out << '\n';
	}
	out << "| **Geo. mean relative** |";
	for (const auto& m : models) {
		if (run.has_summary && run.summary.models.count(m) > 0) {
			const auto& s = run.summary.models.at(m);
			out << ' ' << fmt(s.geo_mean_rel_mase) << " | " << fmt(s.geo_mean_rel_wql) << " |";
		} else {
			out << " - | - |";
		}
	}
	out << '\n';
	return out.str();
}

std::string summary_text(const RunOutput& run) {
	std::ostringstream out;
	out << "model: " << run.model << '\n';
	out << "tasks: " << run.tasks << ", evaluated: " << run.forecasts.size()
	    << ", excluded (NotDefined): " << run.exclusions.size() << ", failed: " << run.failures.size() << '\n';
	out << "monotonicity repairs: " << run.repaired_rows << '\n';
	if (run.has_summary) {
		out << '\n' << "model                 rel MASE  rel WQL  rank MASE  rank WQL\n";
		for (const auto& [name, s] : run.summary.models) {
			char line[160];
			std::snprintf(line, sizeof line, "%-20s  %8.4f  %7.4f  %9.3f  %8.3f\n", name.c_str(), s.geo_mean_rel_mase,
			              s.geo_mean_rel_wql, s.mean_rank_mase, s.mean_rank_wql);
			out << line;
		}
	}
	for (const auto& e : run.exclusions) {
		out << "excluded " << e.task_id << ": " << e.reason << '\n';
	}
	for (const auto& f : run.failures) {
		out << "failed " << f.task_id << ": " << f.error << '\n';
	}
	return out.str();
}

std::string forecast_svg(const ForecastArtifact& f, int width, int height) {
	const Eigen::Index n_hist = f.history.size();
	const Eigen::Index n_fut = f.point.size();
	const Eigen::Index total = n_hist + n_fut;

	double lo = std::numeric_limits<double>::infinity();
	double hi = -lo;
	auto extend = [&](const Eigen::VectorXd& v) {
		for (Eigen::Index i = 0; i < v.size(); ++i) {
			if (std::isfinite(v[i])) {
				lo = std::min(lo, v[i]);
				hi = std::max(hi, v[i]);
			}
		}
	};
	extend(f.history);
	extend(f.truth);
	extend(f.point);
	extend(f.lower);
	extend(f.upper);
	if (!std::isfinite(lo)) {
		lo = 0.0;
		hi = 1.0;
	}
	if (hi - lo < 1e-12) {
		lo -= 0.5;
		hi += 0.5;
	}
	const double margin = 30.0;
	auto x_of = [&](Eigen::Index i) {
		return margin + (width - 2 * margin) * static_cast<double>(i) / static_cast<double>(std::max<Eigen::Index>(total - 1, 1));
	};
	auto y_of = [&](double v) { return margin + (height - 2 * margin) * (hi - v) / (hi - lo); };
	auto polyline = [&](const Eigen::VectorXd& v, Eigen::Index offset, const char* colour, const char* extra) {
		std::ostringstream pts;
		for (Eigen::Index i = 0; i < v.size(); ++i) {
			if (std::isfinite(v[i])) {
				pts << fmt(x_of(offset + i), 2) << ',' << fmt(y_of(v[i]), 2) << ' ';
			}
		}
		return "  <polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\"" + extra +
		       " points=\"" + pts.str() + "\"/>\n";
	};

	std::ostringstream band;
	for (Eigen::Index i = 0; i < n_fut; ++i) {
		band << fmt(x_of(n_hist + i), 2) << ',' << fmt(y_of(f.upper[i]), 2) << ' ';
	}
	for (Eigen::Index i = n_fut - 1; i >= 0; --i) {
		band << fmt(x_of(n_hist + i), 2) << ',' << fmt(y_of(f.lower[i]), 2) << ' ';
	}

	std::ostringstream svg;
	svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
	svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
	    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
	svg << "  <title>" << escape_xml(f.task_id + " (" + f.model + ")") << "</title>\n";
	svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
	svg << "  <polygon fill=\"#4c72b0\" fill-opacity=\"0.25\" stroke=\"none\" points=\"" << band.str() << "\"/>\n";
	svg << polyline(f.history, 0, "#333333", "");
	svg << polyline(f.truth, n_hist, "#333333", " stroke-dasharray=\"4 3\"");
	svg << polyline(f.point, n_hist, "#4c72b0", "");
	svg << "  <line x1=\"" << fmt(x_of(n_hist), 2) << "\" y1=\"" << margin << "\" x2=\"" << fmt(x_of(n_hist), 2)
	    << "\" y2=\"" << height - margin << "\" stroke=\"#999999\" stroke-dasharray=\"2 2\"/>\n";
	svg << "  <text x=\"" << margin << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"12\">"
	    << escape_xml(f.task_id) << " - median and 10-90% band</text>\n";
	svg << "</svg>\n";
	return svg.str();
}

std::vector<std::string> report(const RunOutput& run, const std::string& out_dir,
                                const std::vector<std::string>& task_ids) {
	std::error_code ec;
	fs::create_directories(out_dir, ec);
	if (ec) {
		throw Error(ErrorCode::IOError, "cannot create '" + out_dir + "': " + ec.message());
	}
	std::vector<std::string> written;
	auto emit = [&](const fs::path& path, const std::string& text) {
		std::ofstream out(path, std::ios::binary);
		if (!out || !(out << text)) {
			throw Error(ErrorCode::IOError, "cannot write '" + path.string() + "'");
		}
		written.push_back(path.string());
	};
	emit(fs::path(out_dir) / "scores.md", score_table_markdown(run));
	emit(fs::path(out_dir) / "summary.txt", summary_text(run));
	const std::set<std::string> wanted(task_ids.begin(), task_ids.end());
	for (const auto& f : run.forecasts) {
		if (!wanted.empty() && wanted.count(f.task_id) == 0) {
			continue;
		}
		emit(fs::path(out_dir) / (file_stem(f.task_id) + ".svg"), forecast_svg(f));
	}
	return written;
}

} // namespace tsfm
