#include "tsfm/dataset.hpp"

#include "tsfm/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace tsfm {

namespace {

using nlohmann::json;

std::string line_error(std::size_t line, const std::string& what) {
	return "line " + std::to_string(line) + ": " + what;
}

bool on_grid(const std::vector<Timestamp>& stamps, const Frequency& freq) {
	for (std::size_t i = 1; i < stamps.size(); ++i) {
		if (advance(stamps[0], freq, static_cast<std::int64_t>(i)) != stamps[i]) {
			return false;
		}
	}
	return true;
}

std::vector<Frequency> candidate_frequencies(Timestamp a, Timestamp b) {
	using namespace std::chrono;
	std::vector<Frequency> out;
	const auto da = floor<days>(a);
	const auto db = floor<days>(b);
	const year_month_day ya{da}, yb{db};
	const int months_apart = (static_cast<int>(yb.year()) - static_cast<int>(ya.year())) * 12 +
	                         (static_cast<int>(static_cast<unsigned>(yb.month())) -
	                          static_cast<int>(static_cast<unsigned>(ya.month())));
	if (months_apart > 0 && (a - da) == (b - db)) {
		if (months_apart % 12 == 0) {
			out.push_back({FrequencyUnit::year, months_apart / 12});
		}
		if (months_apart % 3 == 0) {
			out.push_back({FrequencyUnit::quarter, months_apart / 3});
		}
		out.push_back({FrequencyUnit::month, months_apart});
	}
	const auto delta = (b - a).count();
	if (delta > 0) {
		if (delta % (7 * 86400) == 0) {
			out.push_back({FrequencyUnit::week, static_cast<int>(delta / (7 * 86400))});
		}
		if (delta % 86400 == 0) {
			out.push_back({FrequencyUnit::day, static_cast<int>(delta / 86400)});
		}
		if (delta % 3600 == 0) {
			out.push_back({FrequencyUnit::hour, static_cast<int>(delta / 3600)});
		}
		if (delta % 60 == 0) {
			out.push_back({FrequencyUnit::minute, static_cast<int>(delta / 60)});
		}
		out.push_back({FrequencyUnit::second, static_cast<int>(delta)});
	}
	return out;
}

TimeSeries finish_csv_series(const std::string& id, const std::vector<Timestamp>& stamps,
                             const std::vector<double>& values, std::optional<Frequency> freq) {
	TimeSeries ts;
	ts.id = id;
	ts.start = stamps.front();
	ts.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
	if (freq) {
		if (!on_grid(stamps, *freq)) {
			throw Error(ErrorCode::GridViolation, "series '" + id + "' is not on the " + frequency_code(*freq) + " grid");
		}
		ts.freq = *freq;
		return validate_grid(ts);
	}
	if (stamps.size() < 2) {
		throw Error(ErrorCode::GridViolation, "series '" + id + "' has one row; its frequency cannot be inferred");
	}
	for (const auto& cand : candidate_frequencies(stamps[0], stamps[1])) {
		if (on_grid(stamps, cand)) {
			ts.freq = cand;
			return validate_grid(ts);
		}
	}
	throw Error(ErrorCode::GridViolation, "series '" + id + "' is not on a uniform grid");
}

std::vector<std::string> split_csv_line(const std::string& line) {
	std::vector<std::string> fields;
	std::string field;
	bool quoted = false;
	for (char c : line) {
		if (c == '"') {
			quoted = !quoted;
		} else if (c == ',' && !quoted) {
			fields.push_back(field);
			field.clear();
		} else if (c != '\r') {
			field.push_back(c);
		}
	}
	fields.push_back(field);
	return fields;
}

} // namespace

DatasetFormat format_from_path(const std::string& path) {
	const auto dot = path.rfind('.');
	if (dot != std::string::npos && path.substr(dot) == ".csv") {
		return DatasetFormat::csv;
	}
	return DatasetFormat::jsonl;
}

std::vector<TimeSeries> read_jsonl(std::istream& in) {
	std::vector<TimeSeries> out;
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		if (line.find_first_not_of(" \t\r") == std::string::npos) {
			continue;
		}
		const json doc = json::parse(line, nullptr, false);
		if (doc.is_discarded() || !doc.is_object()) {
			throw Error(ErrorCode::ParseError, line_error(line_no, "not a JSON object"));
		}
		TimeSeries ts;
		try {
			ts.id = doc.at("id").is_string() ? doc.at("id").get<std::string>() : doc.at("id").dump();
			ts.start = parse_timestamp(doc.at("start").get<std::string>());
			ts.freq = parse_frequency(doc.at("freq").get<std::string>());
			const auto& target = doc.at("target");
			if (!target.is_array()) {
				throw Error(ErrorCode::ParseError, "target is not an array");
			}
			ts.values.resize(static_cast<Eigen::Index>(target.size()));
			for (std::size_t i = 0; i < target.size(); ++i) {
				const auto& v = target[i];
				if (v.is_null()) {
					ts.values[static_cast<Eigen::Index>(i)] = kMissing;
				} else if (v.is_number()) {
					ts.values[static_cast<Eigen::Index>(i)] = v.get<double>();
				} else {
					throw Error(ErrorCode::ParseError, "target[" + std::to_string(i) + "] is not a number or null");
				}
			}
		} catch (const Error& e) {
			if (e.code() == ErrorCode::UnsupportedFrequency) {
				throw;
			}
			throw Error(ErrorCode::ParseError, line_error(line_no, e.what()));
		} catch (const json::exception& e) {
			throw Error(ErrorCode::ParseError, line_error(line_no, e.what()));
		}
		out.push_back(validate_grid(ts));
	}
	return out;
}

std::vector<TimeSeries> read_csv(std::istream& in, std::optional<Frequency> freq) {
	std::string line;
	if (!std::getline(in, line)) {
		throw Error(ErrorCode::ParseError, "empty CSV file");
	}
	const auto header = split_csv_line(line);
	if (header.size() != 3 || header[0] != "item_id" || header[1] != "timestamp" || header[2] != "target") {
		throw Error(ErrorCode::ParseError, line_error(1, "expected header item_id,timestamp,target"));
	}
	std::vector<TimeSeries> out;
	std::vector<std::string> seen;
	std::string current;
	std::vector<Timestamp> stamps;
	std::vector<double> values;
	std::size_t line_no = 1;
	auto flush = [&] {
		if (!stamps.empty()) {
			out.push_back(finish_csv_series(current, stamps, values, freq));
		}
		stamps.clear();
		values.clear();
	};
	while (std::getline(in, line)) {
		++line_no;
		if (line.find_first_not_of(" \t\r") == std::string::npos) {
			continue;
		}
		const auto fields = split_csv_line(line);
		if (fields.size() != 3) {
			throw Error(ErrorCode::ParseError, line_error(line_no, "expected 3 fields"));
		}
		if (fields[0] != current || stamps.empty()) {
			flush();
			if (std::find(seen.begin(), seen.end(), fields[0]) != seen.end()) {
				throw Error(ErrorCode::ParseError, line_error(line_no, "rows of item '" + fields[0] + "' are not contiguous"));
			}
			current = fields[0];
			seen.push_back(current);
		}
		try {
			stamps.push_back(parse_timestamp(fields[1]));
		} catch (const Error& e) {
			throw Error(ErrorCode::ParseError, line_error(line_no, e.what()));
		}
		if (fields[2].empty() || fields[2] == "null" || fields[2] == "NaN" || fields[2] == "nan") {
			values.push_back(kMissing);
		} else {
			try {
				std::size_t used = 0;
				values.push_back(std::stod(fields[2], &used));
				if (used != fields[2].size()) {
					throw std::invalid_argument(fields[2]);
				}
			} catch (const std::exception&) {
				throw Error(ErrorCode::ParseError, line_error(line_no, "bad target '" + fields[2] + "'"));
			}
		}
	}
	flush();
	return out;
}

std::vector<TimeSeries> load_dataset(const std::string& path, DatasetFormat format, std::optional<Frequency> csv_freq) {
	std::ifstream in(path);
	if (!in) {
		throw Error(ErrorCode::IOError, "cannot open '" + path + "'");
	}
	return format == DatasetFormat::csv ? read_csv(in, csv_freq) : read_jsonl(in);
}

std::vector<TimeSeries> load_dataset(const std::string& path) {
	return load_dataset(path, format_from_path(path));
}

std::string to_jsonl_line(const TimeSeries& series) {
	nlohmann::ordered_json doc;
	doc["id"] = series.id;
	doc["start"] = format_timestamp(series.timestamp(0));
	doc["freq"] = frequency_code(series.freq);
	nlohmann::ordered_json target = nlohmann::ordered_json::array();
	for (Eigen::Index i = 0; i < series.values.size(); ++i) {
		if (is_missing(series.values[i])) {
			target.push_back(nullptr);
		} else {
			target.push_back(series.values[i]);
		}
	}
	doc["target"] = std::move(target);
	return doc.dump();
}

void write_jsonl(std::ostream& out, const std::vector<TimeSeries>& series) {
	for (const auto& s : series) {
		out << to_jsonl_line(s) << '\n';
	}
}

} // namespace tsfm
