// tsfm: forecasting, evaluation and diagnostics from the command line.
//
// Exit codes: 0 success, 1 a task or backend failed, 2 usage or input error.

#include "tsfm/bench.hpp"
#include "tsfm/dataset.hpp"
#include "tsfm/error.hpp"
#include "tsfm/external.hpp"
#include "tsfm/pipeline.hpp"
#include "tsfm/report.hpp"
#include "tsfm/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using ordered_json = nlohmann::ordered_json;

struct GlobalOptions {
	std::uint64_t seed = 0;
	int parallelism = 1;
	std::string quantiles;
	int max_context = 4096;
	std::string features = "calendar,seasonal,index";
	int k_seasonal = 5;
	std::string regressor = "knn";
	std::string endpoint;
	int timeout_ms = 30000;
	std::string point_mode = "median";
};

bool use_color(int fd) {
	return std::getenv("NO_COLOR") == nullptr && isatty(fd) != 0;
}

void report_error(const std::string& message) {
	if (use_color(2)) {
		std::cerr << "\033[31merror:\033[0m " << message << '\n';
	} else {
		std::cerr << "error: " << message << '\n';
	}
}

tsfm::RunConfig make_config(const GlobalOptions& g) {
	tsfm::RunConfig cfg;
	std::map<std::string, std::string> params;
	const auto kind = tsfm::parse_regressor_kind(g.regressor);
	if (!g.endpoint.empty()) {
		params["endpoint"] = g.endpoint;
		params["timeout_ms"] = std::to_string(g.timeout_ms);
		params["max_concurrency"] = std::to_string(g.parallelism);
	}
	cfg.regressor = tsfm::make_regressor(kind, params);
	cfg.features = tsfm::parse_feature_flags(g.features, g.k_seasonal);
	cfg.max_context = g.max_context;
	if (!g.quantiles.empty()) {
		cfg.quantile_levels = tsfm::parse_levels(g.quantiles);
	}
	cfg.point_mode = tsfm::parse_point_mode(g.point_mode);
	cfg.parallelism = g.parallelism;
	cfg.seed = g.seed;
	return cfg;
}

ordered_json to_json(const Eigen::VectorXd& v) {
	ordered_json arr = ordered_json::array();
	for (Eigen::Index i = 0; i < v.size(); ++i) {
		arr.push_back(v[i]);
	}
	return arr;
}

class Output {
public:
	explicit Output(const std::string& path) {
		if (!path.empty() && path != "-") {
			file_.open(path, std::ios::binary);
			if (!file_) {
				throw tsfm::Error(tsfm::ErrorCode::IOError, "cannot write '" + path + "'");
			}
		}
	}
	std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
	std::ofstream file_;
};

int cmd_forecast(const GlobalOptions& g, const std::string& input, int horizon, const std::string& output) {
	const auto cfg = make_config(g);
	const auto series = tsfm::load_dataset(input);
	Output out(output);
	int failures = 0;
	for (const auto& s : series) {
		try {
			const int m = tsfm::seasonality_for(s.freq, s.size());
			const tsfm::ForecastTask task{s, horizon, cfg.max_context, m};
			const auto result = tsfm::run_pipeline(task, cfg.features, cfg.regressor, cfg.quantile_levels);
			const auto split = tsfm::split_context_horizon(task);
			ordered_json doc;
			doc["id"] = s.id;
			ordered_json stamps = ordered_json::array();
			for (const auto& ts : split.future_timestamps) {
				stamps.push_back(tsfm::format_timestamp(ts));
			}
			doc["timestamps"] = std::move(stamps);
			doc["point"] = to_json(tsfm::point_forecast(result.prediction, cfg.point_mode));
			doc["quantile_levels"] = to_json(result.prediction.levels);
			ordered_json rows = ordered_json::array();
			for (Eigen::Index r = 0; r < result.prediction.values.rows(); ++r) {
				rows.push_back(to_json(result.prediction.values.row(r).transpose()));
			}
			doc["quantiles"] = std::move(rows);
			doc["seasonalities"] = result.seasonalities.freqs;
			doc["monotonicity_repairs"] = result.prediction.repaired_rows;
			out.stream() << doc.dump() << '\n';
		} catch (const tsfm::Error& e) {
			report_error(s.id + ": " + e.what());
			++failures;
		}
	}
	return failures > 0 ? 1 : 0;
}

int cmd_detect(const std::string& input, int k, const std::string& output) {
	const auto series = tsfm::load_dataset(input);
	Output out(output);
	for (const auto& s : series) {
		const auto found = tsfm::detect_seasonalities(s.values, k);
		ordered_json doc;
		doc["id"] = s.id;
		doc["freqs"] = found.freqs;
		std::vector<double> periods;
		for (double f : found.freqs) {
			periods.push_back(1.0 / f);
		}
		doc["periods"] = periods;
		doc["magnitudes"] = found.magnitudes;
		out.stream() << doc.dump() << '\n';
	}
	return 0;
}

int cmd_synth(const GlobalOptions& g, const std::string& kind, std::int64_t length, int count,
              const std::vector<std::string>& params, const std::string& freq, const std::string& start,
              const std::string& id, const std::string& output) {
	tsfm::SynthSpec spec;
	spec.kind = tsfm::parse_synth_kind(kind);
	spec.length = length;
	spec.freq = tsfm::parse_frequency(freq);
	spec.start = tsfm::parse_timestamp(start);
	for (const auto& p : params) {
		const auto eq = p.find('=');
		if (eq == std::string::npos) {
			throw tsfm::Error(tsfm::ErrorCode::InvalidArgument, "--param expects key=value, got '" + p + "'");
		}
		try {
			spec.params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
		} catch (const std::exception&) {
			throw tsfm::Error(tsfm::ErrorCode::InvalidArgument, "--param value must be numeric: '" + p + "'");
		}
	}
	std::vector<tsfm::TimeSeries> out_series;
	for (int i = 0; i < count; ++i) {
		spec.seed = count == 1 ? g.seed : tsfm::sub_seed(g.seed, static_cast<std::uint64_t>(i));
		spec.id = count == 1 ? id : id + "_" + std::to_string(i);
		out_series.push_back(tsfm::gen_pattern(spec));
	}
	Output out(output);
	tsfm::write_jsonl(out.stream(), out_series);
	return 0;
}

int cmd_eval(const GlobalOptions& g, const std::string& manifest, const std::string& input, const std::string& name,
             int horizon, const std::string& term, const std::string& out_dir) {
	const auto cfg = make_config(g);
	std::vector<tsfm::DatasetManifest> manifests;
	if (!manifest.empty()) {
		manifests = tsfm::load_manifests(manifest);
	} else {
		if (input.empty()) {
			throw tsfm::Error(tsfm::ErrorCode::InvalidArgument, "eval needs --manifest or --input");
		}
		const auto series = tsfm::load_dataset(input);
		if (series.empty()) {
			throw tsfm::Error(tsfm::ErrorCode::EmptyRecordSet, "'" + input + "' contains no series");
		}
		tsfm::DatasetManifest m;
		m.name = name.empty() ? std::filesystem::path(input).stem().string() : name;
		m.path = input;
		m.freq = series.front().freq;
		m.term = tsfm::parse_term(term);
		m.horizon = horizon > 0 ? horizon : tsfm::term_horizon(m.freq, m.term);
		manifests.push_back(m);
	}
	const auto run = tsfm::run_benchmark(manifests, cfg);
	if (!out_dir.empty()) {
		tsfm::write_run(run, cfg, out_dir);
	}
	std::cout << tsfm::summary_text(run);
	if (!run.failures.empty()) {
		report_error(std::to_string(run.failures.size()) + " task(s) failed");
		return 1;
	}
	return 0;
}

int cmd_report(const std::string& run_dir, const std::string& out_dir, const std::vector<std::string>& series) {
	const auto run = tsfm::read_run(run_dir);
	for (const auto& path : tsfm::report(run, out_dir, series)) {
		std::cout << path << '\n';
	}
	return 0;
}

int cmd_serve_echo(const std::string& host, int port) {
	tsfm::EchoServer server;
	std::cerr << "echo regressor listening on http://" << host << ':' << port << tsfm::kFitPredictPath << '\n';
	server.listen(host, port);
	return 0;
}

int exit_code_for(tsfm::ErrorCode code) {
	switch (code) {
	case tsfm::ErrorCode::ParseError:
	case tsfm::ErrorCode::GridViolation:
	case tsfm::ErrorCode::InvalidArgument:
	case tsfm::ErrorCode::UnsupportedFrequency:
	case tsfm::ErrorCode::ConfigEmpty:
	case tsfm::ErrorCode::IOError:
	case tsfm::ErrorCode::EmptyRecordSet:
		return 2;
	default:
		return 1;
	}
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"Tabular time-series forecasting: featurize, forecast, evaluate"};
	app.require_subcommand(1);
	app.fallthrough();

	GlobalOptions g;
	app.add_option("--seed", g.seed, "Seed for synthetic generation and run metadata");
	app.add_option("--parallelism", g.parallelism, "Worker threads / concurrent backend requests")
		->check(CLI::PositiveNumber);
	app.add_option("--quantiles", g.quantiles, "Comma separated quantile levels (default 0.05..0.95)");
	app.add_option("--max-context", g.max_context, "Context length (presets: 1024, 2048, 4096, 10000)")
		->check(CLI::PositiveNumber);
	app.add_option("--features", g.features, "Feature groups: calendar,seasonal,index");
	app.add_option("--k-seasonal", g.k_seasonal, "Number of detected seasonalities")->check(CLI::NonNegativeNumber);
	app.add_option("--regressor", g.regressor, "knn | seasonal_naive | external");
	app.add_option("--endpoint", g.endpoint, "Base URL of an external fit_predict server");
	app.add_option("--timeout-ms", g.timeout_ms, "Per-request timeout for the external regressor");
	app.add_option("--point-mode", g.point_mode, "median | mean");

	std::string input, output, manifest, name, term = "short", run_dir, out_dir, kind = "seasonal", freq = "H",
	                                       start = "2020-01-01T00:00:00", id = "synthetic", host = "127.0.0.1";
	int horizon = 0, k = 5, count = 1, port = 8080;
	std::int64_t length = 1000;
	std::vector<std::string> params, series_ids;

	auto* forecast = app.add_subcommand("forecast", "Forecast past the end of every series in a dataset");
	forecast->add_option("-i,--input", input, "JSONL or CSV dataset")->required();
	forecast->add_option("-H,--horizon", horizon, "Steps to forecast")->required()->check(CLI::PositiveNumber);
	forecast->add_option("-o,--output", output, "Output JSONL (default stdout)");

	auto* eval = app.add_subcommand("eval", "Score the regressor and Seasonal Naive on the final window");
	eval->add_option("-m,--manifest", manifest, "JSON manifest listing datasets");
	eval->add_option("-i,--input", input, "Single dataset (instead of a manifest)");
	eval->add_option("--name", name, "Dataset name for --input");
	eval->add_option("-H,--horizon", horizon, "Horizon for --input (default from --term)");
	eval->add_option("--term", term, "short | medium | long");
	eval->add_option("-o,--out", out_dir, "Directory for records.jsonl, summary.json, forecasts.jsonl");

	auto* detect = app.add_subcommand("detect", "Report the top-k spectral seasonalities per series");
	detect->add_option("-i,--input", input, "JSONL or CSV dataset")->required();
	detect->add_option("-k", k, "Number of peaks")->check(CLI::PositiveNumber);
	detect->add_option("-o,--output", output, "Output JSONL (default stdout)");

	auto* synth = app.add_subcommand("synth", "Generate seeded synthetic series as JSONL");
	synth->add_option("--kind", kind,
	                  "noise | linear_trend | exp_trend | seasonal | additive_combo | multiplicative_combo | "
	                  "composite | harmonic");
	synth->add_option("--length", length, "Points per series")->check(CLI::PositiveNumber);
	synth->add_option("--count", count, "Number of series (seeds derived from --seed)")->check(CLI::PositiveNumber);
	synth->add_option("--param", params, "Generator parameter key=value (repeatable)");
	synth->add_option("--freq", freq, "Frequency code");
	synth->add_option("--start", start, "Start timestamp");
	synth->add_option("--id", id, "Series id (suffixed with _i when --count > 1)");
	synth->add_option("-o,--output", output, "Output JSONL (default stdout)");

	auto* rep = app.add_subcommand("report", "Render score tables and forecast plots for an eval run");
	rep->add_option("--run", run_dir, "Directory written by eval --out")->required();
	rep->add_option("-o,--out", out_dir, "Report directory")->required();
	rep->add_option("--series", series_ids, "Task ids to plot (default all)")->delimiter(',');

	auto* echo = app.add_subcommand("serve-echo", "Run the reference fit_predict server (mean of y_train)");
	echo->add_option("--host", host, "Bind address");
	echo->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::CallForAllHelp& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		app.exit(e);
		return 2;
	}

	try {
		if (*forecast) {
			return cmd_forecast(g, input, horizon, output);
		}
		if (*eval) {
			return cmd_eval(g, manifest, input, name, horizon, term, out_dir);
		}
		if (*detect) {
			return cmd_detect(input, k, output);
		}
		if (*synth) {
			return cmd_synth(g, kind, length, count, params, freq, start, id, output);
		}
		if (*rep) {
			return cmd_report(run_dir, out_dir, series_ids);
		}
		if (*echo) {
			return cmd_serve_echo(host, port);
		}
	} catch (const tsfm::Error& e) {
		report_error(e.what());
		return exit_code_for(e.code());
	} catch (const std::exception& e) {
		report_error(e.what());
		return 1;
	}
	return 2;
}
