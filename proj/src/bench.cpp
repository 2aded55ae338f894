#include "tsfm/bench.hpp"

#include "tsfm/dataset.hpp"
#include "tsfm/error.hpp"
#include "tsfm/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace tsfm {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct TaskInput {
	std::string task_id;
	const TimeSeries* series = nullptr;
	int horizon = 0;
};

struct TaskResult {
	std::vector<EvalRecord> records;
	std::optional<TaskFailure> failure;
	std::optional<TaskExclusion> exclusion;
	std::optional<ForecastArtifact> artifact;
	double seconds = 0.0;
	std::size_t repaired_rows = 0;
};

bool has_missing(const Eigen::VectorXd& v) {
	return !(v.array() == v.array()).all();
}

TaskResult evaluate_task(const TaskInput& input, const RunConfig& config, const std::string& model) {
	TaskResult out;
	const TimeSeries& s = *input.series;
	const Eigen::Index h = input.horizon;
	if (s.size() <= h) {
		throw Error(ErrorCode::ContextTooShort, "series has no history before the evaluation window");
	}
	TimeSeries history = s;
	history.values = s.values.head(s.size() - h);
	const Eigen::VectorXd truth = s.values.tail(h);
	if (has_missing(truth)) {
		out.exclusion = TaskExclusion{input.task_id, "missing values in the evaluation window"};
		return out;
	}

	const int m = seasonality_for(s.freq, history.size());
	const ForecastTask task{history, input.horizon, config.max_context, m};

	const RegressorSpec naive = make_regressor(RegressorKind::seasonal_naive);
	const PipelineResult baseline = run_pipeline(task, config.features, naive, config.quantile_levels);
	const bool self_baseline = config.regressor.kind == RegressorKind::seasonal_naive;
	const PipelineResult evaluated =
		self_baseline ? baseline : run_pipeline(task, config.features, config.regressor, config.quantile_levels);
	out.repaired_rows = evaluated.prediction.repaired_rows;

	const auto base_mase = mase(truth, point_forecast(baseline.prediction, config.point_mode), history.values, m);
	const auto base_wql = wql(truth, baseline.prediction);
	if (!base_mase || !base_wql) {
		out.exclusion = TaskExclusion{input.task_id, !base_mase ? "MASE scale is zero (NotDefined)"
		                                                        : "WQL denominator is zero (NotDefined)"};
		return out;
	}
	const Eigen::VectorXd point = point_forecast(evaluated.prediction, config.point_mode);
	const double model_mase = *mase(truth, point, history.values, m);
	const double model_wql = *wql(truth, evaluated.prediction);

	out.records.push_back({input.task_id, model, model_mase, model_wql, relative_score(model_mase, *base_mase),
	                       relative_score(model_wql, *base_wql)});
	if (!self_baseline) {
		out.records.push_back({input.task_id, to_string(RegressorKind::seasonal_naive), *base_mase, *base_wql,
		                       relative_score(*base_mase, *base_mase), relative_score(*base_wql, *base_wql)});
	}

	ForecastArtifact art;
	art.task_id = input.task_id;
	art.model = model;
	const Eigen::Index tail = std::min<Eigen::Index>(history.size(), std::max<Eigen::Index>(3 * h, 48));
	art.history = history.values.tail(tail);
	art.truth = truth;
	art.point = point;
	const auto lo = find_level(evaluated.prediction.levels, 0.1);
	const auto hi = find_level(evaluated.prediction.levels, 0.9);
	art.lower = lo ? Eigen::VectorXd(evaluated.prediction.values.col(*lo)) : point;
	art.upper = hi ? Eigen::VectorXd(evaluated.prediction.values.col(*hi)) : point;
	out.artifact = std::move(art);
	return out;
}

RunOutput run_tasks(const std::vector<TaskInput>& inputs, const RunConfig& config) {
	if (config.parallelism < 1) {
		throw Error(ErrorCode::InvalidArgument, "parallelism must be >= 1");
	}
	validate_levels(config.quantile_levels);
	const std::string model = config.model_name.empty() ? to_string(config.regressor.kind) : config.model_name;

	std::vector<TaskResult> results(inputs.size());
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t i = next.fetch_add(1); i < inputs.size(); i = next.fetch_add(1)) {
			const auto t0 = std::chrono::steady_clock::now();
			try {
				results[i] = evaluate_task(inputs[i], config, model);
			} catch (const std::exception& e) {
				results[i] = TaskResult{};
				results[i].failure = TaskFailure{inputs[i].task_id, e.what()};
			}
			results[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
		}
	};
	{
		const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism),
		                                             std::max<std::size_t>(inputs.size(), 1));
		std::vector<std::jthread> pool;
		for (std::size_t w = 1; w < n_workers; ++w) {
			pool.emplace_back(worker);
		}
		worker();
	}

	RunOutput run;
	run.model = model;
	run.tasks = inputs.size();
	for (std::size_t i = 0; i < results.size(); ++i) {
		auto& r = results[i];
		run.records.insert(run.records.end(), r.records.begin(), r.records.end());
		if (r.failure) {
			run.failures.push_back(*r.failure);
		}
		if (r.exclusion) {
			run.exclusions.push_back(*r.exclusion);
		}
		if (r.artifact) {
			run.forecasts.push_back(std::move(*r.artifact));
		}
		run.task_seconds.emplace_back(inputs[i].task_id, r.seconds);
		run.repaired_rows += r.repaired_rows;
	}
	if (!run.records.empty()) {
		run.summary = aggregate(run.records);
		run.has_summary = true;
	}
	return run;
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
	ordered_json arr = ordered_json::array();
	for (Eigen::Index i = 0; i < v.size(); ++i) {
		if (std::isnan(v[i])) {
			arr.push_back(nullptr);
		} else {
			arr.push_back(v[i]);
		}
	}
	return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
	Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
	for (std::size_t i = 0; i < arr.size(); ++i) {
		v[static_cast<Eigen::Index>(i)] = arr[i].is_null() ? kMissing : arr[i].get<double>();
	}
	return v;
}

void write_text(const fs::path& path, const std::string& text) {
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw Error(ErrorCode::IOError, "cannot write '" + path.string() + "'");
	}
	out << text;
}

} // namespace

Term parse_term(const std::string& text) {
	if (text == "short") {
		return Term::short_term;
	}
	if (text == "medium") {
		return Term::medium_term;
	}
	if (text == "long") {
		return Term::long_term;
	}
	throw Error(ErrorCode::InvalidArgument, "term must be short, medium or long");
}

std::string to_string(Term term) {
	switch (term) {
	case Term::short_term: return "short";
	case Term::medium_term: return "medium";
	case Term::long_term: return "long";
	}
	return "short";
}

int term_horizon(const Frequency& freq, Term term) {
	int base = 0;
	switch (freq.unit) {
	case FrequencyUnit::second: base = 60; break;
	case FrequencyUnit::minute: base = 48; break;
	case FrequencyUnit::hour: base = 48; break;
	case FrequencyUnit::day: base = 30; break;
	case FrequencyUnit::week: base = 8; break;
	case FrequencyUnit::month: base = 12; break;
	case FrequencyUnit::quarter: base = 8; break;
	case FrequencyUnit::year: base = 6; break;
	}
	const int mult = term == Term::short_term ? 1 : term == Term::medium_term ? 10 : 15;
	return base * mult;
}

void validate_manifest(const DatasetManifest& manifest) {
	if (manifest.horizon != term_horizon(manifest.freq, manifest.term)) {
		throw Error(ErrorCode::InvalidArgument,
		            "dataset '" + manifest.name + "': horizon " + std::to_string(manifest.horizon) + " does not match the " +
		                to_string(manifest.term) + "-term horizon " +
		                std::to_string(term_horizon(manifest.freq, manifest.term)) + " for " +
		                frequency_code(manifest.freq));
	}
	if (!fs::exists(manifest.path)) {
		throw Error(ErrorCode::IOError, "dataset '" + manifest.name + "': file '" + manifest.path + "' not found");
	}
}

std::vector<DatasetManifest> load_manifests(const std::string& path) {
	std::ifstream in(path);
	if (!in) {
		throw Error(ErrorCode::IOError, "cannot open manifest '" + path + "'");
	}
	const auto doc = nlohmann::json::parse(in, nullptr, false);
	if (doc.is_discarded() || !doc.is_array()) {
		throw Error(ErrorCode::ParseError, "manifest '" + path + "' must be a JSON array");
	}
	const fs::path base = fs::path(path).parent_path();
	std::vector<DatasetManifest> out;
	for (const auto& item : doc) {
		try {
			DatasetManifest m;
			m.name = item.at("name").get<std::string>();
			const fs::path p = item.at("path").get<std::string>();
			m.path = (p.is_relative() ? base / p : p).string();
			m.freq = parse_frequency(item.at("freq").get<std::string>());
			m.term = parse_term(item.value("term", std::string("short")));
			m.horizon = item.value("horizon", term_horizon(m.freq, m.term));
			validate_manifest(m);
			out.push_back(std::move(m));
		} catch (const nlohmann::json::exception& e) {
			throw Error(ErrorCode::ParseError, "manifest '" + path + "': " + e.what());
		}
	}
	return out;
}

RunOutput run_benchmark(const std::vector<DatasetManifest>& manifests, const RunConfig& config) {
	if (manifests.empty()) {
		throw Error(ErrorCode::EmptyRecordSet, "no datasets to evaluate");
	}
	std::vector<std::vector<TimeSeries>> loaded;
	std::vector<TaskInput> inputs;
	loaded.reserve(manifests.size());
	for (const auto& m : manifests) {
		validate_manifest(m);
		loaded.push_back(load_dataset(m.path, format_from_path(m.path), m.freq));
		for (const auto& s : loaded.back()) {
			if (s.freq != m.freq) {
				throw Error(ErrorCode::GridViolation, "series '" + s.id + "' in '" + m.name + "' has frequency " +
				                                          frequency_code(s.freq) + ", manifest says " +
				                                          frequency_code(m.freq));
			}
		}
	}
	for (std::size_t d = 0; d < manifests.size(); ++d) {
		for (const auto& s : loaded[d]) {
			inputs.push_back({manifests[d].name + "/" + s.id, &s, manifests[d].horizon});
		}
	}
	return run_tasks(inputs, config);
}

RunOutput run_benchmark(const std::string& dataset, const std::vector<TimeSeries>& series, int horizon,
                        const RunConfig& config) {
	if (series.empty()) {
		throw Error(ErrorCode::EmptyRecordSet, "no series to evaluate");
	}
	std::vector<TaskInput> inputs;
	for (const auto& s : series) {
		inputs.push_back({dataset + "/" + s.id, &s, horizon});
	}
	return run_tasks(inputs, config);
}

std::string record_to_json(const EvalRecord& record) {
	ordered_json doc;
	doc["task_id"] = record.task_id;
	doc["model"] = record.model;
	doc["mase"] = record.mase;
	doc["wql"] = record.wql;
	doc["rel_mase"] = record.rel_mase;
	doc["rel_wql"] = record.rel_wql;
	return doc.dump();
}

std::string records_jsonl(const std::vector<EvalRecord>& records) {
	std::string out;
	for (const auto& r : records) {
		out += record_to_json(r);
		out += '\n';
	}
	return out;
}

std::string summary_json(const RunOutput& run, const RunConfig& config) {
	ordered_json doc;
	doc["model"] = run.model;
	doc["tasks"] = run.tasks;
	doc["evaluated"] = run.forecasts.size();
	ordered_json agg = ordered_json::object();
	if (run.has_summary) {
		for (const auto& [name, s] : run.summary.models) {
			ordered_json m;
			m["tasks"] = s.tasks;
			m["geo_mean_rel_mase"] = s.geo_mean_rel_mase;
			m["geo_mean_rel_wql"] = s.geo_mean_rel_wql;
			m["mean_rank_mase"] = s.mean_rank_mase;
			m["mean_rank_wql"] = s.mean_rank_wql;
			agg[name] = std::move(m);
		}
	}
	doc["aggregate"] = std::move(agg);
	doc["monotonicity_repairs"] = run.repaired_rows;
	ordered_json excluded = ordered_json::array();
	for (const auto& e : run.exclusions) {
		excluded.push_back({{"task_id", e.task_id}, {"reason", e.reason}});
	}
	doc["not_defined_excluded"] = std::move(excluded);
	ordered_json failed = ordered_json::array();
	for (const auto& f : run.failures) {
		failed.push_back({{"task_id", f.task_id}, {"error", f.error}});
	}
	doc["failures"] = std::move(failed);
	ordered_json cfg;
	cfg["regressor"] = to_string(config.regressor.kind);
	cfg["features"] = {{"calendar", config.features.use_calendar},
	                   {"seasonal", config.features.use_seasonal},
	                   {"index", config.features.use_index},
	                   {"k_seasonal", config.features.k_seasonal}};
	cfg["max_context"] = config.max_context;
	cfg["quantile_levels"] = vector_to_json(config.quantile_levels);
	cfg["point_mode"] = config.point_mode == PointMode::median ? "median" : "mean";
	cfg["parallelism"] = config.parallelism;
	cfg["seed"] = config.seed;
	doc["config"] = std::move(cfg);
	ordered_json timing = ordered_json::object();
	for (const auto& [task, secs] : run.task_seconds) {
		timing[task] = secs;
	}
	doc["wall_clock_seconds"] = std::move(timing);
	return doc.dump(2);
}

void write_run(const RunOutput& run, const RunConfig& config, const std::string& out_dir) {
	std::error_code ec;
	fs::create_directories(out_dir, ec);
	if (ec) {
		throw Error(ErrorCode::IOError, "cannot create '" + out_dir + "': " + ec.message());
	}
	write_text(fs::path(out_dir) / "records.jsonl", records_jsonl(run.records));
	write_text(fs::path(out_dir) / "summary.json", summary_json(run, config) + "\n");
	std::string forecasts;
	for (const auto& f : run.forecasts) {
		ordered_json doc;
		doc["task_id"] = f.task_id;
		doc["model"] = f.model;
		doc["history"] = vector_to_json(f.history);
		doc["truth"] = vector_to_json(f.truth);
		doc["point"] = vector_to_json(f.point);
		doc["q10"] = vector_to_json(f.lower);
		doc["q90"] = vector_to_json(f.upper);
		forecasts += doc.dump();
		forecasts += '\n';
	}
	write_text(fs::path(out_dir) / "forecasts.jsonl", forecasts);
}

RunOutput read_run(const std::string& run_dir) {
	RunOutput run;
	const fs::path dir(run_dir);
	auto read_lines = [&](const char* name, auto&& on_doc) {
		std::ifstream in(dir / name);
		if (!in) {
			throw Error(ErrorCode::IOError, "cannot open '" + (dir / name).string() + "'");
		}
		std::string line;
		std::size_t line_no = 0;
		while (std::getline(in, line)) {
			++line_no;
			if (line.empty()) {
				continue;
			}
			const auto doc = nlohmann::json::parse(line, nullptr, false);
			if (doc.is_discarded()) {
				throw Error(ErrorCode::ParseError, std::string(name) + " line " + std::to_string(line_no));
			}
			on_doc(doc);
		}
	};
	read_lines("records.jsonl", [&](const nlohmann::json& d) {
		run.records.push_back({d.at("task_id").get<std::string>(), d.at("model").get<std::string>(),
		                       d.at("mase").get<double>(), d.at("wql").get<double>(), d.at("rel_mase").get<double>(),
		                       d.at("rel_wql").get<double>()});
	});
	read_lines("forecasts.jsonl", [&](const nlohmann::json& d) {
		ForecastArtifact f;
		f.task_id = d.at("task_id").get<std::string>();
		f.model = d.at("model").get<std::string>();
		f.history = vector_from_json(d.at("history"));
		f.truth = vector_from_json(d.at("truth"));
		f.point = vector_from_json(d.at("point"));
		f.lower = vector_from_json(d.at("q10"));
		f.upper = vector_from_json(d.at("q90"));
		run.forecasts.push_back(std::move(f));
	});
	std::ifstream summary(dir / "summary.json");
	if (summary) {
		const auto doc = nlohmann::json::parse(summary, nullptr, false);
		if (!doc.is_discarded()) {
			run.model = doc.value("model", std::string());
			run.tasks = doc.value("tasks", std::size_t{0});
			run.repaired_rows = doc.value("monotonicity_repairs", std::size_t{0});
			for (const auto& e : doc.value("not_defined_excluded", nlohmann::json::array())) {
				run.exclusions.push_back({e.at("task_id").get<std::string>(), e.at("reason").get<std::string>()});
			}
			for (const auto& f : doc.value("failures", nlohmann::json::array())) {
				run.failures.push_back({f.at("task_id").get<std::string>(), f.at("error").get<std::string>()});
			}
		}
	}
	if (!run.records.empty()) {
		run.summary = aggregate(run.records);
		run.has_summary = true;
	}
	return run;
}

} // namespace tsfm
