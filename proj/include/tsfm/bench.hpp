#pragma once

#include "tsfm/features.hpp"
#include "tsfm/metrics.hpp"
#include "tsfm/quantiles.hpp"
#include "tsfm/regressors.hpp"
#include "tsfm/series.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace tsfm {

enum class Term { short_term, medium_term, long_term };

Term parse_term(const std::string& text);
std::string to_string(Term term);

/// Base prediction length per frequency (S 60, T 48, H 48, D 30, W 8, M 12, Q 8, A 6),
/// times 1 / 10 / 15 for short / medium / long.
int term_horizon(const Frequency& freq, Term term);

struct DatasetManifest {
	std::string name;
	std::string path;
	Frequency freq;
	int horizon = 0;
	Term term = Term::short_term;
};

/// Throws InvalidArgument if the horizon disagrees with the term, IOError if the file is missing.
void validate_manifest(const DatasetManifest& manifest);

/// JSON array of {"name", "path", "freq", "horizon"?, "term"?}; relative paths resolve
/// against the manifest file's directory and a missing horizon follows the term.
std::vector<DatasetManifest> load_manifests(const std::string& path);

inline constexpr int kContextPresets[] = {1024, 2048, 4096, 10000};

struct RunConfig {
	RegressorSpec regressor = make_regressor(RegressorKind::knn);
	FeatureConfig features;
	int max_context = 4096;
	Eigen::VectorXd quantile_levels = default_levels();
	PointMode point_mode = PointMode::median;
	int parallelism = 1;
	std::uint64_t seed = 0;
	/// Name written into records; defaults to the regressor kind.
	std::string model_name;
};

struct TaskFailure {
	std::string task_id;
	std::string error;
};

struct TaskExclusion {
	std::string task_id;
	std::string reason;
};

/// What report() needs to draw one task.
struct ForecastArtifact {
	std::string task_id;
	std::string model;
	Eigen::VectorXd history;  // tail of the history, NaN for missing
	Eigen::VectorXd truth;
	Eigen::VectorXd point;
	Eigen::VectorXd lower;    // 0.1 level
	Eigen::VectorXd upper;    // 0.9 level
};

struct RunOutput {
	std::vector<EvalRecord> records;
	std::vector<TaskFailure> failures;
	std::vector<TaskExclusion> exclusions;
	std::vector<ForecastArtifact> forecasts;
	std::vector<std::pair<std::string, double>> task_seconds;
	std::size_t repaired_rows = 0;
	std::size_t tasks = 0;
	AggregateSummary summary;
	bool has_summary = false;
	std::string model;
};

/// Evaluates the configured regressor and Seasonal Naive on the final window
/// of every series. Task failures are recorded and skipped. Output order
/// follows the manifests regardless of parallelism.
RunOutput run_benchmark(const std::vector<DatasetManifest>& manifests, const RunConfig& config);

/// Same, on in-memory series (one pseudo-dataset named `dataset`).
RunOutput run_benchmark(const std::string& dataset, const std::vector<TimeSeries>& series, int horizon,
                        const RunConfig& config);

std::string record_to_json(const EvalRecord& record);
std::string records_jsonl(const std::vector<EvalRecord>& records);
std::string summary_json(const RunOutput& run, const RunConfig& config);

/// records.jsonl, summary.json and forecasts.jsonl under out_dir.
void write_run(const RunOutput& run, const RunConfig& config, const std::string& out_dir);

/// Reads a directory written by write_run.
RunOutput read_run(const std::string& run_dir);

} // namespace tsfm
