#include "support/suites.hpp"

#include <catch_amalgamated.hpp>

#include "tsfm/bench.hpp"
#include "tsfm/dataset.hpp"
#include "tsfm/error.hpp"
#include "tsfm/report.hpp"
#include "tsfm/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tsfm;
namespace fs = std::filesystem;

namespace {

std::vector<TimeSeries> suite(int count, Eigen::Index length) {
	std::vector<TimeSeries> out;
	for (int i = 0; i < count; ++i) {
		SynthSpec spec;
		spec.kind = SynthKind::additive_combo;
		spec.length = length;
		spec.seed = static_cast<std::uint64_t>(i);
		spec.id = "s" + std::to_string(i);
		spec.params = {{"a", 0.001 * i}, {"b", 3.0}, {"period", 24}, {"amplitude", 1.0 + 0.1 * i}, {"noise_std", 0.2}};
		out.push_back(gen_pattern(spec));
	}
	return out;
}

std::string slurp(const fs::path& p) {
	std::ifstream in(p, std::ios::binary);
	std::ostringstream s;
	s << in.rdbuf();
	return s.str();
}

} // namespace

TEST_CASE("terms and horizons") {
	CHECK(term_horizon({FrequencyUnit::hour, 1}, Term::short_term) == 48);
	CHECK(term_horizon({FrequencyUnit::hour, 1}, Term::medium_term) == 480);
	CHECK(term_horizon({FrequencyUnit::hour, 1}, Term::long_term) == 720);
	CHECK(term_horizon({FrequencyUnit::month, 1}, Term::short_term) == 12);
	CHECK(term_horizon({FrequencyUnit::day, 1}, Term::short_term) == 30);
	CHECK(parse_term("long") == Term::long_term);
	CHECK(to_string(Term::medium_term) == "medium");
	CHECK_THROWS_AS(parse_term("forever"), Error);
}

TEST_CASE("manifests") {
	const auto dir = fs::temp_directory_path() / "tsfm_manifest_test";
	fs::create_directories(dir);
	{
		std::ofstream data(dir / "d.jsonl");
		write_jsonl(data, suite(2, 200));
		std::ofstream(dir / "m.json") << R"([{"name": "syn", "path": "d.jsonl", "freq": "H", "term": "short"}])";
		std::ofstream(dir / "bad.json") << R"([{"name": "syn", "path": "d.jsonl", "freq": "H", "horizon": 7, "term": "short"}])";
	}
	const auto m = load_manifests((dir / "m.json").string());
	REQUIRE(m.size() == 1);
	CHECK(m[0].horizon == 48);
	CHECK(fs::path(m[0].path).is_absolute());
	CHECK_THROWS_AS(validate_manifest(load_manifests((dir / "bad.json").string()).at(0)), Error);
	const auto run = run_benchmark(m, RunConfig{});
	CHECK(run.records.size() == 4);
	CHECK(run.records[0].task_id == "syn/s0");
	fs::remove_all(dir);
}

TEST_CASE("empty inputs") {
	try {
		run_benchmark(std::vector<DatasetManifest>{}, RunConfig{});
		FAIL("accepted");
	} catch (const Error& e) {
		CHECK(e.code() == ErrorCode::EmptyRecordSet);
	}
}

TEST_CASE("seasonal naive against itself") {
	RunConfig config;
	config.regressor = make_regressor(RegressorKind::seasonal_naive);
	const auto run = run_benchmark("syn", suite(5, 300), 48, config);
	REQUIRE(run.has_summary);
	const auto& s = run.summary.models.at("seasonal_naive");
	CHECK(s.geo_mean_rel_mase == 1.0);
	CHECK(s.geo_mean_rel_wql == 1.0);
	for (const auto& r : run.records) {
		CHECK(r.rel_mase == 1.0);
		CHECK(r.rel_wql == 1.0);
	}
}

TEST_CASE("knn beats the baseline on the periodic suite") {
	const auto run = run_benchmark("syn", test::periodic_trend_suite(6, 1048), 48, RunConfig{});
	REQUIRE(run.has_summary);
	CHECK(run.summary.models.at("knn").geo_mean_rel_mase < 1.0);
	CHECK(run.summary.models.at("seasonal_naive").geo_mean_rel_mase == 1.0);
	CHECK(run.records.size() == 12);
	CHECK(run.records[0].model == "knn");
	CHECK(run.records[1].model == "seasonal_naive");
}

TEST_CASE("failures and exclusions are quarantined per task") {
	auto series = suite(3, 300);
	series[1].values.tail(5).setConstant(kMissing);   // missing truth: excluded
	series[2].values = series[2].values.head(40).eval(); // too short for the horizon: fails
	const auto run = run_benchmark("syn", series, 48, RunConfig{});
	CHECK(run.tasks == 3);
	CHECK(run.exclusions.size() == 1);
	CHECK(run.failures.size() == 1);
	CHECK(run.records.size() == 2);
	SynthSpec flat;
	flat.kind = SynthKind::linear_trend;
	flat.params = {{"a", 0.0}, {"b", 2.0}};
	flat.length = 200;
	const auto constant = run_benchmark("flat", {gen_pattern(flat)}, 24, RunConfig{});
	CHECK(constant.exclusions.size() == 1); // zero MASE scale
	CHECK_FALSE(constant.has_summary);
}

TEST_CASE("parallel runs match serial runs byte for byte") {
	const auto series = suite(6, 400);
	RunConfig serial;
	RunConfig parallel;
	parallel.parallelism = 4;
	const auto a = run_benchmark("syn", series, 48, serial);
	const auto b = run_benchmark("syn", series, 48, parallel);
	CHECK(records_jsonl(a.records) == records_jsonl(b.records));
}

TEST_CASE("record json layout") {
	const EvalRecord r{"d/a", "knn", 0.5, 0.25, 0.75, 1.0};
	const auto doc = nlohmann::ordered_json::parse(record_to_json(r));
	std::vector<std::string> keys;
	for (auto it = doc.begin(); it != doc.end(); ++it) {
		keys.push_back(it.key());
	}
	CHECK(keys == std::vector<std::string>{"task_id", "model", "mase", "wql", "rel_mase", "rel_wql"});
	CHECK(doc["mase"] == 0.5);
}

TEST_CASE("run directory round trip and report") {
	const auto dir = fs::temp_directory_path() / "tsfm_run_test";
	fs::remove_all(dir);
	RunConfig config;
	const auto run = run_benchmark("syn", suite(2, 300), 48, config);
	write_run(run, config, (dir / "run").string());
	const auto back = read_run((dir / "run").string());
	CHECK(records_jsonl(back.records) == records_jsonl(run.records));
	CHECK(back.forecasts.size() == 2);

	const auto written = report(back, (dir / "report").string());
	CHECK(written.size() == 4);
	const std::string table = slurp(dir / "report" / "scores.md");
	std::istringstream lines(table);
	std::string line;
	int rows = 0;
	while (std::getline(lines, line)) {
		++rows;
	}
	CHECK(rows == 2 + 2 + 1); // header, rule, 2 tasks, summary row
	CHECK(table.find("Geo. mean relative") != std::string::npos);
	const std::string svg = slurp(dir / "report" / "syn_s0.svg");
	CHECK(svg.rfind("<?xml", 0) == 0);
	CHECK(svg.find("</svg>") != std::string::npos);
	const auto subset = report(back, (dir / "subset").string(), {"syn/s1"});
	CHECK(subset.size() == 3);
	fs::remove_all(dir);
}

TEST_CASE("degenerate band collapses onto the point line") {
	ForecastArtifact f;
	f.task_id = "a&b";
	f.model = "knn";
	f.history = Eigen::VectorXd::LinSpaced(10, 0.0, 9.0);
	f.truth = Eigen::VectorXd::Constant(3, 5.0);
	f.point = Eigen::VectorXd::Constant(3, 4.0);
	f.lower = f.point;
	f.upper = f.point;
	const std::string svg = forecast_svg(f);
	CHECK(svg.find("a&amp;b") != std::string::npos);
	// Band vertices: upper edge forward, lower edge backward; identical y on both.
	const auto band_at = svg.find("<polygon");
	const auto pts_at = svg.find("points=\"", band_at) + 8;
	std::istringstream pts(svg.substr(pts_at, svg.find('"', pts_at) - pts_at));
	std::vector<std::string> ys;
	std::string xy;
	while (pts >> xy) {
		ys.push_back(xy.substr(xy.find(',') + 1));
	}
	REQUIRE(ys.size() == 6);
	for (const auto& y : ys) {
		CHECK(y == ys[0]);
	}
}
