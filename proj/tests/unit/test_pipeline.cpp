#include "support/suites.hpp"

#include <catch_amalgamated.hpp>

#include "tsfm/error.hpp"
#include "tsfm/metrics.hpp"
#include "tsfm/pipeline.hpp"
#include "tsfm/synth.hpp"

#include <cmath>

using namespace tsfm;

namespace {

TimeSeries periodic(Eigen::Index n, std::uint64_t seed, double noise = 0.1) {
	SynthSpec spec;
	spec.kind = SynthKind::additive_combo;
	spec.length = n;
	spec.seed = seed;
	spec.params = {{"a", 0.002}, {"b", 5.0}, {"period", 24}, {"amplitude", 1.0}, {"noise_std", noise}};
	return gen_pattern(spec);
}

} // namespace

TEST_CASE("pipeline output shape and monotonicity") {
	SynthSpec spec;
	spec.kind = SynthKind::seasonal;
	spec.length = 800;
	spec.params = {{"period", 24}};
	const ForecastTask task{gen_pattern(spec), 200};
	const auto r = run_pipeline(task, FeatureConfig{}, make_regressor(RegressorKind::knn));
	CHECK(r.prediction.values.rows() == 200);
	CHECK(r.prediction.values.cols() == 19);
	CHECK(is_row_monotone(r.prediction.values));
	CHECK(r.context_length == 800);
	CHECK(r.training_rows == 800);
	REQUIRE_FALSE(r.seasonalities.empty());
	CHECK(std::abs(r.seasonalities.freqs[0] - 1.0 / 24.0) < 1.0 / 1600.0);
}

TEST_CASE("constant series short-circuits") {
	TimeSeries s = periodic(100, 1);
	s.values.setConstant(3.25);
	const auto r = run_pipeline({s, 12}, FeatureConfig{}, make_regressor(RegressorKind::knn));
	CHECK(r.constant_target);
	CHECK((r.prediction.values.array() - 3.25).abs().maxCoeff() < 1e-9);
}

TEST_CASE("missing targets are dropped from training") {
	TimeSeries s = periodic(300, 2);
	for (int i = 0; i < 300; i += 10) {
		s.values[i] = kMissing;
	}
	const auto r = run_pipeline({s, 24}, FeatureConfig{}, make_regressor(RegressorKind::knn));
	CHECK(r.training_rows == 270);
	CHECK(r.prediction.values.allFinite());
	CHECK(is_row_monotone(r.prediction.values));
}

TEST_CASE("context truncation") {
	const TimeSeries s = periodic(3000, 3);
	const ForecastTask task{s, 48, 1024, 24};
	const auto r = run_pipeline(task, FeatureConfig{}, make_regressor(RegressorKind::knn));
	CHECK(r.context_length == 1024);
	CHECK(r.training_rows == 1024);
}

TEST_CASE("seasonal naive bypasses featurization") {
	const TimeSeries s = periodic(200, 4);
	const auto r = run_pipeline({s, 30, 4096, 24}, FeatureConfig{}, make_regressor(RegressorKind::seasonal_naive));
	CHECK(r.seasonalities.empty());
	for (int h = 0; h < 30; ++h) {
		CHECK(r.prediction.values(h, 0) == s.values[200 - 24 + (h % 24)]);
	}
}

TEST_CASE("seasonal naive is exact on a perfectly periodic series") {
	SynthSpec spec;
	spec.kind = SynthKind::seasonal;
	spec.length = 24 * 10;
	spec.params = {{"period", 24}};
	const TimeSeries full = gen_pattern(spec);
	TimeSeries hist = full;
	hist.values = full.values.head(24 * 8);
	const auto r = run_pipeline({hist, 48, 4096, 24}, FeatureConfig{}, make_regressor(RegressorKind::seasonal_naive));
	CHECK((r.prediction.values.col(9) - full.values.tail(48)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("knn with full features beats seasonal naive on trending periodic series") {
	std::vector<double> rel;
	for (const auto& full : test::periodic_trend_suite(4, 1048)) {
		TimeSeries hist = full;
		hist.values = full.values.head(1000);
		const Eigen::VectorXd truth = full.values.tail(48);
		const ForecastTask task{hist, 48, 4096, 24};
		const auto model = run_pipeline(task, FeatureConfig{}, make_regressor(RegressorKind::knn));
		const auto naive = run_pipeline(task, FeatureConfig{}, make_regressor(RegressorKind::seasonal_naive));
		const double m = *mase(truth, point_forecast(model.prediction, PointMode::median), hist.values, 24);
		const double b = *mase(truth, point_forecast(naive.prediction, PointMode::median), hist.values, 24);
		rel.push_back(relative_score(m, b));
	}
	CHECK(geometric_mean(rel) < 1.0);
}

TEST_CASE("pipeline is deterministic") {
	const TimeSeries s = periodic(400, 9, 0.5);
	const auto a = run_pipeline({s, 24}, FeatureConfig{}, make_regressor(RegressorKind::knn));
	const auto b = run_pipeline({s, 24}, FeatureConfig{}, make_regressor(RegressorKind::knn));
	CHECK(a.prediction.values == b.prediction.values);
}

TEST_CASE("bad levels are rejected") {
	const TimeSeries s = periodic(100, 1);
	CHECK_THROWS_AS(run_pipeline({s, 4}, FeatureConfig{}, make_regressor(RegressorKind::knn), Eigen::Vector2d(0.5, 0.4)),
	                Error);
}
