#include <catch_amalgamated.hpp>

#include "tsfm/error.hpp"
#include "tsfm/regressors.hpp"
#include "tsfm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace tsfm;

namespace {

TimeSeries series_of(std::initializer_list<double> v) {
	TimeSeries s;
	s.values = Eigen::Map<const Eigen::VectorXd>(v.begin(), static_cast<Eigen::Index>(v.size()));
	return s;
}

TabularSplit split_from(const Eigen::MatrixXd& x_train, const Eigen::VectorXd& y, const Eigen::MatrixXd& x_test) {
	TabularSplit s;
	s.x_train.values = x_train;
	s.y_train = y;
	s.x_test.values = x_test;
	for (Eigen::Index c = 0; c < x_train.cols(); ++c) {
		s.x_train.column_names.push_back("f" + std::to_string(c));
	}
	s.x_test.column_names = s.x_train.column_names;
	return s;
}

// Full scan: standardize with population moments, sort every row by distance
// (ties to the lower row), then walk the weighted CDF.
double brute_force_knn_quantile(const TabularSplit& s, Eigen::Index test_row, int k, double q) {
	const Eigen::Index n = s.x_train.rows();
	const Eigen::Index d = s.x_train.cols();
	std::vector<double> mean(d, 0.0), sd(d, 0.0);
	for (Eigen::Index c = 0; c < d; ++c) {
		for (Eigen::Index i = 0; i < n; ++i) {
			mean[c] += s.x_train.values(i, c) / static_cast<double>(n);
		}
		for (Eigen::Index i = 0; i < n; ++i) {
			sd[c] += std::pow(s.x_train.values(i, c) - mean[c], 2) / static_cast<double>(n);
		}
		sd[c] = sd[c] < 1e-24 ? 1.0 : std::sqrt(sd[c]);
	}
	std::vector<std::pair<double, Eigen::Index>> scan;
	for (Eigen::Index i = 0; i < n; ++i) {
		double acc = 0.0;
		for (Eigen::Index c = 0; c < d; ++c) {
			const double a = (s.x_train.values(i, c) - mean[c]) / sd[c];
			const double b = (s.x_test.values(test_row, c) - mean[c]) / sd[c];
			acc += (a - b) * (a - b);
		}
		scan.emplace_back(std::sqrt(acc), i);
	}
	std::sort(scan.begin(), scan.end());
	std::vector<std::pair<double, double>> nb;
	double total = 0.0;
	for (int j = 0; j < k; ++j) {
		const double w = 1.0 / (scan[j].first + 1e-9);
		nb.emplace_back(s.y_train[scan[j].second], w);
		total += w;
	}
	std::stable_sort(nb.begin(), nb.end(), [](auto a, auto b) { return a.first < b.first; });
	double cum = 0.0;
	for (const auto& [y, w] : nb) {
		cum += w;
		if (cum >= q * total * (1.0 - 1e-12)) {
			return y;
		}
	}
	return nb.back().first;
}

} // namespace

TEST_CASE("regressor kinds") {
	CHECK(parse_regressor_kind("knn") == RegressorKind::knn);
	CHECK(parse_regressor_kind("seasonal_naive") == RegressorKind::seasonal_naive);
	CHECK(to_string(RegressorKind::external) == "external");
	CHECK_THROWS_AS(parse_regressor_kind("catboost"), Error);
	CHECK_THROWS_AS(make_regressor(RegressorKind::external), Error);
	CHECK_THROWS_AS(make_regressor(RegressorKind::knn, {{"endpoint", "http://x"}}), Error);
	const auto ext = make_regressor(RegressorKind::external, {{"endpoint", "http://127.0.0.1:9"}});
	REQUIRE(ext.client);
	CHECK(ext.client->timeout().count() == 30000);
}

TEST_CASE("seasonal_naive_forecast") {
	const auto levels = default_levels();
	SECTION("copies the last season") {
		const auto p = seasonal_naive_forecast(series_of({1, 2, 3, 4, 5, 6}), 3, 3, levels);
		CHECK(p.values.col(0) == Eigen::Vector3d(4, 5, 6));
		CHECK(p.values.col(18) == Eigen::Vector3d(4, 5, 6));
	}
	SECTION("horizon beyond one season wraps") {
		const auto p = seasonal_naive_forecast(series_of({1, 2, 3, 4, 5, 6}), 7, 3, levels);
		const Eigen::VectorXd expect = (Eigen::VectorXd(7) << 4, 5, 6, 4, 5, 6, 4).finished();
		CHECK(p.values.col(3) == expect);
	}
	SECTION("m = 1 repeats the last value") {
		const auto p = seasonal_naive_forecast(series_of({9, 8, 7}), 4, 1, levels);
		CHECK((p.values.array() == 7.0).all());
	}
	SECTION("short history falls back to the last value") {
		const auto p = seasonal_naive_forecast(series_of({3, 5}), 3, 7, levels);
		CHECK((p.values.array() == 5.0).all());
	}
	SECTION("missing lag reaches back one more season") {
		const auto p = seasonal_naive_forecast(series_of({1, 2, 3, 4, kMissing, 6}), 3, 3, levels);
		CHECK(p.values.col(0) == Eigen::Vector3d(4, 2, 6));
	}
	CHECK_THROWS_AS(seasonal_naive_forecast(series_of({1, 2}), 1, 0, levels), Error);
}

TEST_CASE("knn degenerate cases") {
	const auto levels = default_levels();
	SECTION("duplicated single point") {
		const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(5, 2, 1.5);
		const auto p = knn_quantile_fit_predict(split_from(x, Eigen::VectorXd::Constant(5, 4.0),
		                                                   Eigen::MatrixXd::Random(3, 2)),
		                                        levels);
		CHECK((p.values.array() == 4.0).all());
	}
	SECTION("an exact match dominates") {
		Eigen::MatrixXd x(4, 1);
		x << 0, 1, 2, 3;
		const Eigen::Vector4d y(10, 20, 30, 40);
		Eigen::MatrixXd t(1, 1);
		t << 2;
		const auto p = knn_quantile_fit_predict(split_from(x, y, t), levels);
		CHECK((p.values.array() == 30.0).all());
	}
	SECTION("too few rows") {
		try {
			knn_quantile_fit_predict(split_from(Eigen::MatrixXd::Ones(2, 1), Eigen::Vector2d(1, 2),
			                                    Eigen::MatrixXd::Ones(1, 1)),
			                         levels);
			FAIL("accepted two rows");
		} catch (const Error& e) {
			CHECK(e.code() == ErrorCode::TooFewRows);
		}
	}
}

TEST_CASE("knn matches a brute-force neighbour scan") {
	Xorshift64Star rng(5);
	const auto levels = default_levels();
	for (int trial = 0; trial < 20; ++trial) {
		const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng.uniform() * 90);
		const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.uniform() * 4);
		Eigen::MatrixXd x(n, d), t(5, d);
		Eigen::VectorXd y(n);
		for (Eigen::Index i = 0; i < n; ++i) {
			for (Eigen::Index c = 0; c < d; ++c) {
				x(i, c) = std::round(rng.uniform(0.0, 6.0)) * (c + 1); // coarse grid forces distance ties
			}
			y[i] = rng.normal();
		}
		for (Eigen::Index i = 0; i < 5; ++i) {
			for (Eigen::Index c = 0; c < d; ++c) {
				t(i, c) = rng.uniform(-1.0, 7.0) * (c + 1);
			}
		}
		const auto s = split_from(x, y, t);
		const int k = std::max(3, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
		const auto p = knn_quantile_fit_predict(s, levels);
		for (Eigen::Index r = 0; r < 5; ++r) {
			for (Eigen::Index q = 0; q < levels.size(); ++q) {
				REQUIRE(p.values(r, q) == brute_force_knn_quantile(s, r, k, levels[q]));
			}
		}
	}
}

TEST_CASE("knn median on a linear target stays inside the neighbour hull") {
	Eigen::MatrixXd x(100, 1);
	Eigen::VectorXd y(100);
	for (int i = 0; i < 100; ++i) {
		x(i, 0) = i;
		y[i] = 3.0 * i + 1.0;
	}
	Eigen::MatrixXd t(3, 1);
	t << 20.4, 55.0, 99.0;
	const auto s = split_from(x, y, t);
	const auto p = knn_quantile_fit_predict(s, Eigen::Vector3d(0.1, 0.5, 0.9));
	for (Eigen::Index r = 0; r < 3; ++r) {
		// k = 10 nearest rows on a line span at most 10 consecutive indices.
		std::vector<std::pair<double, int>> dist;
		for (int i = 0; i < 100; ++i) {
			dist.emplace_back(std::abs(i - t(r, 0)), i);
		}
		std::sort(dist.begin(), dist.end());
		double lo = 1e300, hi = -1e300;
		for (int j = 0; j < 10; ++j) {
			lo = std::min(lo, y[dist[j].second]);
			hi = std::max(hi, y[dist[j].second]);
		}
		CHECK(p.values(r, 1) >= lo);
		CHECK(p.values(r, 1) <= hi);
	}
}

TEST_CASE("fit_predict dispatches and keeps rows monotone") {
	Eigen::MatrixXd x(30, 1);
	Eigen::VectorXd y(30);
	for (int i = 0; i < 30; ++i) {
		x(i, 0) = i;
		y[i] = std::sin(i * 0.7);
	}
	Eigen::MatrixXd t(4, 1);
	t << 30, 31, 32, 33;
	const auto s = split_from(x, y, t);
	const auto knn = fit_predict(make_regressor(RegressorKind::knn), s, default_levels());
	CHECK(knn.values.rows() == 4);
	CHECK(is_row_monotone(knn.values));
	const auto k3 = fit_predict(make_regressor(RegressorKind::knn, {{"neighbors", "3"}}), s, default_levels());
	CHECK(is_row_monotone(k3.values));
	const auto sn = fit_predict(make_regressor(RegressorKind::seasonal_naive, {{"m", "5"}}), s, default_levels());
	CHECK(sn.values(0, 0) == y[25]);
	CHECK_THROWS_AS(fit_predict(make_regressor(RegressorKind::knn, {{"neighbors", "x"}}), s, default_levels()),
	                Error);
}
