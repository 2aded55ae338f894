#include <catch_amalgamated.hpp>

#include "tsfm/error.hpp"
#include "tsfm/quantiles.hpp"

using namespace tsfm;
using Catch::Matchers::WithinAbs;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
	try {
		f();
	} catch (const Error& e) {
		return e.code();
	}
	return ErrorCode::InvalidArgument;
}

QuantilePrediction make(const Eigen::VectorXd& levels, const Eigen::MatrixXd& values) {
	QuantilePrediction p;
	p.levels = levels;
	p.values = values;
	return p;
}

} // namespace

TEST_CASE("level grids") {
	const auto d = default_levels();
	REQUIRE(d.size() == 19);
	CHECK_THAT(d[0], WithinAbs(0.05, 1e-15));
	CHECK_THAT(d[18], WithinAbs(0.95, 1e-15));
	CHECK(find_level(d, 0.5).value() == 9);
	const auto e = evaluation_levels();
	REQUIRE(e.size() == 9);
	for (Eigen::Index i = 0; i < e.size(); ++i) {
		CHECK(find_level(d, e[i]).has_value());
	}
	CHECK_FALSE(find_level(e, 0.55).has_value());
}

TEST_CASE("parse and validate levels") {
	CHECK(parse_levels("0.1,0.5,0.9") == Eigen::Vector3d(0.1, 0.5, 0.9));
	CHECK_THROWS_AS(parse_levels("0.5,0.1"), Error);
	CHECK_THROWS_AS(parse_levels("0,0.5"), Error);
	CHECK_THROWS_AS(parse_levels("0.5,1"), Error);
	CHECK_THROWS_AS(parse_levels("a,b"), Error);
	CHECK_THROWS_AS(validate_levels(Eigen::VectorXd()), Error);
}

TEST_CASE("repair_monotone") {
	Eigen::MatrixXd v(3, 3);
	v << 1, 2, 3,
	     3, 1, 2,
	     0, 0, 0;
	CHECK_FALSE(is_row_monotone(v));
	CHECK(repair_monotone(v) == 1);
	CHECK(v.row(1) == Eigen::RowVector3d(1, 2, 3));
	CHECK(is_row_monotone(v));
	CHECK(repair_monotone(v) == 0);
}

TEST_CASE("ensemble_quantiles") {
	const Eigen::Vector3d levels(0.25, 0.5, 0.75);
	Eigen::MatrixXd a(2, 3);
	a << 0, 1, 2,
	     5, 6, 9;
	SECTION("idempotent") {
		const auto e = ensemble_quantiles(make(levels, a), make(levels, a));
		CHECK(e.values == a);
		CHECK(e.levels == levels);
	}
	SECTION("constants average") {
		const auto e = ensemble_quantiles(constant_prediction(levels, 4, 0.0), constant_prediction(levels, 4, 2.0));
		CHECK(e.values == Eigen::MatrixXd::Constant(4, 3, 1.0));
	}
	SECTION("monotone inputs give monotone output") {
		Eigen::MatrixXd b(2, 3);
		b << -4, 3, 3.5,
		     0, 0.5, 20;
		const auto e = ensemble_quantiles(make(levels, a), make(levels, b));
		CHECK(is_row_monotone(e.values));
		CHECK(e.repaired_rows == 0);
		CHECK(e.values(1, 2) == 14.5);
	}
	SECTION("shape checks") {
		CHECK(code_of([&] { ensemble_quantiles(make(levels, a), make(levels, a.topRows(1))); }) ==
		      ErrorCode::ShapeMismatch);
		CHECK(code_of([&] { ensemble_quantiles(make(levels, a), make(Eigen::Vector3d(0.2, 0.5, 0.8), a)); }) ==
		      ErrorCode::ShapeMismatch);
	}
}

TEST_CASE("point_forecast") {
	SECTION("degenerate distribution") {
		const auto p = constant_prediction(default_levels(), 3, 7.5);
		CHECK((point_forecast(p, PointMode::median).array() == 7.5).all());
		CHECK((point_forecast(p, PointMode::mean).array() - 7.5).abs().maxCoeff() < 1e-12);
	}
	SECTION("median reads the 0.5 level") {
		const auto p = make(Eigen::Vector3d(0.25, 0.5, 0.75), Eigen::RowVector3d(0, 1, 2));
		CHECK(point_forecast(p, PointMode::median)[0] == 1.0);
		CHECK_THAT(point_forecast(p, PointMode::mean)[0], WithinAbs(1.0, 1e-12));
	}
	SECTION("missing median") {
		const auto p = make(Eigen::Vector2d(0.25, 0.75), Eigen::RowVector2d(0, 2));
		CHECK(code_of([&] { point_forecast(p, PointMode::median); }) == ErrorCode::MissingMedianLevel);
	}
	CHECK(parse_point_mode("mean") == PointMode::mean);
	CHECK(parse_point_mode("median") == PointMode::median);
	CHECK_THROWS_AS(parse_point_mode("mode"), Error);
}
