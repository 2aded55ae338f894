#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include "tsfm/error.hpp"
#include "tsfm/synth.hpp"
#include "tsfm/transforms.hpp"

#include <cmath>

using namespace tsfm;
using Catch::Matchers::WithinAbs;

TEST_CASE("z_normalize") {
	SECTION("constant input") {
		const auto [z, tf] = z_normalize(Eigen::VectorXd::Zero(3));
		CHECK(z.isZero());
		CHECK(tf.std == 1.0);
		CHECK(tf.constant);
	}
	SECTION("two points") {
		const auto [z, tf] = z_normalize(Eigen::Vector2d(1, 3));
		CHECK(tf.mean == 2.0);
		CHECK(tf.std == 1.0);
		CHECK(z == Eigen::Vector2d(-1, 1));
		CHECK_FALSE(tf.constant);
	}
	SECTION("round trip") {
		const Eigen::VectorXd y = gen_noise(5.0, 3.0, 200, 11);
		const auto [z, tf] = z_normalize(y);
		CHECK_THAT(z.mean(), WithinAbs(0.0, 1e-12));
		CHECK_THAT(std::sqrt(z.array().square().mean()), WithinAbs(1.0, 1e-12));
		CHECK((tf.inverse(z) - y).cwiseAbs().maxCoeff() < 1e-12);
		CHECK((tf.forward(y) - z).cwiseAbs().maxCoeff() < 1e-15);
	}
}

TEST_CASE("box_cox scalar pair") {
	for (double lambda : {-2.0, -0.5, 0.0, 0.3, 1.0, 2.0}) {
		for (double x : {0.01, 0.5, 1.0, 7.0, 1234.5}) {
			const double z = box_cox(x, lambda);
			const double ref = lambda == 0.0 ? std::log(x) : (std::pow(x, lambda) - 1.0) / lambda;
			CHECK_THAT(z, WithinAbs(ref, 1e-12 * std::max(1.0, std::abs(ref))));
			CHECK_THAT(inverse_box_cox(z, lambda), WithinAbs(x, 1e-10 * x));
		}
	}
}

TEST_CASE("likelihood matches the written-out Gaussian profile up to a constant") {
	const Eigen::VectorXd x = (gen_noise(0.0, 0.6, 64, 5).array().exp()).matrix();
	const std::vector<double> xs(x.data(), x.data() + x.size());
	const double offset = box_cox_log_likelihood(x, 1.0) - test::box_cox_profile_likelihood(xs, 1.0);
	for (int i = -20; i <= 20; ++i) {
		const double lambda = i / 10.0;
		CHECK_THAT(box_cox_log_likelihood(x, lambda) - test::box_cox_profile_likelihood(xs, lambda),
		           WithinAbs(offset, 1e-8));
	}
}

TEST_CASE("power_transform") {
	SECTION("log-normal sample selects lambda near zero") {
		const Eigen::VectorXd y = (gen_noise(1.0, 0.8, 512, 2024).array().exp()).matrix();
		const auto [z, tf] = power_transform(y);
		CHECK(std::abs(tf.lambda) <= 0.3);
		CHECK(tf.shift == 0.0);
		// Grid argmax from the independent likelihood.
		const std::vector<double> ys(y.data(), y.data() + y.size());
		double best = -1e300;
		double arg = 0.0;
		for (int i = -20; i <= 20; ++i) {
			const double ll = test::box_cox_profile_likelihood(ys, i / 10.0);
			if (ll > best) {
				best = ll;
				arg = i / 10.0;
			}
		}
		CHECK(tf.lambda == arg);
		CHECK_THAT(z.mean(), WithinAbs(0.0, 1e-12));
	}
	SECTION("shift rule") {
		Eigen::VectorXd y(4);
		y << -5, 0, 2, 10;
		const auto [z, tf] = power_transform(y);
		CHECK(tf.shift == 6.0);
		CHECK((y.array() + tf.shift).minCoeff() >= 1.0);
		CHECK((tf.inverse(z) - y).cwiseAbs().maxCoeff() < 1e-9);
	}
	SECTION("constant input is flagged") {
		const auto [z, tf] = power_transform(Eigen::VectorXd::Constant(5, 4.0));
		CHECK(tf.constant);
		CHECK((tf.inverse(z) - Eigen::VectorXd::Constant(5, 4.0)).cwiseAbs().maxCoeff() < 1e-9);
	}
	CHECK_THROWS_AS(power_transform(Eigen::VectorXd::Ones(1)), Error);
}

TEST_CASE("round trips on random vectors") {
	Xorshift64Star rng(99);
	for (int trial = 0; trial < 200; ++trial) {
		const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform() * 60);
		const double offset = rng.uniform(-50.0, 50.0);
		const double scale = std::exp(rng.uniform(-3.0, 3.0));
		Eigen::VectorXd y(n);
		for (auto& v : y) {
			v = offset + scale * rng.normal();
		}
		const auto [zn, ztf] = z_normalize(y);
		REQUIRE((ztf.inverse(zn) - y).cwiseAbs().maxCoeff() < 1e-9);
		const auto [pn, ptf] = power_transform(y);
		REQUIRE((ptf.inverse(pn) - y).cwiseAbs().maxCoeff() < 1e-9);
	}
}

TEST_CASE("inverse maps far-out quantiles to finite values") {
	Eigen::VectorXd y(6);
	y << 1, 2, 4, 8, 16, 32;
	const auto [z, tf] = power_transform(y);
	for (double q : {-50.0, -5.0, 5.0, 50.0}) {
		CHECK(std::isfinite(tf.inverse(q)));
	}
}

TEST_CASE("round trip stays exact for strongly negative lambda on large values") {
	int negative = 0;
	for (std::uint64_t seed = 0; seed < 30; ++seed) {
		const Eigen::VectorXd y = (400.0 + 30.0 * gen_noise(0.0, 1.0, 80, seed).array().exp()).matrix();
		const auto [z, tf] = power_transform(y);
		negative += tf.lambda <= -1.0;
		REQUIRE((tf.inverse(z) - y).cwiseAbs().maxCoeff() < 1e-9);
	}
	CHECK(negative > 0);
}
