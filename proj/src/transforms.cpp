#include "tsfm/transforms.hpp"

#include "tsfm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsfm {

namespace {

struct Moments {
	double mean;
	double std;
	bool constant;
};

Moments population_moments(const Eigen::VectorXd& y) {
	const double mean = y.mean();
	const double var = (y.array() - mean).square().mean();
	const double sd = std::sqrt(var);
	if (sd < kConstantStdThreshold) {
		return {mean, 1.0, true};
	}
	return {mean, sd, false};
}

// Keeps x^lambda (equivalently 1 + lambda * boxcox) positive so the inverse stays finite.
constexpr double kBaseFloor = 1e-12;

} // namespace

double box_cox(double x, double lambda) {
	if (lambda == 0.0) {
		return std::log(x);
	}
	return std::expm1(lambda * std::log(x)) / lambda;
}

double inverse_box_cox(double z, double lambda) {
	if (lambda == 0.0) {
		return std::exp(z);
	}
	const double base = std::max(1.0 + lambda * z, kBaseFloor);
	return std::exp(std::log(base) / lambda);
}

double box_cox_log_likelihood(const Eigen::VectorXd& x, double lambda) {
	const auto n = static_cast<double>(x.size());
	const Eigen::ArrayXd logx = x.array().log();
	// var(box_cox) = var(x^lambda) / lambda^2, computed without the -1 offset.
	const Eigen::ArrayXd w = lambda == 0.0 ? logx : (lambda * logx).exp();
	double var = (w - w.mean()).square().mean();
	if (lambda != 0.0) {
		var /= lambda * lambda;
	}
	if (var <= 0.0) {
		return -std::numeric_limits<double>::infinity();
	}
	return -0.5 * n * std::log(var) + (lambda - 1.0) * logx.sum();
}

double TargetTransform::power_core(double x) const {
	return lambda == 0.0 ? std::log(x) : std::exp(lambda * std::log(x));
}

Eigen::VectorXd TargetTransform::forward(const Eigen::VectorXd& y) const {
	if (kind == TransformKind::znorm) {
		return (y.array() - mean) / std;
	}
	const double sign = lambda < 0.0 ? -1.0 : 1.0;
	const Eigen::VectorXd w = y.unaryExpr([this](double v) { return power_core(v + shift); });
	return sign * (w.array() - mean) / std;
}

double TargetTransform::inverse(double z) const {
	if (kind == TransformKind::znorm) {
		return z * std + mean;
	}
	if (lambda == 0.0) {
		return std::exp(z * std + mean) - shift;
	}
	const double sign = lambda < 0.0 ? -1.0 : 1.0;
	const double w = std::max(mean + sign * z * std, kBaseFloor);
	return std::exp(std::log(w) / lambda) - shift;
}

Eigen::VectorXd TargetTransform::inverse(const Eigen::VectorXd& z) const {
	return z.unaryExpr([this](double v) { return inverse(v); });
}

std::pair<Eigen::VectorXd, TargetTransform> z_normalize(const Eigen::VectorXd& y) {
	if (y.size() < 1) {
		throw Error(ErrorCode::TooShort, "z-normalization needs at least one value");
	}
	const Moments m = population_moments(y);
	TargetTransform tf;
	tf.kind = TransformKind::znorm;
	tf.mean = m.mean;
	tf.std = m.std;
	tf.constant = m.constant;
	return {tf.forward(y), tf};
}

std::pair<Eigen::VectorXd, TargetTransform> power_transform(const Eigen::VectorXd& y) {
	if (y.size() < 2) {
		throw Error(ErrorCode::TooShort, "power transform needs at least two values");
	}
	TargetTransform tf;
	tf.kind = TransformKind::power;
	const double lo = y.minCoeff();
	tf.shift = lo <= 0.0 ? 1.0 - lo : 0.0;
	const Eigen::VectorXd x = y.array() + tf.shift;

	double best_ll = -std::numeric_limits<double>::infinity();
	tf.lambda = 1.0;
	for (int i = -20; i <= 20; ++i) {
		const double lambda = static_cast<double>(i) / 10.0;
		const double ll = box_cox_log_likelihood(x, lambda);
		if (ll > best_ll) {
			best_ll = ll;
			tf.lambda = lambda;
		}
	}
	// Box-Cox's "-1, divide by lambda" is affine, so it folds into the
	// standardization; working on x^lambda keeps precision when x^lambda is tiny.
	const Eigen::VectorXd w = x.unaryExpr([&tf](double v) { return tf.power_core(v); });
	// Constancy is judged on the Box-Cox scale, where the spread is std(w) / |lambda|.
	const double unit = tf.lambda == 0.0 ? 1.0 : std::abs(tf.lambda);
	tf.mean = w.mean();
	tf.std = std::sqrt((w.array() - tf.mean).square().mean());
	tf.constant = tf.std / unit < kConstantStdThreshold;
	if (tf.constant) {
		tf.std = 1.0;
	}
	return {tf.forward(y), tf};
}

} // namespace tsfm
