#pragma once

#include <Eigen/Core>

#include <utility>

namespace tsfm {

enum class TransformKind { znorm, power };

/// Invertible target transform. For `power`, values are shifted, Box-Cox
/// transformed with `lambda`, then z-normalized. The affine part of Box-Cox is
/// absorbed into (mean, std), which describe x^lambda (log x when lambda = 0).
struct TargetTransform {
	TransformKind kind = TransformKind::znorm;
	double mean = 0.0;
	double std = 1.0;
	double lambda = 1.0;
	double shift = 0.0;
	bool constant = false;

	Eigen::VectorXd forward(const Eigen::VectorXd& y) const;
	Eigen::VectorXd inverse(const Eigen::VectorXd& z) const;
	double inverse(double z) const;
	double power_core(double x) const;
};

inline constexpr double kConstantStdThreshold = 1e-12;

std::pair<Eigen::VectorXd, TargetTransform> z_normalize(const Eigen::VectorXd& y);

/// Box-Cox log-likelihood (up to a constant) of strictly positive x at lambda.
double box_cox_log_likelihood(const Eigen::VectorXd& x, double lambda);

double box_cox(double x, double lambda);
double inverse_box_cox(double z, double lambda);

/// Box-Cox with lambda chosen by profile likelihood over {-2.0, -1.9, ..., 2.0}, after
/// shifting so the minimum is at least 1 when any value is non-positive; output is z-normalized.
std::pair<Eigen::VectorXd, TargetTransform> power_transform(const Eigen::VectorXd& y);

} // namespace tsfm
