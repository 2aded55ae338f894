#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string>

namespace tsfm {

/// Per-step quantile curves: values(h, i) is the levels[i] quantile at step h.
struct QuantilePrediction {
	Eigen::VectorXd levels;
	Eigen::MatrixXd values;
	/// Rows that needed sorting to restore monotonicity (cumulative through ensembling).
	std::size_t repaired_rows = 0;

	Eigen::Index horizon() const noexcept { return values.rows(); }
};

/// {0.05, 0.10, ..., 0.95}
Eigen::VectorXd default_levels();
/// {0.1, 0.2, ..., 0.9}
Eigen::VectorXd evaluation_levels();

/// Throws InvalidArgument unless strictly increasing and inside (0, 1).
void validate_levels(const Eigen::VectorXd& levels);

/// Parses a comma separated list of levels and validates it.
Eigen::VectorXd parse_levels(const std::string& text);

std::optional<Eigen::Index> find_level(const Eigen::VectorXd& levels, double q, double tol = 1e-9);

/// Sorts any row that is not non-decreasing; returns the number of rows touched.
std::size_t repair_monotone(Eigen::MatrixXd& values);

bool is_row_monotone(const Eigen::MatrixXd& values);

QuantilePrediction constant_prediction(const Eigen::VectorXd& levels, Eigen::Index horizon, double value);

/// Level-wise average of two quantile curves (Vincentization).
QuantilePrediction ensemble_quantiles(const QuantilePrediction& a, const QuantilePrediction& b);

enum class PointMode { median, mean };

PointMode parse_point_mode(const std::string& text);

/// Median reads the 0.5 level; mean integrates the quantile function over
/// the level range with the trapezoidal rule.
Eigen::VectorXd point_forecast(const QuantilePrediction& pred, PointMode mode);

} // namespace tsfm
