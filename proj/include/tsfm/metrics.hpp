#pragma once

#include "tsfm/quantiles.hpp"
#include "tsfm/series.hpp"

#include <Eigen/Core>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tsfm {

/// Per-task scores for one model. rel_* are ratios to Seasonal Naive on the same task.
struct EvalRecord {
	std::string task_id;
	std::string model;
	double mase = 0.0;
	double wql = 0.0;
	double rel_mase = 1.0;
	double rel_wql = 1.0;
};

/// Seasonal period used for MASE scaling and the Seasonal Naive baseline.
/// Falls back to 1 when the history is not longer than the nominal period.
int seasonality_for(const Frequency& freq, Eigen::Index history_length);

/// Mean absolute error scaled by the in-sample lag-m absolute difference of
/// the history (missing pairs skipped). nullopt when that scale vanishes.
std::optional<double> mase(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_point,
                           const Eigen::VectorXd& history, int m);

double pinball_loss(double y, double y_hat, double q);

/// Twice the summed pinball loss over `levels`, divided by |levels| * sum|y|.
/// nullopt when every truth is zero.
std::optional<double> wql(const Eigen::VectorXd& y_true, const QuantilePrediction& pred,
                          const Eigen::VectorXd& levels = evaluation_levels());

/// Fraction in [0, 2]; terms with zero denominator contribute 0.
double smape(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

inline constexpr double kRelativeFloor = 1e-12;

double relative_score(double metric, double baseline);

/// Average ranks (1 = smallest); tied values share the mean of their positions.
std::vector<double> rank_with_ties(const std::vector<double>& values);

struct ModelSummary {
	double geo_mean_rel_mase = 1.0;
	double geo_mean_rel_wql = 1.0;
	double mean_rank_mase = 0.0;
	double mean_rank_wql = 0.0;
	std::size_t tasks = 0;
};

struct AggregateSummary {
	std::map<std::string, ModelSummary> models;
};

double geometric_mean(const std::vector<double>& values);

/// Geometric means of relative scores and mean per-task ranks, per model.
AggregateSummary aggregate(const std::vector<EvalRecord>& records);

} // namespace tsfm
