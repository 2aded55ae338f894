#pragma once

#include "tsfm/external.hpp"
#include "tsfm/quantiles.hpp"
#include "tsfm/series.hpp"
#include "tsfm/tabular.hpp"

#include <Eigen/Core>

#include <map>
#include <memory>
#include <optional>
#include <string>

namespace tsfm {

enum class RegressorKind { seasonal_naive, knn, external };

std::string to_string(RegressorKind kind);
RegressorKind parse_regressor_kind(const std::string& text);

/// Backend selection. Recognised params: knn "neighbors" (integer, default
/// max(3, ceil(sqrt(n)))); seasonal_naive "m"; external "endpoint",
/// "timeout_ms", "max_concurrency".
struct RegressorSpec {
	RegressorKind kind = RegressorKind::knn;
	std::map<std::string, std::string> params;
	/// Shared HTTP client, created by make_regressor for the external kind.
	std::shared_ptr<const ExternalRegressor> client;
};

/// Builds a spec and, for the external kind, its client. Throws InvalidArgument
/// when an endpoint is given for a non-external kind or missing for external.
RegressorSpec make_regressor(RegressorKind kind, std::map<std::string, std::string> params = {});

/// y[T+h] = y[T+h-m], reaching back whole seasons as needed; history shorter than
/// m (or a missing lag) falls back to the last observed value. All levels coincide.
QuantilePrediction seasonal_naive_forecast(const TimeSeries& context, int horizon, int m,
                                           const Eigen::VectorXd& levels);

/// Inverse-distance-weighted empirical quantiles over the nearest training rows
/// in per-column z-scored feature space. Deterministic: ties go to the lower row.
QuantilePrediction knn_quantile_fit_predict(const TabularSplit& split, const Eigen::VectorXd& levels,
                                            std::optional<int> neighbors = std::nullopt);

/// Dispatches to the backend and guarantees row-monotone output.
QuantilePrediction fit_predict(const RegressorSpec& regressor, const TabularSplit& split,
                               const Eigen::VectorXd& levels);

} // namespace tsfm
