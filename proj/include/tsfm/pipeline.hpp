#pragma once

#include "tsfm/features.hpp"
#include "tsfm/quantiles.hpp"
#include "tsfm/regressors.hpp"
#include "tsfm/seasonal.hpp"
#include "tsfm/series.hpp"

#include <Eigen/Core>

namespace tsfm {

struct PipelineResult {
	QuantilePrediction prediction;
	SeasonalitySet seasonalities;
	Eigen::Index context_length = 0;
	Eigen::Index training_rows = 0;
	bool constant_target = false;
};

/// Truncate, detect seasonalities on the context, featurize, drop missing
/// targets, fit a z-normalized and a power-transformed branch, map both back
/// to the original scale and average them level-wise. The seasonal-naive
/// backend skips featurization and transforms.
PipelineResult run_pipeline(const ForecastTask& task, const FeatureConfig& config, const RegressorSpec& regressor,
                            const Eigen::VectorXd& levels = default_levels());

} // namespace tsfm
