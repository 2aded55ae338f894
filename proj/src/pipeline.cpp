#include "tsfm/pipeline.hpp"

#include "tsfm/transforms.hpp"

namespace tsfm {

namespace {

QuantilePrediction fit_branch(const RegressorSpec& regressor, TabularSplit split, const TargetTransform& tf,
                              const Eigen::VectorXd& levels) {
	split.y_train = tf.forward(split.y_train);
	QuantilePrediction pred = fit_predict(regressor, split, levels);
	pred.values = pred.values.unaryExpr([&tf](double z) { return tf.inverse(z); });
	pred.repaired_rows += repair_monotone(pred.values);
	return pred;
}

} // namespace

PipelineResult run_pipeline(const ForecastTask& task, const FeatureConfig& config, const RegressorSpec& regressor,
                            const Eigen::VectorXd& levels) {
	validate_levels(levels);
	const ContextSplit cs = split_context_horizon(task);
	PipelineResult result;
	result.context_length = cs.context.size();

	if (regressor.kind == RegressorKind::seasonal_naive) {
		result.prediction = seasonal_naive_forecast(cs.context, task.horizon, task.seasonality_m, levels);
		result.training_rows = cs.context.observed_count();
		return result;
	}

	if (config.use_seasonal) {
		result.seasonalities = detect_seasonalities(cs.context.values, config.k_seasonal);
	} else {
		result.seasonalities.k_requested = 0;
	}
	TabularSplit raw = assemble_features(cs.context, cs.future_timestamps, result.seasonalities, config);
	const TabularSplit split = drop_missing_rows(raw, cs.context.values);
	result.training_rows = split.y_train.size();

	const TargetTransform ztf = z_normalize(split.y_train).second;
	if (ztf.constant) {
		result.constant_target = true;
		result.prediction = constant_prediction(levels, task.horizon, split.y_train[0]);
		return result;
	}
	const TargetTransform ptf = power_transform(split.y_train).second;

	const QuantilePrediction a = fit_branch(regressor, split, ztf, levels);
	const QuantilePrediction b = fit_branch(regressor, split, ptf, levels);
	result.prediction = ensemble_quantiles(a, b);
	return result;
}

} // namespace tsfm
