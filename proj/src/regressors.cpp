#include "tsfm/regressors.hpp"

#include "tsfm/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

namespace tsfm {

namespace {

int int_param(const std::map<std::string, std::string>& params, const std::string& key, int fallback) {
	const auto it = params.find(key);
	if (it == params.end()) {
		return fallback;
	}
	try {
		return std::stoi(it->second);
	} catch (const std::exception&) {
		throw Error(ErrorCode::InvalidArgument, "parameter '" + key + "' must be an integer");
	}
}

// Zero-distance neighbours dominate without dividing by zero.
constexpr double kDistanceEpsilon = 1e-9;

} // namespace

std::string to_string(RegressorKind kind) {
	switch (kind) {
	case RegressorKind::seasonal_naive: return "seasonal_naive";
	case RegressorKind::knn: return "knn";
	case RegressorKind::external: return "external";
	}
	return "unknown";
}

RegressorKind parse_regressor_kind(const std::string& text) {
	if (text == "seasonal_naive" || text == "seasonal-naive") {
		return RegressorKind::seasonal_naive;
	}
	if (text == "knn") {
		return RegressorKind::knn;
	}
	if (text == "external") {
		return RegressorKind::external;
	}
	throw Error(ErrorCode::InvalidArgument, "unknown regressor '" + text + "'");
}

RegressorSpec make_regressor(RegressorKind kind, std::map<std::string, std::string> params) {
	const bool has_endpoint = params.count("endpoint") > 0 && !params.at("endpoint").empty();
	if (kind == RegressorKind::external && !has_endpoint) {
		throw Error(ErrorCode::InvalidArgument, "the external regressor requires an endpoint URL");
	}
	if (kind != RegressorKind::external && has_endpoint) {
		throw Error(ErrorCode::InvalidArgument, "an endpoint URL is only valid for the external regressor");
	}
	RegressorSpec spec;
	spec.kind = kind;
	spec.params = std::move(params);
	if (kind == RegressorKind::external) {
		const auto timeout = std::chrono::milliseconds(int_param(spec.params, "timeout_ms", 30000));
		const int concurrency = int_param(spec.params, "max_concurrency", 1);
		spec.client = std::make_shared<const ExternalRegressor>(spec.params.at("endpoint"), timeout, concurrency);
	}
	return spec;
}

QuantilePrediction seasonal_naive_forecast(const TimeSeries& context, int horizon, int m,
                                           const Eigen::VectorXd& levels) {
	if (m < 1) {
		throw Error(ErrorCode::InvalidArgument, "seasonality m must be >= 1");
	}
	const Eigen::VectorXd& y = context.values;
	const Eigen::Index n = y.size();
	Eigen::Index last_observed = -1;
	for (Eigen::Index i = n - 1; i >= 0; --i) {
		if (!is_missing(y[i])) {
			last_observed = i;
			break;
		}
	}
	if (last_observed < 0) {
		throw Error(ErrorCode::AllMissing, "seasonal naive needs at least one observed value");
	}
	QuantilePrediction pred;
	pred.levels = levels;
	pred.values.resize(horizon, levels.size());
	for (int h = 1; h <= horizon; ++h) {
		double value = y[last_observed];
		if (n >= m) {
			const Eigen::Index seasons = (h + m - 1) / m;
			for (Eigen::Index idx = n - 1 + h - seasons * m; idx >= 0; idx -= m) {
				if (!is_missing(y[idx])) {
					value = y[idx];
					break;
				}
			}
		}
		pred.values.row(h - 1).setConstant(value);
	}
	return pred;
}

QuantilePrediction knn_quantile_fit_predict(const TabularSplit& split, const Eigen::VectorXd& levels,
                                            std::optional<int> neighbors) {
	const Eigen::Index n = split.x_train.rows();
	if (n < 3) {
		throw Error(ErrorCode::TooFewRows, "knn needs at least 3 training rows");
	}
	if (split.x_train.cols() != split.x_test.cols() || split.y_train.size() != n) {
		throw Error(ErrorCode::ShapeMismatch, "training and test features disagree");
	}
	const Eigen::RowVectorXd mean = split.x_train.values.colwise().mean();
	Eigen::RowVectorXd scale =
		((split.x_train.values.rowwise() - mean).array().square().colwise().mean()).sqrt().matrix();
	for (Eigen::Index c = 0; c < scale.size(); ++c) {
		if (scale[c] < 1e-12) {
			scale[c] = 1.0;
		}
	}
	const Eigen::MatrixXd train = (split.x_train.values.rowwise() - mean).array().rowwise() / scale.array();
	const Eigen::MatrixXd test = (split.x_test.values.rowwise() - mean).array().rowwise() / scale.array();

	const int k_default = std::max(3, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
	const auto k = static_cast<Eigen::Index>(std::min<Eigen::Index>(neighbors.value_or(k_default), n));

	QuantilePrediction pred;
	pred.levels = levels;
	pred.values.resize(test.rows(), levels.size());

	std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
	std::vector<double> dist(static_cast<std::size_t>(n));
	std::vector<std::pair<double, double>> picked; // (target, weight)
	for (Eigen::Index r = 0; r < test.rows(); ++r) {
		for (Eigen::Index i = 0; i < n; ++i) {
			dist[static_cast<std::size_t>(i)] = (train.row(i) - test.row(r)).norm();
		}
		std::iota(order.begin(), order.end(), Eigen::Index{0});
		std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Eigen::Index a, Eigen::Index b) {
			const double da = dist[static_cast<std::size_t>(a)];
			const double db = dist[static_cast<std::size_t>(b)];
			return da < db || (da == db && a < b);
		});

		picked.clear();
		double total = 0.0;
		for (Eigen::Index j = 0; j < k; ++j) {
			const Eigen::Index i = order[static_cast<std::size_t>(j)];
			const double w = 1.0 / (dist[static_cast<std::size_t>(i)] + kDistanceEpsilon);
			picked.emplace_back(split.y_train[i], w);
			total += w;
		}
		std::stable_sort(picked.begin(), picked.end(),
		                 [](const auto& a, const auto& b) { return a.first < b.first; });

		// Lower weighted quantile: smallest target whose cumulative weight reaches q.
		Eigen::Index li = 0;
		double cum = 0.0;
		std::size_t pos = 0;
		while (li < levels.size()) {
			const double target = levels[li] * total;
			while (pos + 1 < picked.size() && cum + picked[pos].second < target * (1.0 - 1e-12)) {
				cum += picked[pos].second;
				++pos;
			}
			pred.values(r, li) = picked[pos].first;
			++li;
		}
	}
	return pred;
}

QuantilePrediction fit_predict(const RegressorSpec& regressor, const TabularSplit& split,
                               const Eigen::VectorXd& levels) {
	validate_levels(levels);
	QuantilePrediction pred;
	switch (regressor.kind) {
	case RegressorKind::seasonal_naive: {
		TimeSeries history;
		history.values = split.y_train;
		pred = seasonal_naive_forecast(history, static_cast<int>(split.x_test.rows()),
		                               int_param(regressor.params, "m", 1), levels);
		break;
	}
	case RegressorKind::knn: {
		std::optional<int> neighbors;
		if (regressor.params.count("neighbors") > 0) {
			neighbors = int_param(regressor.params, "neighbors", 0);
		}
		pred = knn_quantile_fit_predict(split, levels, neighbors);
		break;
	}
	case RegressorKind::external:
		if (!regressor.client) {
			throw Error(ErrorCode::BackendFailure, "external regressor has no client; build it with make_regressor");
		}
		pred = regressor.client->fit_predict(split, levels);
		break;
	}
	pred.repaired_rows += repair_monotone(pred.values);
	return pred;
}

} // namespace tsfm
