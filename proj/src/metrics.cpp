#include "tsfm/metrics.hpp"

#include "tsfm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tsfm {

int seasonality_for(const Frequency& freq, Eigen::Index history_length) {
	int m = 1;
	switch (freq.unit) {
	case FrequencyUnit::second: m = 3600; break;
	case FrequencyUnit::minute: m = 60 * 24; break;
	case FrequencyUnit::hour: m = 24; break;
	case FrequencyUnit::day: m = 7; break;
	case FrequencyUnit::week: m = 1; break;
	case FrequencyUnit::month: m = 12; break;
	case FrequencyUnit::quarter: m = 4; break;
	case FrequencyUnit::year: m = 1; break;
	}
	return history_length > m ? m : 1;
}

std::optional<double> mase(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_point,
                           const Eigen::VectorXd& history, int m) {
	if (y_true.size() != y_point.size() || y_true.size() < 1) {
		throw Error(ErrorCode::ShapeMismatch, "truth and forecast must have the same non-zero length");
	}
	if (m < 1 || history.size() <= m) {
		throw Error(ErrorCode::HistoryTooShort, "history must be longer than the seasonal period");
	}
	double scale = 0.0;
	Eigen::Index pairs = 0;
	for (Eigen::Index t = m; t < history.size(); ++t) {
		if (is_missing(history[t]) || is_missing(history[t - m])) {
			continue;
		}
		scale += std::abs(history[t] - history[t - m]);
		++pairs;
	}
	if (pairs == 0) {
		return std::nullopt;
	}
	scale /= static_cast<double>(pairs);
	if (scale < 1e-12) {
		return std::nullopt;
	}
	return (y_true - y_point).cwiseAbs().mean() / scale;
}

double pinball_loss(double y, double y_hat, double q) {
	return y >= y_hat ? q * (y - y_hat) : (1.0 - q) * (y_hat - y);
}

std::optional<double> wql(const Eigen::VectorXd& y_true, const QuantilePrediction& pred,
                          const Eigen::VectorXd& levels) {
	if (pred.values.rows() != y_true.size()) {
		throw Error(ErrorCode::ShapeMismatch, "prediction horizon does not match the truth");
	}
	std::vector<Eigen::Index> cols;
	for (Eigen::Index i = 0; i < levels.size(); ++i) {
		const auto idx = find_level(pred.levels, levels[i]);
		if (!idx) {
			throw Error(ErrorCode::InvalidArgument, "evaluation level " + std::to_string(levels[i]) +
			                                            " is not in the prediction grid");
		}
		cols.push_back(*idx);
	}
	const double denom = static_cast<double>(levels.size()) * y_true.cwiseAbs().sum();
	if (denom <= 0.0) {
		return std::nullopt;
	}
	double loss = 0.0;
	for (std::size_t i = 0; i < cols.size(); ++i) {
		const double q = levels[static_cast<Eigen::Index>(i)];
		const auto pred_col = pred.values.col(cols[i]).array();
		const Eigen::ArrayXd diff = y_true.array() - pred_col;
		loss += (diff >= 0.0).select(q * diff, (q - 1.0) * diff).sum();
	}
	return 2.0 * loss / denom;
}

double smape(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
	if (y_true.size() != y_pred.size() || y_true.size() == 0) {
		throw Error(ErrorCode::ShapeMismatch, "sMAPE needs equal non-zero lengths");
	}
	double total = 0.0;
	for (Eigen::Index t = 0; t < y_true.size(); ++t) {
		const double denom = std::abs(y_true[t]) + std::abs(y_pred[t]);
		if (denom > 0.0) {
			total += 2.0 * std::abs(y_true[t] - y_pred[t]) / denom;
		}
	}
	return total / static_cast<double>(y_true.size());
}

double relative_score(double metric, double baseline) {
	return std::max(metric, kRelativeFloor) / std::max(baseline, kRelativeFloor);
}

std::vector<double> rank_with_ties(const std::vector<double>& values) {
	std::vector<std::size_t> order(values.size());
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
	std::vector<double> ranks(values.size());
	std::size_t i = 0;
	while (i < order.size()) {
		std::size_t j = i;
		while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
			++j;
		}
		const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
		for (std::size_t p = i; p <= j; ++p) {
			ranks[order[p]] = shared;
		}
		i = j + 1;
	}
	return ranks;
}

double geometric_mean(const std::vector<double>& values) {
	if (values.empty()) {
		throw Error(ErrorCode::EmptyRecordSet, "geometric mean of an empty set");
	}
	double log_sum = 0.0;
	for (double v : values) {
		log_sum += std::log(v);
	}
	return std::exp(log_sum / static_cast<double>(values.size()));
}

AggregateSummary aggregate(const std::vector<EvalRecord>& records) {
	if (records.empty()) {
		throw Error(ErrorCode::EmptyRecordSet, "no evaluation records to aggregate");
	}
	std::map<std::string, std::vector<double>> rel_mase, rel_wql;
	std::map<std::string, std::vector<const EvalRecord*>> by_task;
	std::vector<std::string> task_order;
	for (const auto& r : records) {
		if (!std::isfinite(r.rel_mase) || !std::isfinite(r.rel_wql) || r.rel_mase <= 0.0 || r.rel_wql <= 0.0) {
			throw Error(ErrorCode::InvalidArgument, "record for " + r.task_id + " has a non-positive relative score");
		}
		rel_mase[r.model].push_back(r.rel_mase);
		rel_wql[r.model].push_back(r.rel_wql);
		if (by_task.find(r.task_id) == by_task.end()) {
			task_order.push_back(r.task_id);
		}
		by_task[r.task_id].push_back(&r);
	}

	AggregateSummary out;
	std::map<std::string, double> rank_sum_mase, rank_sum_wql;
	for (const auto& task : task_order) {
		const auto& rows = by_task[task];
		std::vector<double> m, w;
		for (const auto* r : rows) {
			m.push_back(r->mase);
			w.push_back(r->wql);
		}
		const auto rm = rank_with_ties(m);
		const auto rw = rank_with_ties(w);
		for (std::size_t i = 0; i < rows.size(); ++i) {
			rank_sum_mase[rows[i]->model] += rm[i];
			rank_sum_wql[rows[i]->model] += rw[i];
		}
	}
	for (const auto& [model, values] : rel_mase) {
		ModelSummary s;
		s.tasks = values.size();
		s.geo_mean_rel_mase = geometric_mean(values);
		s.geo_mean_rel_wql = geometric_mean(rel_wql[model]);
		s.mean_rank_mase = rank_sum_mase[model] / static_cast<double>(values.size());
		s.mean_rank_wql = rank_sum_wql[model] / static_cast<double>(values.size());
		out.models[model] = s;
	}
	return out;
}

} // namespace tsfm
