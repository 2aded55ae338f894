#include "tsfm/quantiles.hpp"

#include "tsfm/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace tsfm {

Eigen::VectorXd default_levels() {
	Eigen::VectorXd levels(19);
	for (int i = 0; i < 19; ++i) {
		levels[i] = static_cast<double>(i + 1) / 20.0;
	}
	return levels;
}

Eigen::VectorXd evaluation_levels() {
	Eigen::VectorXd levels(9);
	for (int i = 0; i < 9; ++i) {
		levels[i] = static_cast<double>(i + 1) / 10.0;
	}
	return levels;
}

void validate_levels(const Eigen::VectorXd& levels) {
	if (levels.size() == 0) {
		throw Error(ErrorCode::InvalidArgument, "quantile level list is empty");
	}
	for (Eigen::Index i = 0; i < levels.size(); ++i) {
		if (!(levels[i] > 0.0 && levels[i] < 1.0)) {
			throw Error(ErrorCode::InvalidArgument, "quantile levels must lie in (0, 1)");
		}
		if (i > 0 && !(levels[i] > levels[i - 1])) {
			throw Error(ErrorCode::InvalidArgument, "quantile levels must be strictly increasing");
		}
	}
}

Eigen::VectorXd parse_levels(const std::string& text) {
	std::vector<double> parsed;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, ',')) {
		try {
			std::size_t used = 0;
			parsed.push_back(std::stod(item, &used));
			if (used != item.size()) {
				throw std::invalid_argument(item);
			}
		} catch (const std::exception&) {
			throw Error(ErrorCode::InvalidArgument, "bad quantile level '" + item + "'");
		}
	}
	Eigen::VectorXd levels = Eigen::Map<Eigen::VectorXd>(parsed.data(), static_cast<Eigen::Index>(parsed.size()));
	validate_levels(levels);
	return levels;
}

std::optional<Eigen::Index> find_level(const Eigen::VectorXd& levels, double q, double tol) {
	for (Eigen::Index i = 0; i < levels.size(); ++i) {
		if (std::abs(levels[i] - q) <= tol) {
			return i;
		}
	}
	return std::nullopt;
}

bool is_row_monotone(const Eigen::MatrixXd& values) {
	for (Eigen::Index r = 0; r < values.rows(); ++r) {
		for (Eigen::Index c = 1; c < values.cols(); ++c) {
			if (values(r, c) < values(r, c - 1)) {
				return false;
			}
		}
	}
	return true;
}

std::size_t repair_monotone(Eigen::MatrixXd& values) {
	std::size_t repaired = 0;
	std::vector<double> row(static_cast<std::size_t>(values.cols()));
	for (Eigen::Index r = 0; r < values.rows(); ++r) {
		for (Eigen::Index c = 0; c < values.cols(); ++c) {
			row[static_cast<std::size_t>(c)] = values(r, c);
		}
		if (std::is_sorted(row.begin(), row.end())) {
			continue;
		}
		std::sort(row.begin(), row.end());
		for (Eigen::Index c = 0; c < values.cols(); ++c) {
			values(r, c) = row[static_cast<std::size_t>(c)];
		}
		++repaired;
	}
	return repaired;
}

QuantilePrediction constant_prediction(const Eigen::VectorXd& levels, Eigen::Index horizon, double value) {
	return {levels, Eigen::MatrixXd::Constant(horizon, levels.size(), value), 0};
}

QuantilePrediction ensemble_quantiles(const QuantilePrediction& a, const QuantilePrediction& b) {
	if (a.levels.size() != b.levels.size() || a.values.rows() != b.values.rows() ||
	    a.values.cols() != b.values.cols() || !a.levels.isApprox(b.levels, 1e-12)) {
		throw Error(ErrorCode::ShapeMismatch, "ensemble members must share levels and horizon");
	}
	QuantilePrediction out;
	out.levels = a.levels;
	out.values = 0.5 * (a.values + b.values);
	out.repaired_rows = a.repaired_rows + b.repaired_rows + repair_monotone(out.values);
	return out;
}

PointMode parse_point_mode(const std::string& text) {
	if (text == "median") {
		return PointMode::median;
	}
	if (text == "mean") {
		return PointMode::mean;
	}
	throw Error(ErrorCode::InvalidArgument, "point mode must be 'median' or 'mean'");
}

Eigen::VectorXd point_forecast(const QuantilePrediction& pred, PointMode mode) {
	if (mode == PointMode::median) {
		const auto idx = find_level(pred.levels, 0.5);
		if (!idx) {
			throw Error(ErrorCode::MissingMedianLevel, "level 0.5 is not in the prediction grid");
		}
		return pred.values.col(*idx);
	}
	const Eigen::Index n = pred.levels.size();
	if (n == 1) {
		return pred.values.col(0);
	}
	Eigen::VectorXd area = Eigen::VectorXd::Zero(pred.values.rows());
	for (Eigen::Index i = 1; i < n; ++i) {
		const double width = pred.levels[i] - pred.levels[i - 1];
		area += 0.5 * width * (pred.values.col(i) + pred.values.col(i - 1));
	}
	return area / (pred.levels[n - 1] - pred.levels[0]);
}

} // namespace tsfm
