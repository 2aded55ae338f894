#pragma once

#include "tsfm/error.hpp"
#include "tsfm/seasonal.hpp"
#include "tsfm/series.hpp"
#include "tsfm/tabular.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace tsfm {

struct FeatureConfig {
	bool use_calendar = true;
	bool use_seasonal = true;
	bool use_index = true;
	int k_seasonal = 5;
};

inline constexpr int kCalendarFeatureCount = 17;

/// Parses "calendar,seasonal,index" (any subset, comma separated).
FeatureConfig parse_feature_flags(const std::string& spec, int k_seasonal = 5);

/// Total column count the configuration produces.
int feature_count(const FeatureConfig& config);

template <typename Scalar>
std::pair<Scalar, Scalar> cyclic_encode(Scalar position, Scalar period) {
	if (!(period > Scalar(0))) {
		throw Error(ErrorCode::NonPositivePeriod, "cyclic period must be positive");
	}
	const Scalar phase = Scalar(2) * std::numbers::pi_v<Scalar> * position / period;
	return {std::cos(phase), std::sin(phase)};
}

/// Calendar components in column order, with the period each is encoded over.
/// Positions are zero-based; day-of-week has Monday = 0, week-of-year is ISO.
struct CalendarComponent {
	const char* name;
	double period;
};
const std::vector<CalendarComponent>& calendar_components();

std::vector<std::string> calendar_feature_names();

/// 8 (cos, sin) pairs followed by the unnormalized year.
Eigen::Matrix<double, kCalendarFeatureCount, 1> calendar_features(Timestamp ts);

/// [start, start+1, ..., start+n-1]
Eigen::VectorXd running_index(Eigen::Index n, Eigen::Index start = 0);

/// Feature rows for the context and its future grid, columns ordered
/// [calendar..., seasonal..., index]. y_train is left empty for the caller.
TabularSplit assemble_features(const TimeSeries& context, const std::vector<Timestamp>& future_stamps,
                               const SeasonalitySet& seasonalities, const FeatureConfig& config);

} // namespace tsfm
