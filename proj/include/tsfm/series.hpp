#pragma once

#include "tsfm/tabular.hpp"

#include <Eigen/Core>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace tsfm {

using Timestamp = std::chrono::sys_seconds;

enum class FrequencyUnit { second, minute, hour, day, week, month, quarter, year };

struct Frequency {
	FrequencyUnit unit = FrequencyUnit::hour;
	int multiplier = 1;

	friend bool operator==(const Frequency&, const Frequency&) = default;
};

/// Parses pandas-style short codes: S, T/min, H, D, W, M, Q, A/Y with an optional
/// integer prefix ("15T") and ignored anchor suffixes ("W-SUN", "MS", "QE").
Frequency parse_frequency(std::string_view code);
std::string frequency_code(const Frequency& freq);

/// Start advanced by `steps` increments of `freq`. Month-based units clamp the
/// day-of-month to the target month's length (2020-01-31 + 1M = 2020-02-29).
Timestamp advance(Timestamp start, const Frequency& freq, std::int64_t steps);

Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) noexcept { return std::isnan(v); }

/// Uniform-grid univariate series. Row t sits at advance(start, freq, first_index + t);
/// first_index is nonzero only for views cut out of a longer series.
struct TimeSeries {
	std::string id;
	Timestamp start{};
	Frequency freq{};
	Eigen::VectorXd values;
	std::int64_t first_index = 0;

	Eigen::Index size() const noexcept { return values.size(); }
	Timestamp timestamp(Eigen::Index t) const { return advance(start, freq, first_index + t); }
	Eigen::Index observed_count() const;
};

struct ForecastTask {
	TimeSeries series;
	int horizon = 1;
	int max_context = 4096;
	int seasonality_m = 1;
};

struct ContextSplit {
	TimeSeries context;
	std::vector<Timestamp> future_timestamps;
};

TimeSeries validate_grid(const TimeSeries& series);

ContextSplit split_context_horizon(const ForecastTask& task);

/// Removes training rows whose raw target is missing; x_test is untouched.
TabularSplit drop_missing_rows(const TabularSplit& split, const Eigen::VectorXd& y_raw);

} // namespace tsfm
