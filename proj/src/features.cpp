#include "tsfm/features.hpp"

#include <chrono>
#include <sstream>

namespace tsfm {

namespace {

using namespace std::chrono;

// ISO-8601 week number (1..53).
unsigned iso_week(sys_days d) {
	const weekday wd{d};
	const unsigned iso_wd = wd.iso_encoding(); // Mon=1..Sun=7
	const sys_days thursday = d + days{4 - static_cast<int>(iso_wd)};
	const year_month_day ymd{thursday};
	const sys_days jan1{ymd.year() / January / 1};
	return static_cast<unsigned>((thursday - jan1).count() / 7 + 1);
}

FeatureMatrix calendar_block(const std::vector<Timestamp>& stamps) {
	FeatureMatrix block;
	block.column_names = calendar_feature_names();
	block.values.resize(static_cast<Eigen::Index>(stamps.size()), kCalendarFeatureCount);
	for (std::size_t r = 0; r < stamps.size(); ++r) {
		block.values.row(static_cast<Eigen::Index>(r)) = calendar_features(stamps[r]).transpose();
	}
	return block;
}

void append_block(FeatureMatrix& dst, const FeatureMatrix& src) {
	const Eigen::Index old_cols = dst.values.cols();
	if (old_cols == 0) {
		dst = src;
		return;
	}
	dst.values.conservativeResize(Eigen::NoChange, old_cols + src.values.cols());
	dst.values.rightCols(src.values.cols()) = src.values;
	dst.column_names.insert(dst.column_names.end(), src.column_names.begin(), src.column_names.end());
}

} // namespace

FeatureConfig parse_feature_flags(const std::string& spec, int k_seasonal) {
	FeatureConfig cfg{false, false, false, k_seasonal};
	std::stringstream ss(spec);
	std::string item;
	while (std::getline(ss, item, ',')) {
		if (item == "calendar") {
			cfg.use_calendar = true;
		} else if (item == "seasonal") {
			cfg.use_seasonal = true;
		} else if (item == "index") {
			cfg.use_index = true;
		} else if (!item.empty()) {
			throw Error(ErrorCode::InvalidArgument, "unknown feature group '" + item + "'");
		}
	}
	if (!cfg.use_calendar && !cfg.use_seasonal && !cfg.use_index) {
		throw Error(ErrorCode::ConfigEmpty, "at least one feature group must be enabled");
	}
	return cfg;
}

int feature_count(const FeatureConfig& config) {
	return (config.use_calendar ? kCalendarFeatureCount : 0) + (config.use_seasonal ? 2 * config.k_seasonal : 0) +
	       (config.use_index ? 1 : 0);
}

const std::vector<CalendarComponent>& calendar_components() {
	static const std::vector<CalendarComponent> components = {
		{"second_of_minute", 60.0}, {"minute_of_hour", 60.0}, {"hour_of_day", 24.0},
		{"day_of_week", 7.0},       {"day_of_month", 31.0},   {"day_of_year", 366.0},
		{"week_of_year", 53.0},     {"month_of_year", 12.0},
	};
	return components;
}

std::vector<std::string> calendar_feature_names() {
	std::vector<std::string> names;
	for (const auto& c : calendar_components()) {
		names.push_back(std::string(c.name) + "_cos");
		names.push_back(std::string(c.name) + "_sin");
	}
	names.emplace_back("year");
	return names;
}

Eigen::Matrix<double, kCalendarFeatureCount, 1> calendar_features(Timestamp ts) {
	const sys_days day = floor<days>(ts);
	const year_month_day ymd{day};
	const hh_mm_ss hms{ts - day};
	const sys_days jan1{ymd.year() / January / 1};

	const double positions[8] = {
		static_cast<double>(hms.seconds().count()),
		static_cast<double>(hms.minutes().count()),
		static_cast<double>(hms.hours().count()),
		static_cast<double>(weekday{day}.iso_encoding() - 1),
		static_cast<double>(static_cast<unsigned>(ymd.day()) - 1),
		static_cast<double>((day - jan1).count()),
		static_cast<double>(iso_week(day) - 1),
		static_cast<double>(static_cast<unsigned>(ymd.month()) - 1),
	};
	const auto& comps = calendar_components();
	Eigen::Matrix<double, kCalendarFeatureCount, 1> out;
	for (int i = 0; i < 8; ++i) {
		const auto [c, s] = cyclic_encode(positions[i], comps[static_cast<std::size_t>(i)].period);
		out[2 * i] = c;
		out[2 * i + 1] = s;
	}
	out[16] = static_cast<double>(static_cast<int>(ymd.year()));
	return out;
}

Eigen::VectorXd running_index(Eigen::Index n, Eigen::Index start) {
	if (n < 1) {
		throw Error(ErrorCode::InvalidArgument, "running index length must be >= 1");
	}
	return Eigen::VectorXd::LinSpaced(n, static_cast<double>(start), static_cast<double>(start + n - 1));
}

TabularSplit assemble_features(const TimeSeries& context, const std::vector<Timestamp>& future_stamps,
                               const SeasonalitySet& seasonalities, const FeatureConfig& config) {
	if (!config.use_calendar && !config.use_seasonal && !config.use_index) {
		throw Error(ErrorCode::ConfigEmpty, "at least one feature group must be enabled");
	}
	const Eigen::Index n_train = context.size();
	const auto n_test = static_cast<Eigen::Index>(future_stamps.size());

	TabularSplit split;
	if (config.use_calendar) {
		std::vector<Timestamp> train_stamps;
		train_stamps.reserve(static_cast<std::size_t>(n_train));
		for (Eigen::Index t = 0; t < n_train; ++t) {
			train_stamps.push_back(context.timestamp(t));
		}
		append_block(split.x_train, calendar_block(train_stamps));
		append_block(split.x_test, calendar_block(future_stamps));
	}
	if (config.use_seasonal) {
		append_block(split.x_train, seasonal_features(seasonalities, running_index(n_train), config.k_seasonal));
		if (n_test > 0) {
			append_block(split.x_test,
			             seasonal_features(seasonalities, running_index(n_test, n_train), config.k_seasonal));
		}
	}
	if (config.use_index) {
		append_block(split.x_train, FeatureMatrix{{"index"}, running_index(n_train)});
		if (n_test > 0) {
			append_block(split.x_test, FeatureMatrix{{"index"}, running_index(n_test, n_train)});
		}
	}
	if (n_test == 0) {
		split.x_test.column_names = split.x_train.column_names;
		split.x_test.values.resize(0, split.x_train.cols());
	}
	return split;
}

} // namespace tsfm
