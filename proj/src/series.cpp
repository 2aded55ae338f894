#include "tsfm/series.hpp"

#include "tsfm/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace tsfm {

namespace {

using namespace std::chrono;

std::string upper(std::string_view s) {
	std::string out(s);
	std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
	return out;
}

int months_per_step(FrequencyUnit unit) {
	switch (unit) {
	case FrequencyUnit::month: return 1;
	case FrequencyUnit::quarter: return 3;
	case FrequencyUnit::year: return 12;
	default: return 0;
	}
}

seconds fixed_increment(FrequencyUnit unit) {
	switch (unit) {
	case FrequencyUnit::second: return seconds{1};
	case FrequencyUnit::minute: return minutes{1};
	case FrequencyUnit::hour: return hours{1};
	case FrequencyUnit::day: return days{1};
	case FrequencyUnit::week: return weeks{1};
	default: return seconds{0};
	}
}

int parse_int(std::string_view s, std::size_t& pos, int width) {
	if (pos + width > s.size()) {
		throw Error(ErrorCode::ParseError, "truncated timestamp '" + std::string(s) + "'");
	}
	int value = 0;
	auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + width, value);
	if (ec != std::errc{} || ptr != s.data() + pos + width) {
		throw Error(ErrorCode::ParseError, "bad digits in timestamp '" + std::string(s) + "'");
	}
	pos += width;
	return value;
}

void expect(std::string_view s, std::size_t& pos, char c) {
	if (pos >= s.size() || s[pos] != c) {
		throw Error(ErrorCode::ParseError, "malformed timestamp '" + std::string(s) + "'");
	}
	++pos;
}

} // namespace

Frequency parse_frequency(std::string_view code) {
	std::size_t i = 0;
	while (i < code.size() && std::isdigit(static_cast<unsigned char>(code[i]))) {
		++i;
	}
	int mult = 1;
	if (i > 0) {
		std::from_chars(code.data(), code.data() + i, mult);
	}
	std::string base = upper(code.substr(i));
	if (auto dash = base.find('-'); dash != std::string::npos) {
		base.resize(dash);
	}
	Frequency f;
	f.multiplier = mult;
	if (base == "S" || base == "SEC") {
		f.unit = FrequencyUnit::second;
	} else if (base == "T" || base == "MIN") {
		f.unit = FrequencyUnit::minute;
	} else if (base == "H") {
		f.unit = FrequencyUnit::hour;
	} else if (base == "D" || base == "B") {
		f.unit = FrequencyUnit::day;
	} else if (base == "W") {
		f.unit = FrequencyUnit::week;
	} else if (base == "M" || base == "MS" || base == "ME") {
		f.unit = FrequencyUnit::month;
	} else if (base == "Q" || base == "QS" || base == "QE") {
		f.unit = FrequencyUnit::quarter;
	} else if (base == "A" || base == "Y" || base == "AS" || base == "YS" || base == "YE" || base == "AE") {
		f.unit = FrequencyUnit::year;
	} else {
		throw Error(ErrorCode::UnsupportedFrequency, "unknown frequency code '" + std::string(code) + "'");
	}
	if (mult < 1) {
		throw Error(ErrorCode::UnsupportedFrequency, "frequency multiplier must be >= 1");
	}
	return f;
}

std::string frequency_code(const Frequency& freq) {
	std::string base;
	switch (freq.unit) {
	case FrequencyUnit::second: base = "S"; break;
	case FrequencyUnit::minute: base = "T"; break;
	case FrequencyUnit::hour: base = "H"; break;
	case FrequencyUnit::day: base = "D"; break;
	case FrequencyUnit::week: base = "W"; break;
	case FrequencyUnit::month: base = "M"; break;
	case FrequencyUnit::quarter: base = "Q"; break;
	case FrequencyUnit::year: base = "A"; break;
	}
	return freq.multiplier == 1 ? base : std::to_string(freq.multiplier) + base;
}

Timestamp advance(Timestamp start, const Frequency& freq, std::int64_t steps) {
	if (freq.multiplier < 1) {
		throw Error(ErrorCode::UnsupportedFrequency, "frequency multiplier must be >= 1");
	}
	const std::int64_t n = steps * freq.multiplier;
	if (int mps = months_per_step(freq.unit); mps > 0) {
		const auto day_start = floor<days>(start);
		const auto time_of_day = start - day_start;
		const year_month_day ymd{day_start};
		const auto target = year_month{ymd.year(), ymd.month()} + months{n * mps};
		const auto last = year_month_day_last{target.year(), month_day_last{target.month()}}.day();
		const auto day = std::min(ymd.day(), last);
		return sys_days{year_month_day{target.year(), target.month(), day}} + time_of_day;
	}
	return start + fixed_increment(freq.unit) * n;
}

Timestamp parse_timestamp(std::string_view text) {
	std::size_t pos = 0;
	const int y = parse_int(text, pos, 4);
	expect(text, pos, '-');
	const int mo = parse_int(text, pos, 2);
	expect(text, pos, '-');
	const int d = parse_int(text, pos, 2);
	int hh = 0, mm = 0, ss = 0;
	if (pos < text.size() && (text[pos] == 'T' || text[pos] == ' ')) {
		++pos;
		hh = parse_int(text, pos, 2);
		expect(text, pos, ':');
		mm = parse_int(text, pos, 2);
		if (pos < text.size() && text[pos] == ':') {
			++pos;
			ss = parse_int(text, pos, 2);
		}
		if (pos < text.size() && text[pos] == '.') {
			// fractional seconds are truncated
			++pos;
			while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
				++pos;
			}
		}
	}
	if (pos < text.size() && text[pos] == 'Z') {
		++pos;
	} else if (text.substr(pos) == "+00:00") {
		pos += 6;
	}
	if (pos != text.size()) {
		throw Error(ErrorCode::ParseError, "trailing characters in timestamp '" + std::string(text) + "'");
	}
	const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
	if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) {
		throw Error(ErrorCode::ParseError, "invalid calendar timestamp '" + std::string(text) + "'");
	}
	return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_timestamp(Timestamp ts) {
	const auto day_start = floor<days>(ts);
	const year_month_day ymd{day_start};
	const hh_mm_ss hms{ts - day_start};
	char buf[32];
	std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
	              static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
	              static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
	              static_cast<int>(hms.seconds().count()));
	return buf;
}

Eigen::Index TimeSeries::observed_count() const {
	return values.unaryExpr([](double v) { return is_missing(v) ? 0.0 : 1.0; }).sum();
}

TimeSeries validate_grid(const TimeSeries& series) {
	if (series.values.size() == 0) {
		throw Error(ErrorCode::EmptySeries, "series '" + series.id + "' has no values");
	}
	if (series.freq.multiplier < 1) {
		throw Error(ErrorCode::UnsupportedFrequency, "series '" + series.id + "' has multiplier < 1");
	}
	return series;
}

ContextSplit split_context_horizon(const ForecastTask& task) {
	const TimeSeries& s = validate_grid(task.series);
	if (task.horizon < 1) {
		throw Error(ErrorCode::InvalidArgument, "horizon must be >= 1");
	}
	if (task.max_context < 1) {
		throw Error(ErrorCode::InvalidArgument, "max_context must be >= 1");
	}
	const Eigen::Index len = std::min<Eigen::Index>(s.size(), task.max_context);
	const Eigen::Index offset = s.size() - len;

	ContextSplit out;
	out.context.id = s.id;
	out.context.start = s.start;
	out.context.freq = s.freq;
	out.context.first_index = s.first_index + offset;
	out.context.values = s.values.tail(len);
	if (out.context.observed_count() < 3) {
		throw Error(ErrorCode::ContextTooShort,
		            "series '" + s.id + "' has fewer than 3 observed values in its context");
	}
	out.future_timestamps.reserve(task.horizon);
	for (int h = 0; h < task.horizon; ++h) {
		out.future_timestamps.push_back(out.context.timestamp(len + h));
	}
	return out;
}

TabularSplit drop_missing_rows(const TabularSplit& split, const Eigen::VectorXd& y_raw) {
	if (y_raw.size() != split.x_train.rows()) {
		throw Error(ErrorCode::ShapeMismatch, "target length does not match training rows");
	}
	std::vector<Eigen::Index> keep;
	keep.reserve(y_raw.size());
	for (Eigen::Index i = 0; i < y_raw.size(); ++i) {
		if (!is_missing(y_raw[i])) {
			keep.push_back(i);
		}
	}
	if (keep.empty()) {
		throw Error(ErrorCode::AllMissing, "no training rows with an observed target");
	}
	const auto n = static_cast<Eigen::Index>(keep.size());
	TabularSplit out;
	out.x_train.column_names = split.x_train.column_names;
	out.x_train.values.resize(n, split.x_train.cols());
	out.y_train.resize(n);
	for (Eigen::Index r = 0; r < n; ++r) {
		out.x_train.values.row(r) = split.x_train.values.row(keep[r]);
		out.y_train[r] = y_raw[keep[r]];
	}
	out.x_test = split.x_test;
	return out;
}

} // namespace tsfm
