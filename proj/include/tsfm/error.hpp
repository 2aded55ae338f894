#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsfm {

enum class ErrorCode {
	EmptySeries,
	UnsupportedFrequency,
	ContextTooShort,
	AllMissing,
	NonPositivePeriod,
	ConfigEmpty,
	TooShort,
	TooFewRows,
	BackendFailure,
	ShapeMismatch,
	MissingMedianLevel,
	HistoryTooShort,
	EmptyRecordSet,
	ParseError,
	GridViolation,
	IOError,
	InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
public:
	Error(ErrorCode code, const std::string& message)
		: std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

	ErrorCode code() const noexcept { return code_; }

private:
	ErrorCode code_;
};

} // namespace tsfm
