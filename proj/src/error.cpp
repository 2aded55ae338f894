#include "tsfm/error.hpp"

namespace tsfm {

std::string_view to_string(ErrorCode code) noexcept {
	switch (code) {
	case ErrorCode::EmptySeries: return "EmptySeries";
	case ErrorCode::UnsupportedFrequency: return "UnsupportedFrequency";
	case ErrorCode::ContextTooShort: return "ContextTooShort";
	case ErrorCode::AllMissing: return "AllMissing";
	case ErrorCode::NonPositivePeriod: return "NonPositivePeriod";
	case ErrorCode::ConfigEmpty: return "ConfigEmpty";
	case ErrorCode::TooShort: return "TooShort";
	case ErrorCode::TooFewRows: return "TooFewRows";
	case ErrorCode::BackendFailure: return "BackendFailure";
	case ErrorCode::ShapeMismatch: return "ShapeMismatch";
	case ErrorCode::MissingMedianLevel: return "MissingMedianLevel";
	case ErrorCode::HistoryTooShort: return "HistoryTooShort";
	case ErrorCode::EmptyRecordSet: return "EmptyRecordSet";
	case ErrorCode::ParseError: return "ParseError";
	case ErrorCode::GridViolation: return "GridViolation";
	case ErrorCode::IOError: return "IOError";
	case ErrorCode::InvalidArgument: return "InvalidArgument";
	}
	return "Unknown";
}

} // namespace tsfm
