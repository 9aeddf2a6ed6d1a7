#include "ged/common.hpp"

#include <array>
#include <cmath>

namespace ged {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kUndefinedPosterior: return "UNDEFINED_POSTERIOR";
        case ErrorCode::kUnknownAction: return "UNKNOWN_ACTION";
        case ErrorCode::kUnknownLabel: return "UNKNOWN_LABEL";
        case ErrorCode::kIncompleteAssignment: return "INCOMPLETE_ASSIGNMENT";
        case ErrorCode::kModeMismatch: return "MODE_MISMATCH";
        case ErrorCode::kTooLarge: return "TOO_LARGE";
        case ErrorCode::kNumericalBreakdown: return "NUMERICAL_BREAKDOWN";
        case ErrorCode::kParseError: return "PARSE_ERROR";
        case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    }
    return "UNKNOWN";
}

std::string format_full(double x) {
    if (x == 0.0) return "0";  // normalize -0
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) return "0";
    return std::string(buf.data(), end);
}

std::string format_sig(double x, int digits) {
    if (x == 0.0) return "0";
    std::array<char, 48> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                   std::chars_format::general, digits);
    if (ec != std::errc()) return "0";
    return std::string(buf.data(), end);
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) return false;
    return std::isfinite(out);
}

}  // namespace ged
