#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ged {

// Normalization tolerance for probability vectors and policy rows.
inline constexpr double kProbTol = 1e-9;
// Messages with marginal probability at or below this are unreachable.
inline constexpr double kMarginalEps = 1e-12;
// Verification / reporting tolerance (IC deficits, IR slacks, admissibility).
inline constexpr double kReportTol = 1e-6;

enum class ErrorCode {
    kUndefinedPosterior,
    kUnknownAction,
    kUnknownLabel,
    kIncompleteAssignment,
    kModeMismatch,
    kTooLarge,
    kNumericalBreakdown,
    kParseError,
    kInvalidArgument,
};

const char* to_string(ErrorCode code);

class GedError : public std::runtime_error {
public:
    GedError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// One rule violation found by a validator. Violations are data, not failures.
struct Violation {
    std::string code;     // machine-readable, e.g. PRIOR_NOT_NORMALIZED
    std::string message;  // human-readable
    int line = 0;         // source line when known (scenario files), else 0
};

// Shortest decimal string that round-trips the exact double.
std::string format_full(double x);
// Fixed number of significant digits (reports use 9).
std::string format_sig(double x, int digits);
// Strict finite-decimal parse; returns false on trailing garbage, inf, nan.
bool parse_double(std::string_view text, double& out);

}  // namespace ged
