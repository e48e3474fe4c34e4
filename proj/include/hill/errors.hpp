#ifndef HILL_ERRORS_HPP
#define HILL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hill {

// Machine-readable error codes; the CLI maps these to exit code 2 and a
// JSON error object on stderr.
enum class ErrorCode {
    pole_on_real_axis,
    step_size_underflow,
    zero_on_contour,
    contour_through_zero,
    count_mismatch,
    not_degenerate,
    pole_at_half_integer,
    mean_not_zero,
    collision,
    degenerate_initial_data,
    corrector_diverged,
    bad_argument,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::pole_on_real_axis:       return "PoleOnRealAxis";
        case ErrorCode::step_size_underflow:     return "StepSizeUnderflow";
        case ErrorCode::zero_on_contour:         return "ZeroOnContour";
        case ErrorCode::contour_through_zero:    return "ContourThroughZero";
        case ErrorCode::count_mismatch:          return "CountMismatch";
        case ErrorCode::not_degenerate:          return "NotDegenerate";
        case ErrorCode::pole_at_half_integer:    return "PoleAtHalfInteger";
        case ErrorCode::mean_not_zero:           return "MeanNotZero";
        case ErrorCode::collision:               return "Collision";
        case ErrorCode::degenerate_initial_data: return "DegenerateInitialData";
        case ErrorCode::corrector_diverged:      return "CorrectorDiverged";
        case ErrorCode::bad_argument:            return "BadArgument";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }
    const char* code_name() const noexcept { return error_code_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace hill

#endif
