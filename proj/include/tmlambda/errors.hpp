#ifndef TMLAMBDA_ERRORS_HPP
#define TMLAMBDA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tmlambda {

/// Zero Zeeman splitting: the effective-field direction is undefined.
struct DegenerateFieldError : std::runtime_error {
    explicit DegenerateFieldError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Antiparallel effective fields: the branching ratio diverges.
struct AntiparallelFieldsError : std::runtime_error {
    explicit AntiparallelFieldsError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The branching ratio is monotone over the search interval.
struct NoInteriorMaximumError : std::runtime_error {
    explicit NoInteriorMaximumError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The two gamma_y extraction routes disagree beyond 3 sigma.
struct InconsistentDataError : std::runtime_error {
    explicit InconsistentDataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The probe window clips part of the hole/anti-hole family.
struct WindowTooNarrowError : std::runtime_error {
    explicit WindowTooNarrowError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tmlambda

#endif
