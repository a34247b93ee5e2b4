#ifndef CLUSTERDYN_ERRORS_HPP
#define CLUSTERDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace clusterdyn {

// Invalid or inconsistent run configuration (CLI exit code 2).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during integration: divergence, step-size collapse (CLI exit code 3).
class numerics_error : public std::runtime_error {
public:
    explicit numerics_error(const std::string& what) : std::runtime_error(what) {}
};

// Closed-form fit failed: degenerate constants or initial data off the fitted branch.
class fit_error : public std::runtime_error {
public:
    explicit fit_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace clusterdyn

#endif
