#pragma once

#include <stdexcept>
#include <string>

namespace cam {

// Input rejected before any computation (bad shapes, bad parameters, bad files).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Computation started but could not produce a trustworthy result
// (solver non-convergence, rank deficiency, infeasible rejection sampling).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Non-fatal diagnostics go through here so callers can capture them.
// Default sink writes "warning: ..." to stderr.
void warn(const std::string& message);
void set_warning_sink(void (*sink)(const std::string&));

} // namespace cam
