#pragma once

#include <stdexcept>
#include <string>

namespace mixdetect {

// Monte-Carlo resolution or bracket failure during alpha_n calibration.
class calibration_error : public std::runtime_error {
public:
    explicit calibration_error(const std::string& what) : std::runtime_error(what) {}
};

// Root-find or quadrature failed to converge; message carries diagnostics.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// First-half mean of the split sample is exactly zero, so no projection
// direction exists. Probability zero for continuous data; raised rather
// than silently picking an arbitrary axis.
class degenerate_direction_error : public std::runtime_error {
public:
    explicit degenerate_direction_error(const std::string& what) : std::runtime_error(what) {}
};

// CSV input rejected; carries a 1-based line number for the diagnostic.
class csv_parse_error : public std::runtime_error {
public:
    csv_parse_error(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace mixdetect
