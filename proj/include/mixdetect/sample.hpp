#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mixdetect {

// An n x d matrix of observations, one observation per row, row-major.
struct Sample {
    int n = 0;
    int d = 0;
    std::vector<double> data;

    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * d + j]; }
    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * d + j]; }
    std::span<const double> row(int i) const {
        return {data.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
    }

    // Throws std::invalid_argument unless n,d >= 1, the buffer matches, and
    // every entry is finite.
    void validate() const;
};

// CSV input: one observation per row, d comma-separated floats, '.' decimal
// separator, optional header line. Ragged or non-numeric rows raise
// csv_parse_error with a 1-based line number.
Sample parse_csv(std::istream& in);
Sample parse_csv_text(const std::string& text);
Sample load_csv(const std::string& path);

// Canonical CSV: no header, 17 significant digits per value.
std::string to_csv(const Sample& sample);

}  // namespace mixdetect
