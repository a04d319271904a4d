#include "mixdetect/sample.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "mixdetect/errors.hpp"

namespace mixdetect {

namespace {

bool parse_field(const std::string& field, double& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    // tolerate surrounding spaces
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
    if (begin == end) return false;
    const auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc() && result.ptr == end;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

}  // namespace

void Sample::validate() const {
    if (n < 1 || d < 1) throw std::invalid_argument("sample needs n >= 1 and d >= 1");
    if (data.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d)) {
        throw std::invalid_argument("sample buffer does not match n*d");
    }
    for (double v : data) {
        if (!std::isfinite(v)) throw std::invalid_argument("sample contains non-finite entries");
    }
}

Sample parse_csv(std::istream& in) {
    Sample sample;
    std::string line;
    std::size_t line_no = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) break;  // trailing newline
            throw csv_parse_error(line_no, "empty row");
        }
        const auto fields = split_fields(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (!parse_field(fields[j], row[j])) {
                numeric = false;
                if (saw_data || line_no > 1) {
                    throw csv_parse_error(line_no, "field " + std::to_string(j + 1) +
                                                       " is not a number: '" + fields[j] + "'");
                }
                break;
            }
        }
        if (!numeric) continue;  // first line was a header
        if (!saw_data) {
            sample.d = static_cast<int>(fields.size());
            saw_data = true;
        } else if (static_cast<int>(fields.size()) != sample.d) {
            throw csv_parse_error(line_no, "ragged row: expected " + std::to_string(sample.d) +
                                               " fields, found " + std::to_string(fields.size()));
        }
        for (double v : row) {
            if (!std::isfinite(v)) throw csv_parse_error(line_no, "non-finite value");
        }
        sample.data.insert(sample.data.end(), row.begin(), row.end());
        ++sample.n;
    }
    if (!saw_data) throw csv_parse_error(line_no == 0 ? 1 : line_no, "no data rows");
    sample.validate();
    return sample;
}

Sample parse_csv_text(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

Sample load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    return parse_csv(in);
}

std::string to_csv(const Sample& sample) {
    sample.validate();
    std::string out;
    char buf[40];
    for (int i = 0; i < sample.n; ++i) {
        for (int j = 0; j < sample.d; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", sample.at(i, j));
            out += buf;
            out += (j + 1 < sample.d) ? ',' : '\n';
        }
    }
    return out;
}

}  // namespace mixdetect
