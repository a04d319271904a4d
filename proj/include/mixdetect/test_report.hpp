#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mixdetect {

enum class Procedure { psi1, psi2, psi3, t_alpha };

const char* procedure_name(Procedure p);

// One row of order-statistic detail: the observed statistic against its
// calibrated threshold for a single k of the dyadic grid.
struct OrderStatDetail {
    int k = 0;
    double order_stat = 0.0;
    double threshold = 0.0;
    bool exceeded = false;
};

// Per-coordinate detail for the coordinatewise procedure.
struct CoordinateDetail {
    int column = 0;  // 0-based coordinate index
    bool reject_upper = false;
    bool reject_lower = false;
    std::vector<OrderStatDetail> upper;
    std::vector<OrderStatDetail> lower;
};

// Provenance of the calibration a decision depended on.
struct CalibrationMeta {
    std::uint64_t seed = 0;
    int mc_reps = 0;
    double alpha_n = 0.0;
};

struct TestReport {
    Procedure procedure = Procedure::psi1;
    double alpha = 0.0;
    bool reject = false;
    // Scalar statistic/threshold (mean-norm test only).
    double statistic = std::numeric_limits<double>::quiet_NaN();
    double threshold = std::numeric_limits<double>::quiet_NaN();
    // Per-k detail (order-statistic tests), per-column detail (coordinatewise).
    std::vector<OrderStatDetail> order_detail;
    std::vector<CoordinateDetail> coordinate_detail;
    std::optional<CalibrationMeta> calibration;
};

// JSON document with full per-k / per-column detail.
std::string report_to_json(const TestReport& report, int indent = 2);

}  // namespace mixdetect
