#include "mixdetect/test_report.hpp"

#include <cmath>

#include <json.hpp>

namespace mixdetect {

namespace {

nlohmann::ordered_json detail_rows(const std::vector<OrderStatDetail>& rows) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        out.push_back({{"k", r.k},
                       {"order_stat", r.order_stat},
                       {"threshold", r.threshold},
                       {"exceeded", r.exceeded}});
    }
    return out;
}

}  // namespace

const char* procedure_name(Procedure p) {
    switch (p) {
        case Procedure::psi1: return "psi1";
        case Procedure::psi2: return "psi2";
        case Procedure::psi3: return "psi3";
        case Procedure::t_alpha: return "t_alpha";
    }
    return "unknown";
}

std::string report_to_json(const TestReport& report, int indent) {
    nlohmann::ordered_json doc;
    doc["procedure"] = procedure_name(report.procedure);
    doc["alpha"] = report.alpha;
    doc["reject"] = report.reject;
    if (std::isfinite(report.statistic)) {
        doc["statistic"] = report.statistic;
        doc["threshold"] = report.threshold;
    }
    if (!report.order_detail.empty()) {
        doc["order_detail"] = detail_rows(report.order_detail);
    }
    if (!report.coordinate_detail.empty()) {
        auto cols = nlohmann::ordered_json::array();
        for (const auto& c : report.coordinate_detail) {
            cols.push_back({{"column", c.column},
                            {"reject_upper", c.reject_upper},
                            {"reject_lower", c.reject_lower},
                            {"upper", detail_rows(c.upper)},
                            {"lower", detail_rows(c.lower)}});
        }
        doc["coordinate_detail"] = std::move(cols);
    }
    if (report.calibration) {
        doc["calibration"] = {{"seed", report.calibration->seed},
                              {"mc_reps", report.calibration->mc_reps},
                              {"alpha_n", report.calibration->alpha_n}};
    }
    return doc.dump(indent) + "\n";
}

}  // namespace mixdetect
