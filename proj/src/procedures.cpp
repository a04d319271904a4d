#include "mixdetect/procedures.hpp"

#include <cmath>
#include <stdexcept>

#include "mixdetect/errors.hpp"
#include "mixdetect/gaussian.hpp"

namespace mixdetect {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha outside (0,1)");
}

std::vector<double> column(const Sample& x, int j) {
    std::vector<double> col(static_cast<std::size_t>(x.n));
    for (int i = 0; i < x.n; ++i) col[static_cast<std::size_t>(i)] = x.at(i, j);
    return col;
}

}  // namespace

TestReport psi1(const Sample& x, double alpha) {
    x.validate();
    require_alpha(alpha);
    double stat = 0.0;
    for (int j = 0; j < x.d; ++j) {
        double mean = 0.0;
        for (int i = 0; i < x.n; ++i) mean += x.at(i, j);
        mean /= x.n;
        stat += mean * mean;
    }
    stat *= x.n;  // ||sqrt(n) * mean||^2

    TestReport report;
    report.procedure = Procedure::psi1;
    report.alpha = alpha;
    report.statistic = stat;
    report.threshold = chisq_quantile(x.d, 1.0 - alpha);
    report.reject = stat > report.threshold;
    return report;
}

ProjectionSplit split_project(const Sample& x) {
    x.validate();
    if (x.n < 4) throw std::invalid_argument("split needs n >= 4 (two rows per half)");
    const int na = x.n / 2;
    const int ny = x.n - na;

    ProjectionSplit split;
    split.half_a = Sample{na, x.d, {x.data.begin(), x.data.begin() + static_cast<std::ptrdiff_t>(na) * x.d}};
    split.half_y = Sample{ny, x.d, {x.data.begin() + static_cast<std::ptrdiff_t>(na) * x.d, x.data.end()}};

    split.direction.assign(static_cast<std::size_t>(x.d), 0.0);
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < x.d; ++j) split.direction[static_cast<std::size_t>(j)] += split.half_a.at(i, j);
    }
    double norm2 = 0.0;
    for (auto& v : split.direction) {
        v /= na;
        norm2 += v * v;
    }
    if (norm2 == 0.0) {
        throw degenerate_direction_error("first-half mean is exactly zero, no projection direction");
    }
    const double inv_norm = 1.0 / std::sqrt(norm2);
    for (auto& v : split.direction) v *= inv_norm;

    split.projections.resize(static_cast<std::size_t>(ny));
    for (int i = 0; i < ny; ++i) {
        double dot = 0.0;
        for (int j = 0; j < x.d; ++j) dot += split.half_y.at(i, j) * split.direction[static_cast<std::size_t>(j)];
        split.projections[static_cast<std::size_t>(i)] = dot;
    }
    return split;
}

TestReport psi2(const Sample& x, double alpha, const OrderStatCalibration& calib) {
    require_alpha(alpha);
    if (calib.n != x.n - x.n / 2) {
        throw std::invalid_argument("calibration n does not match the projected-half size");
    }
    if (std::abs(calib.alpha - alpha) > 1e-9 * alpha) {
        throw std::invalid_argument("calibration level does not match alpha");
    }
    const ProjectionSplit split = split_project(x);
    TestReport report = t_alpha_test(split.projections, calib);
    report.procedure = Procedure::psi2;
    return report;
}

TestReport psi3(const Sample& x, double alpha, const OrderStatCalibration& calib) {
    x.validate();
    require_alpha(alpha);
    if (calib.n != x.n) {
        throw std::invalid_argument("calibration n does not match the sample size");
    }
    const double per_test = alpha / (2.0 * x.d);
    if (std::abs(calib.alpha - per_test) > 1e-9 * per_test) {
        throw std::invalid_argument("calibration level does not match alpha/(2d)");
    }

    TestReport report;
    report.procedure = Procedure::psi3;
    report.alpha = alpha;
    report.calibration = CalibrationMeta{calib.seed, calib.mc_reps, calib.alpha_n};
    for (int j = 0; j < x.d; ++j) {
        const std::vector<double> col = column(x, j);
        const TestReport upper = t_alpha_test(col, calib);
        const TestReport lower = t_alpha_test_left(col, calib);
        CoordinateDetail detail;
        detail.column = j;
        detail.reject_upper = upper.reject;
        detail.reject_lower = lower.reject;
        detail.upper = upper.order_detail;
        detail.lower = lower.order_detail;
        report.reject = report.reject || detail.reject_upper || detail.reject_lower;
        report.coordinate_detail.push_back(std::move(detail));
    }
    return report;
}

}  // namespace mixdetect
