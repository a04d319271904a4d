#pragma once

#include <vector>

#include "mixdetect/order_stats.hpp"
#include "mixdetect/sample.hpp"
#include "mixdetect/test_report.hpp"

namespace mixdetect {

// Mean-norm test: rejects when n * ||mean||^2 exceeds the (1-alpha)
// chi-squared quantile with d degrees of freedom. Exact level alpha.
TestReport psi1(const Sample& x, double alpha);

// Deterministic first-half / second-half split with the projection of the
// second half onto the direction of the first half's mean. Conditionally on
// the direction, the projections are iid standard normal under H0.
struct ProjectionSplit {
    Sample half_a;
    Sample half_y;
    std::vector<double> direction;    // unit vector v_n
    std::vector<double> projections;  // <Y_i, v_n>
};

ProjectionSplit split_project(const Sample& x);

// Projected order-statistic test; calib must target the projected-half size
// n - floor(n/2) at the desired level.
TestReport psi2(const Sample& x, double alpha, const OrderStatCalibration& calib);

// Coordinatewise two-sided order-statistic test; calib must target the full
// sample size at the per-test level alpha/(2d). Level alpha by union bound.
TestReport psi3(const Sample& x, double alpha, const OrderStatCalibration& calib);

}  // namespace mixdetect
