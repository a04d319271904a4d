#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixdetect/test_report.hpp"

namespace mixdetect {

// The dyadic index set {2^j : 0 <= j <= floor(log2(n/2))} of order statistics
// examined by the one-sided tests.
struct DyadicGrid {
    int n = 0;
    std::vector<int> ks;
};

DyadicGrid dyadic_grid(int n);

// Explicit threshold t_{alpha,k}: the t with sf(t) = (k/n)(1 - sqrt(2 ln(2/alpha)/k))
// when k > 2 ln(2/alpha); nullopt encodes the infinite-threshold sentinel.
std::optional<double> t_threshold(double alpha, int k, int n);

// q_{u,k}: the (1-u) quantile of the k-th largest of n iid standard normals,
// i.e. the q solving P(Bin(n, sf(q)) >= k) = u.
double order_stat_quantile(int n, int k, double u);

// Calibrated thresholds for the joint order-statistic test at level alpha.
struct OrderStatCalibration {
    int n = 0;
    DyadicGrid grid;
    double alpha = 0.0;             // target joint level
    double alpha_n = 0.0;           // calibrated per-k level
    std::vector<double> quantiles;  // q_{alpha_n,k}, aligned with grid.ks
    int mc_reps = 0;                // as requested; unused when |grid| = 1
    std::uint64_t seed = 0;
    double tolerance = 0.0;         // final u-bracket width bound

    // Bonferroni bracket, strict decrease of quantiles in k, and domination
    // by the explicit thresholds. Throws calibration_error on violation.
    void validate() const;
};

// Calibrates alpha_n = sup{u : P0(exists k in grid, Z_(n-k+1) > q_{u,k}) <= alpha}
// by bisection on a Monte-Carlo estimate that reuses one fixed bank of H0
// order statistics for every candidate u (common random numbers).
OrderStatCalibration calibrate_alpha_n(int n, double alpha, int mc_reps, std::uint64_t seed);

// Persisted form: {n, alpha, alpha_n, seed, mc_reps, quantiles: [{k, q}]}.
// Loading re-validates the invariants before the table can be used.
std::string calibration_to_json(const OrderStatCalibration& calib);
OrderStatCalibration calibration_from_json(const std::string& text);

// One-sided joint test on the upper order statistics: rejects iff some
// k in the grid has Z_(n-k+1) > q_{alpha_n,k}.
TestReport t_alpha_test(std::span<const double> z, const OrderStatCalibration& calib);

// Mirror test on the lower order statistics: Z_(k) < -q_{alpha_n,k}.
TestReport t_alpha_test_left(std::span<const double> z, const OrderStatCalibration& calib);

// Regime assumption of the unidimensional power lemma: d = 1 checks
// 8.25 ln(2 log2(n/2)/alpha)/n <= sf(M); d > 1 the 4d variant.
bool lemma_b1_precondition(int n, double alpha, double big_m, int d);

}  // namespace mixdetect
