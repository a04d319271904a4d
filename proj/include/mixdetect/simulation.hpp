#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixdetect/order_stats.hpp"
#include "mixdetect/rng.hpp"
#include "mixdetect/sample.hpp"
#include "mixdetect/test_report.hpp"

namespace mixdetect {

// One alternative: a fraction eps of observations is shifted by mu.
struct MixtureParams {
    double eps = 0.0;
    std::vector<double> mu;

    int d() const { return static_cast<int>(mu.size()); }
    double l2_norm() const;
    double linf_norm() const;
    void validate() const;
};

// Class membership flags for the bounded-mean alternative families.
bool within_l2_class(const MixtureParams& params, double big_m);
bool within_linf_class(const MixtureParams& params, double big_m);

// n iid draws: each row is mu * Bernoulli(eps) plus a standard Gaussian
// d-vector, fully determined by the stream.
Sample sample_mixture(const MixtureParams& params, int n, RngStream& stream);

struct GridPoint {
    double eps = 0.0;
    std::vector<double> mu;
};

struct ExperimentSpec {
    Procedure test = Procedure::psi1;
    int n = 0;
    int d = 0;
    double alpha = 0.05;
    double beta = 0.1;
    double big_m = 1.0;
    std::vector<GridPoint> grid;
    int reps = 0;
    std::uint64_t seed = 0;
    std::string calib_ref;  // persisted calibration path (psi2/psi3)

    void validate() const;
};

// JSON form: {test, n, d, alpha, beta, M, reps, seed, calib_ref?, grid: [...]}
// where each grid entry is {eps, mu: [...]} or {eps, mu_norm, direction}
// with direction "diagonal" (l2 norm mu_norm) or "e1" (single coordinate).
ExperimentSpec spec_from_json(const std::string& text);

struct BoundaryRow {
    int n = 0;
    int d = 0;
    double eps = 0.0;
    double mu_norm = 0.0;  // l2 norm (psi1/psi2) or sup norm (psi3)
    double rho = 0.0;      // eps * mu_norm
    double rate = 0.0;
    double mc_stderr = 0.0;
    double rho_sharp = 0.0;
    double rho_star = 0.0;
    bool dense_regime_ok = true;  // n * eps >= 16
};

// Where the estimated power first exceeds 1 - beta, linearly interpolated
// between the bracketing grid points.
struct CrossingEstimate {
    int d = 0;
    bool crossed = false;
    double rho_hat = 0.0;
    double rho_lo = 0.0;
    double rho_hi = 0.0;
};

struct BoundaryReport {
    Procedure test = Procedure::psi1;
    int n = 0;
    int reps = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double big_m = 0.0;
    std::uint64_t seed = 0;
    std::vector<BoundaryRow> rows;
    std::vector<CrossingEstimate> crossings;
};

// Runs the spec's grid; rows with eps * mu_norm = 0 estimate the type-I
// error. calib is required for psi2/psi3 and must match the spec.
BoundaryReport estimate_errors(const ExperimentSpec& spec,
                               const OrderStatCalibration* calib = nullptr);

// Sweeps rho = c * d^{1/4}/sqrt(n) (or c * sqrt(ln d / n) for psi3) over
// c in {0, 0.25, 0.5, 1, 2, 4, 8} at eps = 0.5, for each d. Calibrations
// for psi2/psi3 are built internally from seeds derived from `seed`.
BoundaryReport boundary_sweep(Procedure test, int n, const std::vector<int>& d_list,
                              double alpha, double beta, double big_m, int reps,
                              std::uint64_t seed);

// Fixed header n,d,eps,mu_norm,rho,rate,stderr,rho_sharp,rho_star with
// provenance and crossing summaries as leading comment lines.
std::string boundary_report_to_csv(const BoundaryReport& report);

}  // namespace mixdetect
