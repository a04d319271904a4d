#pragma once

namespace mixdetect {

// Closed-form lower-bound diagnostics: the constant C(M), the margin
// eta(alpha, beta), and the three theoretical radii.
struct SeparationRates {
    int n = 0;
    int d = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double big_m = 0.0;

    double c_of_m = 0.0;      // 1 + (M^2/2) e^{M^2}
    double eta = 0.0;         // 2 (1 - alpha - beta)
    double rho_sharp = 0.0;   // d^{1/4} / (2 sqrt(C(M)) sqrt(n))
    double rho_star = 0.0;    // sqrt(ln(1 + d eta^2) / (C(M) n))
    double rho_dagger = 0.0;  // d^{1/4} sqrt(ln ln n) / sqrt(n), unit constant

    // The sharp-radius theorem assumes alpha + beta < 0.29; set when violated.
    bool alpha_beta_warning = false;
    // The upper-bound constant is existence-only; rho_dagger always carries a
    // unit constant in its place.
    bool dagger_constant_is_unit = true;
};

SeparationRates rates(int n, int d, double alpha, double beta, double big_m);

// Exact E0[L^2] of the Bayesian likelihood ratio for the random-corner prior
// mu = (r/sqrt(d)) * omega, omega uniform on {-1,1}^d: the Rademacher sum
// collapses to d+1 binomial atoms, summed in log space.
double lr_second_moment_l2(int n, int d, double eps, double r);

// Same for the random-coordinate prior mu = r * e_J, J uniform on {1..d};
// closed form (1/d) {1 + eps^2 (e^{r^2} - 1)}^n + (d-1)/d.
double lr_second_moment_linf(int n, int d, double eps, double r);

// True when the second moment certifies that no level-alpha test can reach
// type-II error beta against the corresponding prior.
bool indistinguishability_check(double second_moment, double alpha, double beta);

// Elementary bound |e^u - 1 - u| <= (e^M / 2) u^2 for |u| <= M.
bool taylor_bound_check(double u, double big_m);

}  // namespace mixdetect
