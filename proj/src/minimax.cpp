#include "mixdetect/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mixdetect/errors.hpp"

namespace mixdetect {

namespace {

void require_levels(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha outside (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta outside (0,1)");
}

void require_mixture(int n, int d, double eps, double r) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps outside [0,1]");
    if (!(r >= 0.0)) throw std::invalid_argument("r must be >= 0");
}

double checked_exp(double log_value, const char* what) {
    if (log_value > 709.0) {
        throw numerical_error(std::string(what) + " overflows double (log = " +
                              std::to_string(log_value) + ")");
    }
    return std::exp(log_value);
}

}  // namespace

SeparationRates rates(int n, int d, double alpha, double beta, double big_m) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (!(big_m > 0.0)) throw std::invalid_argument("M must be positive");
    require_levels(alpha, beta);
    if (!(alpha + beta < 1.0)) throw std::domain_error("rho_star needs alpha + beta < 1");

    SeparationRates out;
    out.n = n;
    out.d = d;
    out.alpha = alpha;
    out.beta = beta;
    out.big_m = big_m;
    out.c_of_m = 1.0 + 0.5 * big_m * big_m * std::exp(big_m * big_m);
    out.eta = 2.0 * (1.0 - alpha - beta);
    out.alpha_beta_warning = !(alpha + beta < 0.29);

    const double root_n = std::sqrt(static_cast<double>(n));
    const double d_quarter = std::pow(static_cast<double>(d), 0.25);
    out.rho_sharp = d_quarter / (2.0 * std::sqrt(out.c_of_m) * root_n);
    out.rho_star = std::sqrt(std::log1p(d * out.eta * out.eta) / (out.c_of_m * n));
    // kappa_n = sqrt(ln ln n) needs n >= 3; the radius is reported as 0 below that.
    out.rho_dagger = (n >= 3) ? d_quarter * std::sqrt(std::log(std::log(n))) / root_n : 0.0;
    return out;
}

double lr_second_moment_l2(int n, int d, double eps, double r) {
    require_mixture(n, d, eps, r);
    if (eps == 0.0 || r == 0.0) return 1.0;

    // Y = 2 Bin(d, 1/2) - d; one term per atom m, each a {1 + eps^2
    // (e^{r^2 Y / d} - 1)}^n power evaluated as exp(n log1p(.)).
    const double eps2 = eps * eps;
    const double log_half_pow_d = -d * M_LN2;
    std::vector<double> term_logs(static_cast<std::size_t>(d) + 1);
    double max_log = -HUGE_VAL;
    for (int m = 0; m <= d; ++m) {
        const double y = 2.0 * m - d;
        const double growth = std::log1p(eps2 * std::expm1(r * r * y / d));
        const double log_weight = std::lgamma(d + 1.0) - std::lgamma(m + 1.0) -
                                  std::lgamma(d - m + 1.0) + log_half_pow_d;
        const double l = log_weight + static_cast<double>(n) * growth;
        term_logs[static_cast<std::size_t>(m)] = l;
        max_log = std::max(max_log, l);
    }
    double scaled = 0.0;
    for (double l : term_logs) scaled += std::exp(l - max_log);
    return checked_exp(max_log + std::log(scaled), "likelihood-ratio second moment");
}

double lr_second_moment_linf(int n, int d, double eps, double r) {
    require_mixture(n, d, eps, r);
    if (eps == 0.0 || r == 0.0) return 1.0;
    const double log_power = n * std::log1p(eps * eps * std::expm1(r * r));
    const double lead = checked_exp(log_power - std::log(static_cast<double>(d)),
                                    "likelihood-ratio second moment");
    return lead + static_cast<double>(d - 1) / d;
}

bool indistinguishability_check(double second_moment, double alpha, double beta) {
    require_levels(alpha, beta);
    if (!(second_moment >= 1.0)) {
        throw std::domain_error("second moment below 1 signals an upstream bug");
    }
    const double eta = 2.0 * (1.0 - alpha - beta);
    return second_moment < 1.0 + eta * eta;
}

bool taylor_bound_check(double u, double big_m) {
    if (!(big_m > 0.0)) throw std::invalid_argument("M must be positive");
    if (!(std::abs(u) <= big_m)) throw std::domain_error("|u| must not exceed M");
    return std::abs(std::expm1(u) - u) <= 0.5 * std::exp(big_m) * u * u;
}

}  // namespace mixdetect
