#pragma once

#include <cstdint>

namespace mixdetect {

// Probability with complement tracking: stores min(p, 1-p) plus the side,
// so extreme tails keep full relative precision (1 - 6e-16 is useless as a
// double, but its complement is not). Factories fold automatically.
class TailProb {
public:
    // p given directly; stored side is whichever of p, 1-p is smaller.
    static TailProb of(double p);
    // p = 1 - q with q given exactly.
    static TailProb complement_of(double q);

    // The probability, rounded to double (may round to 1 in the extreme).
    double value() const { return complemented_ ? 1.0 - small_ : small_; }
    // 1 - value, same caveat on the other side.
    double complement() const { return complemented_ ? small_ : 1.0 - small_; }

    // Exact stored side.
    double small_side() const { return small_; }
    bool small_side_is_complement() const { return complemented_; }

private:
    TailProb(double small, bool complemented) : small_(small), complemented_(complemented) {}
    double small_ = 0.0;
    bool complemented_ = false;
};

// Standard normal density.
double std_normal_pdf(double x);

// Survival function P(Z > x), full relative accuracy in the far tail.
TailProb std_normal_sf(double x);

// Distribution function P(Z <= x).
TailProb std_normal_cdf(double x);

// Inverse of the distribution function; honors the tracked side of p so
// quantile(cdf(x)) round-trips in both tails. Throws on p in {0, 1}.
double std_normal_quantile(TailProb p);
double std_normal_quantile(double p);

// (p)-quantile of the chi-squared distribution with d degrees of freedom:
// the q with P(chi2_d <= q) = p.
double chisq_quantile(int d, double p);

// Chi-squared distribution function (lower regularized incomplete gamma).
double chisq_cdf(int d, double x);

// Exact binomial survival P(Bin(n, p) >= k), log-space accumulation of the
// smaller tail. Valid for 0 <= k <= n+1.
TailProb binom_sf(std::int64_t n, double p, std::int64_t k);

// Deviation thresholds for a (non)central chi-squared variable with d degrees
// of freedom and noncentrality lambda: the upper tail above upper_dev and the
// lower tail below lower_dev each have probability at most e^{-x}.
// lambda = 0 gives the central case.
struct ChisqDeviationBounds {
    double upper_dev;
    double lower_dev;
};
ChisqDeviationBounds chisq_bounds(int d, double lambda, double x);

}  // namespace mixdetect
