// Scalar distribution primitives: normal pdf/sf/quantile, chi-squared
// quantile, exact binomial tails, and the chi-squared deviation thresholds.

#include "mixdetect/gaussian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mixdetect/errors.hpp"

namespace mixdetect {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
constexpr double kInvSqrt2 = 0.70710678118654752440;    // 1/sqrt(2)

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

// Upper-tail mass as a plain double; relative accuracy comes from erfc.
double sf_raw(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

// Solves sf_raw(t) = s for t >= 0, s in (0, 1/2]. Newton on the survival
// function with a bisection safeguard; the error is re-expressed relative
// to s so far-tail targets converge at full relative precision.
double upper_tail_inverse(double s) {
    if (s >= 0.5) return 0.0;
    // Abramowitz-Stegun 26.2.22 starting point (|error| < 3e-3).
    const double u = std::sqrt(-2.0 * std::log(s));
    double t = u - (2.30753 + 0.27061 * u) / (1.0 + 0.99229 * u + 0.04481 * u * u);
    double lo = 0.0, hi = 42.0;
    for (int iter = 0; iter < 80; ++iter) {
        const double err = sf_raw(t) - s;
        if (err > 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        if (std::abs(err) <= 4.0 * std::numeric_limits<double>::epsilon() * s) break;
        const double step = err / std_normal_pdf(t);
        double next = t + step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == t) break;
        t = next;
    }
    return t;
}

// Lower regularized incomplete gamma P(a, x): series for x < a + 1,
// complement of the Lentz continued fraction otherwise.
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 10000; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-17) {
                return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
            }
        }
        throw numerical_error("incomplete gamma series did not converge");
    }
    // Q(a, x) continued fraction, modified Lentz.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) {
            const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
            return 1.0 - q;
        }
    }
    throw numerical_error("incomplete gamma continued fraction did not converge");
}

double chisq_pdf(double a, double q) {
    // a = d/2; density of chi-squared at q > 0.
    return 0.5 * std::exp((a - 1.0) * std::log(0.5 * q) - 0.5 * q - std::lgamma(a));
}

double log_choose(std::int64_t n, std::int64_t j) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(j) + 1.0) -
           std::lgamma(static_cast<double>(n - j) + 1.0);
}

// Sums binomial pmf terms over j in [j_begin, j_end] (inclusive), walking
// away from j_begin which must carry the largest term of the range. All
// accumulation happens on log scale; one exp converts the result.
double binom_range_sum(std::int64_t n, double p, std::int64_t j_begin, std::int64_t j_end) {
    const double log_p = std::log(p);
    const double log_1mp = std::log1p(-p);
    const std::int64_t dir = (j_end >= j_begin) ? 1 : -1;
    const double l_max = log_choose(n, j_begin) + static_cast<double>(j_begin) * log_p +
                         static_cast<double>(n - j_begin) * log_1mp;
    double scaled_sum = 1.0;
    for (std::int64_t j = j_begin + dir; dir * (j_end - j) >= 0; j += dir) {
        const double l = log_choose(n, j) + static_cast<double>(j) * log_p +
                         static_cast<double>(n - j) * log_1mp;
        const double inc = std::exp(l - l_max);
        scaled_sum += inc;
        if (inc < scaled_sum * 1e-18) break;  // terms decrease away from j_begin
    }
    return std::exp(l_max + std::log(scaled_sum));
}

}  // namespace

TailProb TailProb::of(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("probability outside [0,1]");
    }
    return p <= 0.5 ? TailProb(p, false) : TailProb(1.0 - p, true);
}

TailProb TailProb::complement_of(double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("probability outside [0,1]");
    }
    return q <= 0.5 ? TailProb(q, true) : TailProb(1.0 - q, false);
}

double std_normal_pdf(double x) {
    require_finite(x, "x");
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

TailProb std_normal_sf(double x) {
    require_finite(x, "x");
    if (x >= 0.0) return TailProb::of(sf_raw(x));
    return TailProb::complement_of(sf_raw(-x));
}

TailProb std_normal_cdf(double x) { return std_normal_sf(-x); }

double std_normal_quantile(TailProb p) {
    const double s = p.small_side();
    if (s <= 0.0) {
        throw std::domain_error("normal quantile of 0 or 1 is infinite");
    }
    const double t = upper_tail_inverse(s);
    // Small side on the complement => p > 1/2 => quantile is the positive tail.
    return p.small_side_is_complement() ? t : -t;
}

double std_normal_quantile(double p) { return std_normal_quantile(TailProb::of(p)); }

double chisq_cdf(int d, double x) {
    if (d < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
    require_finite(x, "x");
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * d, 0.5 * x);
}

double chisq_quantile(int d, double p) {
    if (d < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("chi-squared quantile needs p in (0,1)");
    }
    const double a = 0.5 * d;
    // Wilson-Hilferty starting point.
    const double z = std_normal_quantile(p);
    const double c = 2.0 / (9.0 * d);
    double q = d * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
    if (!(q > 0.0)) q = 0.5 * std::exp((std::log(p) + std::lgamma(a) + a * M_LN2) / a);
    if (!(q > 0.0) || !std::isfinite(q)) q = static_cast<double>(d);

    double lo = 0.0;
    double hi = std::max(q * 2.0, d + 10.0 * std::sqrt(static_cast<double>(d)) + 50.0);
    while (gamma_p(a, 0.5 * hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw numerical_error("chi-squared quantile bracket blew up");
    }
    if (!(q > lo && q < hi)) q = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double err = gamma_p(a, 0.5 * q) - p;
        if (err < 0.0) {
            lo = q;
        } else {
            hi = q;
        }
        if (std::abs(err) <= 1e-14 * std::min(p, 1.0 - p) + 1e-300) break;
        const double deriv = chisq_pdf(a, q);
        double next = (deriv > 0.0) ? q - err / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == q || hi - lo <= 1e-15 * q) break;
        q = next;
    }
    return q;
}

TailProb binom_sf(std::int64_t n, double p, std::int64_t k) {
    if (n < 1) throw std::invalid_argument("binomial n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial p outside [0,1]");
    if (k < 0 || k > n + 1) {
        throw std::invalid_argument("binomial tail index k outside [0, n+1]");
    }
    if (k == 0) return TailProb::complement_of(0.0);
    if (k == n + 1) return TailProb::of(0.0);
    if (p == 0.0) return TailProb::of(0.0);
    if (p == 1.0) return TailProb::complement_of(0.0);

    // Sum whichever side excludes the mode; its boundary term is the largest.
    const std::int64_t mode = static_cast<std::int64_t>((n + 1) * p);
    if (k > mode) {
        return TailProb::of(binom_range_sum(n, p, k, n));
    }
    return TailProb::complement_of(binom_range_sum(n, p, k - 1, 0));
}

ChisqDeviationBounds chisq_bounds(int d, double lambda, double x) {
    if (d < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
    if (!(lambda >= 0.0)) throw std::invalid_argument("noncentrality must be >= 0");
    if (!(x > 0.0)) throw std::invalid_argument("deviation exponent x must be > 0");
    const double root = 2.0 * std::sqrt((d + 2.0 * lambda) * x);
    return {d + lambda + root + 2.0 * x, d + lambda - root};
}

}  // namespace mixdetect
