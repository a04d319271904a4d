// Order-statistic machinery: dyadic grid, explicit and exact thresholds,
// the joint-level calibration of alpha_n, and the one-sided tests built
// from them.

#include "mixdetect/order_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mixdetect/errors.hpp"
#include "mixdetect/gaussian.hpp"
#include "mixdetect/parallel.hpp"
#include "mixdetect/rng.hpp"
#include "mixdetect/version.hpp"

namespace mixdetect {

namespace {

// Derivative of s -> P(Bin(n,s) >= k): the Beta(k, n-k+1) density at s.
double binom_sf_deriv(int n, int k, double s) {
    const double log_density = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(k)) -
                               std::lgamma(n - k + 1.0) + (k - 1.0) * std::log(s) +
                               (n - k) * std::log1p(-s);
    return std::exp(log_density);
}

std::vector<double> quantile_row(int n, const std::vector<int>& ks, double u) {
    std::vector<double> q(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) q[i] = order_stat_quantile(n, ks[i], u);
    return q;
}

}  // namespace

DyadicGrid dyadic_grid(int n) {
    if (n < 2) throw std::invalid_argument("dyadic grid needs n >= 2");
    DyadicGrid grid;
    grid.n = n;
    for (std::int64_t k = 1; 2 * k <= n; k *= 2) grid.ks.push_back(static_cast<int>(k));
    return grid;
}

std::optional<double> t_threshold(double alpha, int k, int n) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha outside (0,1)");
    if (k < 1 || 2 * static_cast<std::int64_t>(k) > n) {
        throw std::invalid_argument("t threshold needs 1 <= k <= n/2");
    }
    const double two_log = 2.0 * std::log(2.0 / alpha);
    if (!(static_cast<double>(k) > two_log)) return std::nullopt;
    const double target = (static_cast<double>(k) / n) * (1.0 - std::sqrt(two_log / k));
    return std_normal_quantile(TailProb::complement_of(target));
}

double order_stat_quantile(int n, int k, double u) {
    if (n < 1 || k < 1 || k > n) throw std::invalid_argument("order statistic needs 1 <= k <= n");
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("quantile level u outside (0,1)");

    // Solve P(Bin(n,s) >= k) = u for the per-observation exceedance s, then
    // map back through the normal tail. The survival probability is strictly
    // increasing in s, so a bracketed Newton is safe.
    double lo = 0.0, hi = 1.0;
    double s = static_cast<double>(k) / (n + 1.0);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        const double err = binom_sf(n, s, k).value() - u;
        if (err < 0.0) {
            lo = s;
        } else {
            hi = s;
        }
        if (std::abs(err) <= 1e-13 * std::min(u, 1.0 - u)) {
            converged = true;
            break;
        }
        const double deriv = binom_sf_deriv(n, k, s);
        double next = (deriv > 0.0 && std::isfinite(deriv)) ? s - err / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == s || hi - lo <= std::numeric_limits<double>::epsilon() * s) {
            converged = true;
            break;
        }
        s = next;
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "order statistic quantile did not converge (n=" << n << ", k=" << k << ", u=" << u
            << ", bracket [" << lo << ", " << hi << "])";
        throw numerical_error(msg.str());
    }
    return std_normal_quantile(TailProb::complement_of(s));
}

void OrderStatCalibration::validate() const {
    const std::size_t count = grid.ks.size();
    if (n < 2 || count == 0 || quantiles.size() != count) {
        throw calibration_error("calibration table is structurally invalid");
    }
    const double bonferroni = alpha / static_cast<double>(count);
    if (!(alpha_n >= bonferroni * (1.0 - 1e-12) && alpha_n <= alpha * (1.0 + 1e-12))) {
        throw calibration_error("alpha_n outside the Bonferroni bracket [alpha/|K|, alpha]");
    }
    for (std::size_t i = 0; i + 1 < count; ++i) {
        if (!(quantiles[i] > quantiles[i + 1])) {
            throw calibration_error("quantiles must strictly decrease in k");
        }
    }
    for (std::size_t i = 0; i < count; ++i) {
        const auto t = t_threshold(alpha_n, grid.ks[i], n);
        if (t && quantiles[i] > *t + 1e-9) {
            throw calibration_error("quantile exceeds the explicit threshold t_{alpha_n,k}");
        }
    }
}

OrderStatCalibration calibrate_alpha_n(int n, double alpha, int mc_reps, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("calibration needs n >= 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha outside (0,1)");
    if (mc_reps < 10000) throw std::invalid_argument("calibration needs mc_reps >= 10^4");
    if (alpha * mc_reps < 100.0) {
        throw calibration_error("mc_reps too small to resolve alpha (need alpha*mc_reps >= 100)");
    }

    OrderStatCalibration calib;
    calib.n = n;
    calib.grid = dyadic_grid(n);
    calib.alpha = alpha;
    calib.mc_reps = mc_reps;
    calib.seed = seed;
    calib.tolerance = alpha / 1000.0;

    const auto& ks = calib.grid.ks;
    const std::size_t kc = ks.size();
    if (kc == 1) {
        // Single order statistic: the joint probability equals u, so no
        // correction is needed.
        calib.alpha_n = alpha;
        calib.quantiles = quantile_row(n, ks, alpha);
        calib.validate();
        return calib;
    }

    // Bank of H0 order statistics, one row per replicate, reused for every
    // candidate u so the estimated joint-exceedance curve is monotone.
    std::vector<double> bank(static_cast<std::size_t>(mc_reps) * kc);
    parallel_for(0, mc_reps, [&](std::int64_t rep) {
        RngStream stream = RngStream::derive(seed, static_cast<std::uint64_t>(rep));
        std::vector<double> z(static_cast<std::size_t>(n));
        for (auto& v : z) v = stream.next_gaussian();
        std::sort(z.begin(), z.end(), std::greater<double>());
        for (std::size_t i = 0; i < kc; ++i) {
            bank[static_cast<std::size_t>(rep) * kc + i] = z[static_cast<std::size_t>(ks[i] - 1)];
        }
    });

    const auto joint_rate = [&](double u) {
        const std::vector<double> q = quantile_row(n, ks, u);
        std::int64_t hits = 0;
        for (std::int64_t rep = 0; rep < mc_reps; ++rep) {
            const double* row = bank.data() + static_cast<std::size_t>(rep) * kc;
            for (std::size_t i = 0; i < kc; ++i) {
                if (row[i] > q[i]) {
                    ++hits;
                    break;
                }
            }
        }
        return static_cast<double>(hits) / static_cast<double>(mc_reps);
    };

    double lo = alpha / static_cast<double>(kc);  // feasible by the union bound
    double hi = alpha;
    if (joint_rate(hi) <= alpha) {
        calib.alpha_n = hi;
    } else {
        if (joint_rate(lo) > alpha) {
            // MC noise pushed even the Bonferroni level over; keep it, the
            // true level there is guaranteed.
            calib.alpha_n = lo;
        } else {
            for (int iter = 0; iter < 40 && hi - lo >= calib.tolerance; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (joint_rate(mid) <= alpha) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            calib.alpha_n = lo;  // largest tested u with estimated rate <= alpha
        }
    }
    calib.quantiles = quantile_row(n, ks, calib.alpha_n);
    calib.validate();
    return calib;
}

std::string calibration_to_json(const OrderStatCalibration& calib) {
    nlohmann::ordered_json doc;
    doc["n"] = calib.n;
    doc["alpha"] = calib.alpha;
    doc["alpha_n"] = calib.alpha_n;
    doc["seed"] = calib.seed;
    doc["mc_reps"] = calib.mc_reps;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < calib.grid.ks.size(); ++i) {
        rows.push_back({{"k", calib.grid.ks[i]}, {"q", calib.quantiles[i]}});
    }
    doc["quantiles"] = std::move(rows);
    doc["tool_version"] = kVersion;
    return doc.dump(2) + "\n";
}

OrderStatCalibration calibration_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw calibration_error(std::string("calibration JSON is malformed: ") + e.what());
    }
    OrderStatCalibration calib;
    try {
        calib.n = doc.at("n").get<int>();
        calib.alpha = doc.at("alpha").get<double>();
        calib.alpha_n = doc.at("alpha_n").get<double>();
        calib.seed = doc.at("seed").get<std::uint64_t>();
        calib.mc_reps = doc.at("mc_reps").get<int>();
        calib.grid = dyadic_grid(calib.n);
        calib.tolerance = calib.alpha / 1000.0;
        const auto& rows = doc.at("quantiles");
        if (rows.size() != calib.grid.ks.size()) {
            throw calibration_error("quantile table size does not match the dyadic grid");
        }
        calib.quantiles.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].at("k").get<int>() != calib.grid.ks[i]) {
                throw calibration_error("quantile table k does not match the dyadic grid");
            }
            calib.quantiles[i] = rows[i].at("q").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw calibration_error(std::string("calibration JSON is missing fields: ") + e.what());
    }
    calib.validate();
    return calib;
}

TestReport t_alpha_test(std::span<const double> z, const OrderStatCalibration& calib) {
    if (static_cast<int>(z.size()) != calib.n) {
        throw std::invalid_argument("sample length does not match calibration n");
    }
    for (double v : z) {
        if (!std::isfinite(v)) throw std::invalid_argument("sample contains non-finite values");
    }
    std::vector<double> sorted(z.begin(), z.end());
    std::stable_sort(sorted.begin(), sorted.end(), std::greater<double>());

    TestReport report;
    report.procedure = Procedure::t_alpha;
    report.alpha = calib.alpha;
    report.calibration = CalibrationMeta{calib.seed, calib.mc_reps, calib.alpha_n};
    for (std::size_t i = 0; i < calib.grid.ks.size(); ++i) {
        const int k = calib.grid.ks[i];
        OrderStatDetail row;
        row.k = k;
        row.order_stat = sorted[static_cast<std::size_t>(k - 1)];
        row.threshold = calib.quantiles[i];
        row.exceeded = row.order_stat > row.threshold;
        report.reject = report.reject || row.exceeded;
        report.order_detail.push_back(row);
    }
    return report;
}

TestReport t_alpha_test_left(std::span<const double> z, const OrderStatCalibration& calib) {
    std::vector<double> negated(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) negated[i] = -z[i];
    TestReport report = t_alpha_test(negated, calib);
    // Present the detail in the original frame: Z_(k) against -q_{alpha_n,k}.
    for (auto& row : report.order_detail) {
        row.order_stat = -row.order_stat;
        row.threshold = -row.threshold;
    }
    return report;
}

bool lemma_b1_precondition(int n, double alpha, double big_m, int d) {
    if (n < 3) throw std::invalid_argument("regime check needs n >= 3");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha outside (0,1)");
    if (!(big_m > 0.0)) throw std::invalid_argument("M must be positive");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    const double factor = (d == 1) ? 2.0 : 4.0 * d;
    const double lhs = 8.25 * std::log(factor * std::log2(n / 2.0) / alpha) / n;
    return lhs <= std_normal_sf(big_m).value();
}

}  // namespace mixdetect
