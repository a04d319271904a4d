// Reproducible Monte-Carlo engine: mixture sampling, error estimation for
// each procedure, and detection-boundary sweeps.

#include "mixdetect/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mixdetect/errors.hpp"
#include "mixdetect/minimax.hpp"
#include "mixdetect/parallel.hpp"
#include "mixdetect/procedures.hpp"
#include "mixdetect/version.hpp"

namespace mixdetect {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Procedure procedure_from_name(const std::string& name) {
    if (name == "psi1") return Procedure::psi1;
    if (name == "psi2") return Procedure::psi2;
    if (name == "psi3") return Procedure::psi3;
    throw std::invalid_argument("unknown test procedure: " + name);
}

bool run_once(Procedure test, const Sample& x, double alpha, const OrderStatCalibration* calib) {
    switch (test) {
        case Procedure::psi1:
            return psi1(x, alpha).reject;
        case Procedure::psi2:
            return psi2(x, alpha, *calib).reject;
        case Procedure::psi3:
            return psi3(x, alpha, *calib).reject;
        case Procedure::t_alpha:
            break;
    }
    throw std::invalid_argument("simulation drives psi1/psi2/psi3 only");
}

// Rejection count over reps independent experiments; replicate r of grid
// point `point_tag` draws from the stream keyed by (seed, point_tag, r).
std::int64_t count_rejections(Procedure test, const MixtureParams& params, int n, double alpha,
                              const OrderStatCalibration* calib, int reps, std::uint64_t seed,
                              std::uint64_t point_tag) {
    std::vector<unsigned char> rejected(static_cast<std::size_t>(reps), 0);
    parallel_for(0, reps, [&](std::int64_t rep) {
        RngStream stream = RngStream::derive(seed, point_tag, static_cast<std::uint64_t>(rep));
        const Sample x = sample_mixture(params, n, stream);
        rejected[static_cast<std::size_t>(rep)] = run_once(test, x, alpha, calib) ? 1 : 0;
    });
    std::int64_t hits = 0;
    for (unsigned char r : rejected) hits += r;
    return hits;
}

const OrderStatCalibration* resolve_calibration(const ExperimentSpec& spec,
                                                const OrderStatCalibration* calib,
                                                OrderStatCalibration& storage) {
    if (spec.test == Procedure::psi1) return nullptr;
    if (calib != nullptr) return calib;
    if (spec.calib_ref.empty()) {
        throw calibration_error("spec needs a calibration for psi2/psi3 but none was given");
    }
    std::ifstream in(spec.calib_ref);
    if (!in) throw calibration_error("cannot open calibration file: " + spec.calib_ref);
    std::ostringstream text;
    text << in.rdbuf();
    storage = calibration_from_json(text.str());
    return &storage;
}

int calibration_reps_for_level(double level) {
    const double needed = std::ceil(200.0 / level);
    return std::max(20000, static_cast<int>(needed));
}

}  // namespace

double MixtureParams::l2_norm() const {
    double s = 0.0;
    for (double v : mu) s += v * v;
    return std::sqrt(s);
}

double MixtureParams::linf_norm() const {
    double s = 0.0;
    for (double v : mu) s = std::max(s, std::abs(v));
    return s;
}

void MixtureParams::validate() const {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("eps outside [0,1]");
    if (mu.empty()) throw std::invalid_argument("mu must be nonempty");
    for (double v : mu) {
        if (!std::isfinite(v)) throw std::invalid_argument("mu contains non-finite entries");
    }
}

bool within_l2_class(const MixtureParams& params, double big_m) {
    return params.eps > 0.0 && params.eps < 1.0 && params.l2_norm() <= big_m;
}

bool within_linf_class(const MixtureParams& params, double big_m) {
    return params.eps > 0.0 && params.eps < 1.0 && params.linf_norm() <= big_m;
}

Sample sample_mixture(const MixtureParams& params, int n, RngStream& stream) {
    params.validate();
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const int d = params.d();
    Sample x;
    x.n = n;
    x.d = d;
    x.data.resize(static_cast<std::size_t>(n) * d);
    for (int i = 0; i < n; ++i) {
        const bool contaminated = stream.next_bernoulli(params.eps);
        for (int j = 0; j < d; ++j) {
            double v = stream.next_gaussian();
            if (contaminated) v += params.mu[static_cast<std::size_t>(j)];
            x.at(i, j) = v;
        }
    }
    return x;
}

void ExperimentSpec::validate() const {
    if (n < 1 || d < 1) throw std::invalid_argument("spec needs n >= 1 and d >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha outside (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta outside (0,1)");
    if (!(big_m > 0.0)) throw std::invalid_argument("M must be positive");
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (grid.empty()) throw std::invalid_argument("grid must be nonempty");
    bool has_null_point = false;
    for (const auto& g : grid) {
        if (!(g.eps >= 0.0 && g.eps <= 1.0)) throw std::invalid_argument("grid eps outside [0,1]");
        if (static_cast<int>(g.mu.size()) != d) {
            throw std::invalid_argument("grid mu dimension does not match d");
        }
        double norm = 0.0;
        for (double v : g.mu) norm += v * v;
        if (g.eps * norm == 0.0) has_null_point = true;
    }
    if (has_null_point && alpha * reps < 100.0) {
        throw std::invalid_argument("level experiments need reps*alpha >= 100");
    }
}

ExperimentSpec spec_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("experiment spec JSON is malformed: ") + e.what());
    }
    ExperimentSpec spec;
    try {
        spec.test = procedure_from_name(doc.at("test").get<std::string>());
        spec.n = doc.at("n").get<int>();
        spec.d = doc.at("d").get<int>();
        spec.alpha = doc.at("alpha").get<double>();
        spec.beta = doc.value("beta", 0.1);
        spec.big_m = doc.value("M", 1.0);
        spec.reps = doc.at("reps").get<int>();
        spec.seed = doc.at("seed").get<std::uint64_t>();
        spec.calib_ref = doc.value("calib_ref", std::string());
        for (const auto& entry : doc.at("grid")) {
            GridPoint point;
            point.eps = entry.at("eps").get<double>();
            if (entry.contains("mu")) {
                point.mu = entry.at("mu").get<std::vector<double>>();
            } else {
                const double norm = entry.at("mu_norm").get<double>();
                const std::string direction = entry.value("direction", "diagonal");
                point.mu.assign(static_cast<std::size_t>(spec.d), 0.0);
                if (direction == "diagonal") {
                    const double coord = norm / std::sqrt(static_cast<double>(spec.d));
                    std::fill(point.mu.begin(), point.mu.end(), coord);
                } else if (direction == "e1") {
                    point.mu[0] = norm;
                } else {
                    throw std::invalid_argument("unknown grid direction: " + direction);
                }
            }
            spec.grid.push_back(std::move(point));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("experiment spec JSON is missing fields: ") +
                                    e.what());
    }
    spec.validate();
    return spec;
}

BoundaryReport estimate_errors(const ExperimentSpec& spec, const OrderStatCalibration* calib) {
    spec.validate();
    OrderStatCalibration storage;
    const OrderStatCalibration* resolved = resolve_calibration(spec, calib, storage);

    const SeparationRates theory = rates(spec.n, spec.d, spec.alpha, spec.beta, spec.big_m);
    BoundaryReport report;
    report.test = spec.test;
    report.n = spec.n;
    report.reps = spec.reps;
    report.alpha = spec.alpha;
    report.beta = spec.beta;
    report.big_m = spec.big_m;
    report.seed = spec.seed;

    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
        MixtureParams params{spec.grid[g].eps, spec.grid[g].mu};
        const std::int64_t hits = count_rejections(spec.test, params, spec.n, spec.alpha, resolved,
                                                   spec.reps, spec.seed, g);
        BoundaryRow row;
        row.n = spec.n;
        row.d = spec.d;
        row.eps = params.eps;
        row.mu_norm = (spec.test == Procedure::psi3) ? params.linf_norm() : params.l2_norm();
        row.rho = row.eps * row.mu_norm;
        row.rate = static_cast<double>(hits) / spec.reps;
        row.mc_stderr = std::sqrt(row.rate * (1.0 - row.rate) / spec.reps);
        row.rho_sharp = theory.rho_sharp;
        row.rho_star = theory.rho_star;
        row.dense_regime_ok = spec.n * params.eps >= 16.0;
        report.rows.push_back(row);
    }
    return report;
}

BoundaryReport boundary_sweep(Procedure test, int n, const std::vector<int>& d_list, double alpha,
                              double beta, double big_m, int reps, std::uint64_t seed) {
    if (d_list.empty()) throw std::invalid_argument("boundary sweep needs a nonempty d list");
    static const double kScale[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    constexpr double kSweepEps = 0.5;

    BoundaryReport report;
    report.test = test;
    report.n = n;
    report.reps = reps;
    report.alpha = alpha;
    report.beta = beta;
    report.big_m = big_m;
    report.seed = seed;

    OrderStatCalibration calib;
    if (test == Procedure::psi2) {
        const int m = n - n / 2;
        const std::uint64_t calib_seed = RngStream::derive(seed, 0xca11b).next_u64();
        calib = calibrate_alpha_n(m, alpha, calibration_reps_for_level(alpha), calib_seed);
    }

    std::uint64_t point_tag = 0;
    for (std::size_t di = 0; di < d_list.size(); ++di) {
        const int d = d_list[di];
        const SeparationRates theory = rates(n, d, alpha, beta, big_m);
        if (test == Procedure::psi3) {
            const double level = alpha / (2.0 * d);
            const std::uint64_t calib_seed =
                RngStream::derive(seed, 0xca11b, static_cast<std::uint64_t>(d)).next_u64();
            calib = calibrate_alpha_n(n, level, calibration_reps_for_level(level), calib_seed);
        }

        const double rho_unit = (test == Procedure::psi3)
                                    ? std::sqrt(std::log(static_cast<double>(d)) / n)
                                    : std::pow(static_cast<double>(d), 0.25) / std::sqrt(n);
        const double target = 1.0 - beta;
        const BoundaryRow* prev = nullptr;
        CrossingEstimate crossing;
        crossing.d = d;
        for (double c : kScale) {
            MixtureParams params;
            params.eps = kSweepEps;
            const double rho = c * rho_unit;
            const double norm = rho / kSweepEps;
            params.mu.assign(static_cast<std::size_t>(d), 0.0);
            if (test == Procedure::psi3) {
                params.mu[0] = norm;
            } else {
                const double coord = norm / std::sqrt(static_cast<double>(d));
                std::fill(params.mu.begin(), params.mu.end(), coord);
            }
            const std::int64_t hits = count_rejections(
                test, params, n, alpha, (test == Procedure::psi1) ? nullptr : &calib, reps, seed,
                point_tag++);

            BoundaryRow row;
            row.n = n;
            row.d = d;
            row.eps = kSweepEps;
            row.mu_norm = norm;
            row.rho = rho;
            row.rate = static_cast<double>(hits) / reps;
            row.mc_stderr = std::sqrt(row.rate * (1.0 - row.rate) / reps);
            row.rho_sharp = theory.rho_sharp;
            row.rho_star = theory.rho_star;
            row.dense_regime_ok = n * kSweepEps >= 16.0;
            report.rows.push_back(row);

            const BoundaryRow& cur = report.rows.back();
            if (!crossing.crossed && prev != nullptr && prev->rate < target &&
                cur.rate >= target) {
                crossing.crossed = true;
                crossing.rho_lo = prev->rho;
                crossing.rho_hi = cur.rho;
                crossing.rho_hat =
                    prev->rho + (target - prev->rate) * (cur.rho - prev->rho) /
                                    (cur.rate - prev->rate);
            }
            prev = &report.rows.back();
        }
        report.crossings.push_back(crossing);
    }
    return report;
}

std::string boundary_report_to_csv(const BoundaryReport& report) {
    std::ostringstream out;
    out << "# mixdetect boundary report\n";
    out << "# version=" << kVersion << " test=" << procedure_name(report.test) << " n=" << report.n
        << " alpha=" << g17(report.alpha) << " beta=" << g17(report.beta)
        << " M=" << g17(report.big_m) << " reps=" << report.reps << " seed=" << report.seed
        << "\n";
    for (const auto& c : report.crossings) {
        if (c.crossed) {
            out << "# crossing d=" << c.d << " rho_hat=" << g17(c.rho_hat) << " bracket=["
                << g17(c.rho_lo) << "," << g17(c.rho_hi) << "]\n";
        } else {
            out << "# crossing d=" << c.d << " not reached on the swept grid\n";
        }
    }
    if (report.test == Procedure::psi2) {
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            if (!report.rows[i].dense_regime_ok) {
                out << "# row " << i + 1 << " has n*eps < 16: outside the proven regime\n";
            }
        }
    }
    out << "n,d,eps,mu_norm,rho,rate,stderr,rho_sharp,rho_star\n";
    for (const auto& r : report.rows) {
        out << r.n << ',' << r.d << ',' << g17(r.eps) << ',' << g17(r.mu_norm) << ','
            << g17(r.rho) << ',' << g17(r.rate) << ',' << g17(r.mc_stderr) << ','
            << g17(r.rho_sharp) << ',' << g17(r.rho_star) << '\n';
    }
    return out.str();
}

}  // namespace mixdetect
