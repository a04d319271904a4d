// Batch front-end: run a test on a CSV sample, build calibrations, compute
// theoretical rates, and drive simulation sweeps.
//
// Exit codes: 0 = accept H0, 1 = reject H0, 2 = usage/input error,
// 3 = calibration mismatch or calibration failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixdetect/errors.hpp"
#include "mixdetect/minimax.hpp"
#include "mixdetect/order_stats.hpp"
#include "mixdetect/procedures.hpp"
#include "mixdetect/sample.hpp"
#include "mixdetect/simulation.hpp"
#include "mixdetect/version.hpp"

namespace {

constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;
constexpr int kExitCalibration = 3;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

struct TestOptions {
    std::string procedure = "psi1";
    double alpha = 0.05;
    std::string calibration_path;
    bool auto_calibrate = false;
    int reps = 0;  // 0 = pick from the level
    std::uint64_t seed = 0;
    std::string input_path;
    std::string output_path;
};

int auto_reps(double level, int requested) {
    if (requested > 0) return requested;
    return std::max(20000, static_cast<int>(std::ceil(200.0 / level)));
}

int cmd_test(const TestOptions& opt) {
    const std::string csv_bytes = read_file(opt.input_path);
    const mixdetect::Sample sample = mixdetect::parse_csv_text(csv_bytes);

    mixdetect::TestReport report;
    if (opt.procedure == "psi1") {
        report = mixdetect::psi1(sample, opt.alpha);
    } else {
        const bool is_psi2 = opt.procedure == "psi2";
        const int expected_n = is_psi2 ? sample.n - sample.n / 2 : sample.n;
        const double expected_level = is_psi2 ? opt.alpha : opt.alpha / (2.0 * sample.d);
        mixdetect::OrderStatCalibration calib;
        if (!opt.calibration_path.empty()) {
            try {
                calib = mixdetect::calibration_from_json(read_file(opt.calibration_path));
            } catch (const mixdetect::calibration_error& e) {
                std::cerr << "mixdetect: " << e.what() << "\n";
                return kExitCalibration;
            }
            if (calib.n != expected_n ||
                std::abs(calib.alpha - expected_level) > 1e-9 * expected_level) {
                std::cerr << "mixdetect: calibration mismatch: need n=" << expected_n
                          << " at level " << g17(expected_level) << ", file has n=" << calib.n
                          << " at level " << g17(calib.alpha) << "\n";
                return kExitCalibration;
            }
        } else if (opt.auto_calibrate) {
            calib = mixdetect::calibrate_alpha_n(expected_n, expected_level,
                                                 auto_reps(expected_level, opt.reps), opt.seed);
        } else {
            std::cerr << "mixdetect: " << opt.procedure
                      << " needs --calibration PATH or --auto-calibrate\n";
            return kExitCalibration;
        }
        report = is_psi2 ? mixdetect::psi2(sample, opt.alpha, calib)
                         : mixdetect::psi3(sample, opt.alpha, calib);
    }

    auto doc = nlohmann::ordered_json::parse(mixdetect::report_to_json(report));
    doc["provenance"] = {{"tool_version", mixdetect::kVersion},
                         {"input", opt.input_path},
                         {"input_hash", hex64(fnv1a64(csv_bytes))},
                         {"n", sample.n},
                         {"d", sample.d}};
    write_output(opt.output_path, doc.dump(2) + "\n");
    return report.reject ? kExitReject : kExitAccept;
}

struct CalibrateOptions {
    int n = 0;
    double alpha = 0.05;
    int reps = 200000;
    std::uint64_t seed = 0;
    std::string output_path;
};

int cmd_calibrate(const CalibrateOptions& opt) {
    const auto calib = mixdetect::calibrate_alpha_n(opt.n, opt.alpha, opt.reps, opt.seed);
    write_output(opt.output_path, mixdetect::calibration_to_json(calib));
    return kExitAccept;
}

struct RatesOptions {
    int n = 0;
    int d = 0;
    double alpha = 0.05;
    double beta = 0.1;
    double big_m = 1.0;
    std::string format = "csv";
    std::string output_path;
};

int cmd_rates(const RatesOptions& opt) {
    const auto r = mixdetect::rates(opt.n, opt.d, opt.alpha, opt.beta, opt.big_m);
    if (opt.format == "json") {
        nlohmann::ordered_json doc{{"n", r.n},
                                   {"d", r.d},
                                   {"alpha", r.alpha},
                                   {"beta", r.beta},
                                   {"M", r.big_m},
                                   {"c_of_m", r.c_of_m},
                                   {"eta", r.eta},
                                   {"rho_sharp", r.rho_sharp},
                                   {"rho_star", r.rho_star},
                                   {"rho_dagger", r.rho_dagger},
                                   {"alpha_beta_warning", r.alpha_beta_warning},
                                   {"dagger_constant_is_unit", r.dagger_constant_is_unit},
                                   {"tool_version", mixdetect::kVersion}};
        write_output(opt.output_path, doc.dump(2) + "\n");
        return kExitAccept;
    }
    std::ostringstream out;
    out << "# mixdetect rates, version=" << mixdetect::kVersion << "\n";
    if (r.alpha_beta_warning) {
        out << "# warning: alpha+beta >= 0.29, outside the sharp-radius assumption\n";
    }
    out << "# rho_dagger carries a unit constant; the theory leaves C(alpha,beta,M) "
           "unspecified\n";
    out << "n,d,alpha,beta,M,c_of_m,eta,rho_sharp,rho_star,rho_dagger\n";
    out << r.n << ',' << r.d << ',' << g17(r.alpha) << ',' << g17(r.beta) << ',' << g17(r.big_m)
        << ',' << g17(r.c_of_m) << ',' << g17(r.eta) << ',' << g17(r.rho_sharp) << ','
        << g17(r.rho_star) << ',' << g17(r.rho_dagger) << '\n';
    write_output(opt.output_path, out.str());
    return kExitAccept;
}

struct SimulateOptions {
    std::string spec_path;
    std::string output_path;
};

int cmd_simulate(const SimulateOptions& opt) {
    const std::string spec_bytes = read_file(opt.spec_path);
    const auto spec = mixdetect::spec_from_json(spec_bytes);
    const auto report = mixdetect::estimate_errors(spec);
    std::string csv = "# input=" + opt.spec_path + " input_hash=" + hex64(fnv1a64(spec_bytes)) +
                      "\n" + mixdetect::boundary_report_to_csv(report);
    write_output(opt.output_path, csv);
    return kExitAccept;
}

struct BoundaryOptions {
    std::string procedure = "psi1";
    int n = 0;
    std::vector<int> d_list;
    double alpha = 0.05;
    double beta = 0.1;
    double big_m = 1.0;
    int reps = 10000;
    std::uint64_t seed = 0;
    std::string output_path;
};

int cmd_boundary(const BoundaryOptions& opt) {
    mixdetect::Procedure test;
    if (opt.procedure == "psi1") {
        test = mixdetect::Procedure::psi1;
    } else if (opt.procedure == "psi2") {
        test = mixdetect::Procedure::psi2;
    } else if (opt.procedure == "psi3") {
        test = mixdetect::Procedure::psi3;
    } else {
        throw std::invalid_argument("unknown procedure: " + opt.procedure);
    }
    const auto report = mixdetect::boundary_sweep(test, opt.n, opt.d_list, opt.alpha, opt.beta,
                                                  opt.big_m, opt.reps, opt.seed);
    std::ostringstream args;
    args << opt.procedure << ' ' << opt.n << ' ' << opt.alpha << ' ' << opt.beta << ' '
         << opt.big_m << ' ' << opt.reps << ' ' << opt.seed;
    std::string csv = "# input_hash=" + hex64(fnv1a64(args.str())) + "\n" +
                      mixdetect::boundary_report_to_csv(report);
    write_output(opt.output_path, csv);
    return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-component Gaussian mixture detection tests"};
    app.set_version_flag("--version", mixdetect::kVersion);
    app.require_subcommand(1);

    TestOptions test_opt;
    auto* test_cmd = app.add_subcommand("test", "run a detection test on a CSV sample");
    test_cmd->add_option("--procedure", test_opt.procedure, "psi1|psi2|psi3")
        ->check(CLI::IsMember({"psi1", "psi2", "psi3"}));
    test_cmd->add_option("--alpha", test_opt.alpha, "test level");
    test_cmd->add_option("--calibration", test_opt.calibration_path, "calibration JSON path");
    test_cmd->add_flag("--auto-calibrate", test_opt.auto_calibrate,
                       "calibrate on the fly (psi2/psi3)");
    test_cmd->add_option("--reps", test_opt.reps, "MC reps for --auto-calibrate");
    test_cmd->add_option("--seed", test_opt.seed, "seed for --auto-calibrate");
    test_cmd->add_option("--output", test_opt.output_path, "write the report here");
    test_cmd->add_option("input", test_opt.input_path, "CSV sample")->required();

    CalibrateOptions calib_opt;
    auto* calib_cmd = app.add_subcommand("calibrate", "build an order-statistic calibration");
    calib_cmd->add_option("--n", calib_opt.n, "sample size")->required();
    calib_cmd->add_option("--alpha", calib_opt.alpha, "joint level");
    calib_cmd->add_option("--reps", calib_opt.reps, "MC replicates");
    calib_cmd->add_option("--seed", calib_opt.seed, "RNG seed");
    calib_cmd->add_option("--output", calib_opt.output_path, "write the table here");

    RatesOptions rates_opt;
    auto* rates_cmd = app.add_subcommand("rates", "closed-form separation radii");
    rates_cmd->add_option("--n", rates_opt.n, "sample size")->required();
    rates_cmd->add_option("--d", rates_opt.d, "dimension")->required();
    rates_cmd->add_option("--alpha", rates_opt.alpha, "first-kind error");
    rates_cmd->add_option("--beta", rates_opt.beta, "second-kind error");
    rates_cmd->add_option("--big-m", rates_opt.big_m, "mean-norm bound M");
    rates_cmd->add_option("--format", rates_opt.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    rates_cmd->add_option("--output", rates_opt.output_path, "write here");

    SimulateOptions sim_opt;
    auto* sim_cmd = app.add_subcommand("simulate", "run an experiment spec");
    sim_cmd->add_option("--spec", sim_opt.spec_path, "experiment spec JSON")->required();
    sim_cmd->add_option("--output", sim_opt.output_path, "write the CSV here");

    BoundaryOptions bd_opt;
    auto* bd_cmd = app.add_subcommand("boundary", "empirical detection-boundary sweep");
    bd_cmd->add_option("--procedure", bd_opt.procedure, "psi1|psi2|psi3")
        ->check(CLI::IsMember({"psi1", "psi2", "psi3"}));
    bd_cmd->add_option("--n", bd_opt.n, "sample size")->required();
    bd_cmd->add_option("--d", bd_opt.d_list, "dimensions to sweep")->required()->delimiter(',');
    bd_cmd->add_option("--alpha", bd_opt.alpha, "test level");
    bd_cmd->add_option("--beta", bd_opt.beta, "target second-kind error");
    bd_cmd->add_option("--big-m", bd_opt.big_m, "mean-norm bound M");
    bd_cmd->add_option("--reps", bd_opt.reps, "MC replicates per grid point");
    bd_cmd->add_option("--seed", bd_opt.seed, "master seed");
    bd_cmd->add_option("--output", bd_opt.output_path, "write the CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (test_cmd->parsed()) return cmd_test(test_opt);
        if (calib_cmd->parsed()) return cmd_calibrate(calib_opt);
        if (rates_cmd->parsed()) return cmd_rates(rates_opt);
        if (sim_cmd->parsed()) return cmd_simulate(sim_opt);
        if (bd_cmd->parsed()) return cmd_boundary(bd_opt);
    } catch (const mixdetect::calibration_error& e) {
        std::cerr << "mixdetect: " << e.what() << "\n";
        return kExitCalibration;
    } catch (const std::exception& e) {
        std::cerr << "mixdetect: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
