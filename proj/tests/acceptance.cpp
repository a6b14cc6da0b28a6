// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracle_checks.hpp"
#include "oracle_cs/cli.hpp"
#include "oracle_cs/csv.hpp"
#include "oracle_cs/theory.hpp"

using namespace oracle_cs;
namespace fs = std::filesystem;

namespace {

constexpr Index kN = 512;
constexpr Index kK = 16;
constexpr Index kM = 128;
constexpr double kSigma2Phi = 1.0 / 128.0;
constexpr std::uint64_t kTrials = 1000;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "\n      violated: " << what;
        }
    }
};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

fs::path work_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("oracle_cs_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

cli::SweepOptions reference_setup(const std::string& kind) {
    cli::SweepOptions o;
    o.kind = kind;
    o.n = kN;
    o.k = kK;
    o.m = kM;
    o.trials = kTrials;
    o.seed = 20140101;
    o.sigma2_phi = kSigma2Phi;
    o.delta_k = {0.0, 0.5};
    return o;
}

csv::Table sweep_to_table(const cli::SweepOptions& o, const fs::path& dir, const std::string& file,
                          unsigned threads = 0) {
    std::ostringstream log;
    cli::execute_sweep(o, dir, threads, log);
    return csv::read_file(dir / file);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criteria 1 and 2 share the white-noise sweep.
csv::Table white_table;

Outcome white_noise_sweep() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    cli::SweepOptions opt = reference_setup("white");
    opt.sigma2z_grid = cli::default_sigma2z_grid();
    white_table = sweep_to_table(opt, work_dir("white"), "white.csv");
    const double elapsed = seconds_since(t0);

    const auto grid = csv::column(white_table, "sigma2_z");
    const auto emp = csv::column(white_table, "empirical_mse");
    const auto se = csv::column(white_table, "std_error");
    const auto pred = csv::column(white_table, "predicted_mse");
    o.require(grid.size() == 6, "6-point grid");
    double worst_z = 0.0, worst_rel = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double expected = closed_form_mse_white(kK, kM, kSigma2Phi, grid[p]);
        o.require(pred[p] == expected, "predicted column equals closed form at " + fmt(grid[p]));
        const double z = std::abs(emp[p] - expected) / se[p];
        const double rel = std::abs(emp[p] - expected) / expected;
        worst_z = std::max(worst_z, z);
        worst_rel = std::max(worst_rel, rel);
        o.require(z <= 3.0, "|emp - closed| <= 3 se at sigma2_z=" + fmt(grid[p]));
        o.require(rel <= 0.05, "relative deviation <= 5% at sigma2_z=" + fmt(grid[p]));
    }
    o.require(elapsed < 120.0, "runtime under 2 minutes");
    o.detail << "max |dev|/se=" << fmt(worst_z) << ", max rel dev=" << fmt(worst_rel)
             << ", runtime " << fmt(elapsed) << " s";
    return o;
}

Outcome bound_ordering() {
    Outcome o;
    const auto grid = csv::column(white_table, "sigma2_z");
    const auto pred = csv::column(white_table, "predicted_mse");
    const auto upper0 = csv::column(white_table, "rip_upper_dk0");
    o.require(!grid.empty(), "white-noise sweep available");
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double ideal_upper = static_cast<double>(kK) * grid[p];
        o.require(upper0[p] == ideal_upper, "delta_k=0 upper bound equals k sigma2_z");
        o.require(pred[p] > ideal_upper, "closed form > k sigma2_z at " + fmt(grid[p]));
    }
    if (!grid.empty())
        o.detail << "closed_form / (k sigma2_z) = " << fmt(pred[0] / (kK * grid[0]));
    return o;
}

Outcome quantization_sweep() {
    Outcome o;
    cli::SweepOptions opt = reference_setup("quant");
    opt.delta_grid = {0.002, 0.01, 0.03, 0.5, 2.0};
    const csv::Table t = sweep_to_table(opt, work_dir("quant"), "quant.csv");

    // E[y_i^2] = sigma2_phi E||x||^2 = sigma2_phi k sigma2_theta.
    const double mean_y2 = kSigma2Phi * kK * opt.sigma2_theta;
    const auto grid = csv::column(t, "delta");
    const auto emp = csv::column(t, "empirical_mse");
    const auto pred = csv::column(t, "predicted_mse");
    o.require(t.rows.size() == opt.delta_grid.size(), "one row per step size");
    o.require(t.header.size() == 4 + 2 * opt.delta_k.size(), "header width");
    int high_rate = 0;
    double worst = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        for (double v : t.rows[p]) o.require(std::isfinite(v), "finite CSV values");
        const double d = grid[p];
        o.require(pred[p] == closed_form_mse_white(kK, kM, kSigma2Phi, d * d / 12.0),
                  "prediction uses delta^2/12");
        if (d * d / 12.0 <= 1e-3 * mean_y2) {
            ++high_rate;
            const double rel = std::abs(emp[p] - pred[p]) / pred[p];
            worst = std::max(worst, rel);
            o.require(rel <= 0.10, "within 10% at delta=" + fmt(d));
        }
    }
    o.require(high_rate >= 2, "at least two high-rate points");
    o.detail << high_rate << " high-rate points, max rel dev=" << fmt(worst)
             << "; low-rate rel dev at delta=2: " << fmt(std::abs(emp.back() - pred.back()) / pred.back());
    return o;
}

Outcome correlated_sweep() {
    Outcome o;
    cli::SweepOptions opt = reference_setup("corr");
    opt.sigma2z_grid = cli::default_sigma2z_grid();
    opt.rho = {0.9, 0.999};
    const fs::path dir = work_dir("corr");
    std::ostringstream log;
    cli::execute_sweep(opt, dir, 0, log);
    const csv::Table a = csv::read_file(dir / "corr_rho0.9.csv");
    const csv::Table b = csv::read_file(dir / "corr_rho0.999.csv");

    const auto grid = csv::column(a, "sigma2_z");
    const auto ea = csv::column(a, "empirical_mse"), eb = csv::column(b, "empirical_mse");
    const auto sa = csv::column(a, "std_error"), sb = csv::column(b, "std_error");
    const auto pa = csv::column(a, "predicted_mse"), pb = csv::column(b, "predicted_mse");
    const auto corr_upper = csv::column(b, "rip_upper_dk0");
    const double lambda_max = covariance_summary(NoiseModel::ar1(kM, 1.0, 0.999)).lambda_max;
    double worst_z = 0.0, worst_pair = 0.0, min_ratio = INFINITY;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double expected = closed_form_mse(kK, kM, kSigma2Phi, kM * grid[p]);
        o.require(pa[p] == pb[p], "same closed-form curve for both rho");
        const double za = std::abs(ea[p] - pa[p]) / sa[p];
        const double zb = std::abs(eb[p] - pb[p]) / sb[p];
        const double pair = std::abs(ea[p] - eb[p]) / std::hypot(sa[p], sb[p]);
        worst_z = std::max({worst_z, za, zb});
        worst_pair = std::max(worst_pair, pair);
        o.require(std::abs(pa[p] - expected) <= 1e-12 * expected, "prediction is the trace formula");
        o.require(za <= 3.0, "rho=0.9 within 3 se at sigma2_z=" + fmt(grid[p]));
        o.require(zb <= 3.0, "rho=0.999 within 3 se at sigma2_z=" + fmt(grid[p]));
        o.require(pair <= 3.0, "series overlap within 3 combined se at sigma2_z=" + fmt(grid[p]));
        const double bound = rip_bound_correlated(kK, 0.0, lambda_max * grid[p]);
        o.require(std::abs(corr_upper[p] - bound) <= 1e-9 * bound, "CSV carries the correlated bound");
        const double ratio = bound / eb[p];
        min_ratio = std::min(min_ratio, ratio);
        o.require(ratio >= 5.0, "correlated bound >= 5x empirical at sigma2_z=" + fmt(grid[p]));
    }
    o.detail << "max |dev|/se=" << fmt(worst_z) << ", max pair dev/se=" << fmt(worst_pair)
             << ", min bound/empirical=" << fmt(min_ratio);
    return o;
}

Outcome wishart_mean() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const WishartCheckReport r = wishart_pinv_mean_check(kM, kK, 1.0, 10000, Rng(77, 0), 0);
    const double elapsed = seconds_since(t0);
    const double expected = 16.0 / (128.0 * 111.0);
    const double rel = std::abs(r.empirical_diag_mean - expected) / expected;
    const double off = r.empirical_offdiag_max / r.empirical_diag_mean;
    o.require(std::abs(r.predicted_scale - expected) <= 1e-15 * expected, "predicted scale");
    o.require(rel <= 0.03, "diagonal mean within 3%");
    o.require(off < 0.10, "off-diagonal below 10% of diagonal mean");
    o.require(elapsed < 60.0, "runtime under 1 minute");
    o.detail << "diag=" << fmt(r.empirical_diag_mean) << " (rel " << fmt(rel)
             << "), offdiag/diag=" << fmt(off) << ", runtime " << fmt(elapsed) << " s";
    return o;
}

Outcome oracle_invariants() {
    Outcome o;
    const auto rep = testing::run_oracle_invariants(100, 4242);
    o.require(rep.cases == 100, "100 cases");
    o.require(rep.noiseless_error_ratio < 1e-18, "noiseless error < 1e-18 ||x||^2");
    o.require(rep.orthogonality_ratio <= 1e-8, "residual orthogonality <= 1e-8 ||y||");
    o.require(rep.domain_mismatch <= 1e-10, "domain equivalence <= 1e-10 relative");
    o.require(rep.theta_dependence <= 1e-12, "error independent of theta <= 1e-12");
    o.detail << "noiseless=" << fmt(rep.noiseless_error_ratio)
             << ", orth=" << fmt(rep.orthogonality_ratio) << ", domain=" << fmt(rep.domain_mismatch)
             << ", theta=" << fmt(rep.theta_dependence);
    return o;
}

Outcome rip_equivalence() {
    Outcome o;
    Rng rng(8128, 0);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        Eigen::MatrixXd a(8, 12);
        for (Index i = 0; i < 8; ++i)
            for (Index j = 0; j < 12; ++j) a(i, j) = std::sqrt(1.0 / 8.0) * rng.normal();
        double previous = 0.0;
        for (Index k = 1; k <= 3; ++k) {
            const double gram = rip_constant_bruteforce(a, k).delta;
            const double sv = rip_constant_singular_values(a, k).delta;
            worst = std::max(worst, std::abs(gram - sv));
            o.require(std::abs(gram - sv) <= 1e-10, "formulations agree");
            o.require(gram >= previous, "nondecreasing in k");
            previous = gram;
        }
    }
    o.detail << "20 matrices, max disagreement " << fmt(worst);
    return o;
}

Outcome determinism() {
    Outcome o;
    std::vector<std::pair<cli::SweepOptions, std::vector<std::string>>> runs;
    {
        cli::SweepOptions w = reference_setup("white");
        w.trials = 40;
        w.sigma2z_grid = {1e-4, 1e-2};
        runs.push_back({w, {"white.csv"}});
        cli::SweepOptions q = reference_setup("quant");
        q.trials = 40;
        q.delta_grid = {0.01, 1.0};
        runs.push_back({q, {"quant.csv"}});
        cli::SweepOptions c = reference_setup("corr");
        c.trials = 40;
        c.sigma2z_grid = {1e-3};
        c.rho = {0.9, 0.999};
        runs.push_back({c, {"corr_rho0.9.csv", "corr_rho0.999.csv"}});
    }
    int compared = 0;
    for (const auto& [opt, files] : runs) {
        const fs::path one = work_dir("det1_" + opt.kind);
        const fs::path eight = work_dir("det8_" + opt.kind);
        std::ostringstream log;
        const auto first = cli::execute_sweep(opt, one, 1, log);
        // Second run is driven by the manifest the first one wrote.
        cli::execute_sweep(cli::load_manifest(first.manifest), eight, 8, log);
        for (const auto& f : files) {
            const std::string a = slurp(one / f), b = slurp(eight / f);
            o.require(!a.empty() && a == b, "byte-identical " + f);
            ++compared;
        }
    }
    o.detail << compared << " CSV pairs compared (1 vs 8 threads)";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"C1 white-noise sweep matches the closed form", white_noise_sweep},
        {"C2 closed form exceeds the ideal RIP upper bound", bound_ordering},
        {"C3 quantized measurements match at high rate", quantization_sweep},
        {"C4 correlated noise: both rho series on one curve", correlated_sweep},
        {"C5 pseudo-inverse Wishart mean is a scaled identity", wishart_mean},
        {"C6 oracle invariants on 100 random cases", oracle_invariants},
        {"C7 brute-force RIP constant cross-check", rip_equivalence},
        {"C8 sweeps are byte-identical across thread counts", determinism},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail << "exception: " << e.what();
        }
        if (!outcome.pass) ++failures;
        std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << name << "\n       "
                  << outcome.detail.str() << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
