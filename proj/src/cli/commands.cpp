#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "oracle_cs/cli.hpp"
#include "oracle_cs/csv.hpp"
#include "oracle_cs/errors.hpp"
#include "oracle_cs/theory.hpp"

namespace oracle_cs::cli {

namespace {

// Every flag lives on the root app so a flat key=value config file can set any
// of them; subcommands only select the action.
struct Flags {
    std::optional<Index> n, k, m;
    std::optional<std::uint64_t> trials;
    std::uint64_t seed = 1;
    std::optional<double> sigma2_phi;
    double sigma2_theta = 1.0;
    std::string out = ".";
    unsigned threads = 0;

    std::vector<double> sigma2z_grid, delta_grid, rho, delta_k;
    bool gnuplot = false;

    double tolerance = 0.03;
    double offdiag_tolerance = 0.10;
    std::uint64_t min_trials = 100;

    std::string matrix_csv;
    std::string manifest;
};

unsigned resolve_thread_flag(unsigned flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("ORACLE_CS_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return 0;  // one worker per hardware thread
}

SweepOptions sweep_options(const std::string& kind, const Flags& f) {
    SweepOptions o;
    o.kind = kind;
    o.n = f.n.value_or(512);
    o.k = f.k.value_or(16);
    o.m = f.m.value_or(128);
    o.trials = f.trials.value_or(1000);
    o.seed = f.seed;
    o.sigma2_theta = f.sigma2_theta;
    o.sigma2_phi = f.sigma2_phi.value_or(1.0 / static_cast<double>(o.m));
    o.sigma2z_grid = f.sigma2z_grid.empty() ? default_sigma2z_grid() : f.sigma2z_grid;
    o.delta_grid = f.delta_grid.empty() ? default_delta_grid() : f.delta_grid;
    o.rho = f.rho.empty() ? std::vector<double>{0.9, 0.999} : f.rho;
    o.delta_k = f.delta_k.empty() ? std::vector<double>{0.0, 0.5} : f.delta_k;
    o.gnuplot = f.gnuplot;
    // Only the grid that drives the sweep is part of the resolved config.
    if (kind != "quant") o.delta_grid.clear();
    if (kind == "quant") o.sigma2z_grid.clear();
    if (kind != "corr") o.rho.clear();
    return o;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) row.push_back(csv::parse_double(field));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument(path + ": ragged matrix rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument(path + ": empty matrix");
    Eigen::MatrixXd a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return a;
}

std::string format_support(const Support& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + "}";
}

int cmd_sweep(const std::string& kind, const Flags& f, std::ostream& out) {
    const SweepOptions o = sweep_options(kind, f);
    const SweepOutputs outputs = execute_sweep(o, f.out, resolve_thread_flag(f.threads), out);
    return outputs.csv_files.empty() ? 1 : 0;
}

int cmd_replay(const Flags& f, std::ostream& out) {
    const SweepOptions o = load_manifest(f.manifest);
    execute_sweep(o, f.out, resolve_thread_flag(f.threads), out);
    return 0;
}

int cmd_check_wishart(const Flags& f, std::ostream& out, std::ostream& err) {
    const Index m = f.m.value_or(128);
    const Index k = f.k.value_or(16);
    const double sigma2_phi = f.sigma2_phi.value_or(1.0);
    const std::uint64_t trials = f.trials.value_or(10000);
    if (m <= k + 3) {
        err << "error: the generalized inverse Wishart mean requires M > K + 3 (got M=" << m
            << ", K=" << k << ")\n";
        return 1;
    }
    const WishartCheckReport r = wishart_pinv_mean_check(
        m, k, sigma2_phi, trials, Rng(f.seed, 0), resolve_thread_flag(f.threads));

    const double rel = std::abs(r.empirical_diag_mean - r.predicted_scale) / r.predicted_scale;
    const double off_ratio = r.empirical_offdiag_max / r.empirical_diag_mean;
    std::string verdict;
    if (trials < f.min_trials)
        verdict = "INCONCLUSIVE (fewer than " + std::to_string(f.min_trials) + " trials)";
    else if (rel <= f.tolerance && off_ratio < f.offdiag_tolerance)
        verdict = "PASS";
    else
        verdict = "FAIL";

    out << "check-wishart m=" << r.m << " k=" << r.k << " sigma2_phi="
        << csv::format_double(r.sigma2_phi) << " trials=" << r.trials << " seed=" << f.seed
        << "\n";
    out << std::left;
    out << std::setw(24) << "predicted_scale" << csv::format_double(r.predicted_scale) << "\n";
    out << std::setw(24) << "empirical_diag_mean" << csv::format_double(r.empirical_diag_mean)
        << "\n";
    out << std::setw(24) << "relative_deviation" << csv::format_double(rel) << "  (tolerance "
        << csv::format_double(f.tolerance) << ")\n";
    out << std::setw(24) << "empirical_offdiag_max" << csv::format_double(r.empirical_offdiag_max)
        << "\n";
    out << std::setw(24) << "offdiag_ratio" << csv::format_double(off_ratio) << "  (tolerance "
        << csv::format_double(f.offdiag_tolerance) << ")\n";
    out << std::setw(24) << "verdict" << verdict << "\n";
    return 0;
}

int cmd_rip(const Flags& f, std::ostream& out) {
    const Index k = f.k.value_or(2);
    Eigen::MatrixXd a;
    std::string source;
    if (!f.matrix_csv.empty()) {
        a = read_matrix_csv(f.matrix_csv);
        source = f.matrix_csv;
    } else {
        const Index m = f.m.value_or(8);
        const Index n = f.n.value_or(12);
        const double s2 = f.sigma2_phi.value_or(1.0 / static_cast<double>(m));
        Rng rng(f.seed, 0);
        a.resize(m, n);
        const double sd = std::sqrt(s2);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < n; ++j) a(i, j) = sd * rng.normal();
        source = "gaussian m=" + std::to_string(m) + " n=" + std::to_string(n) +
                 " sigma2_phi=" + csv::format_double(s2) + " seed=" + std::to_string(f.seed);
    }
    const RipConstant gram = rip_constant_bruteforce(a, k, resolve_thread_flag(f.threads));
    const RipConstant sv = rip_constant_singular_values(a, k);
    const bool agree = std::abs(gram.delta - sv.delta) <= 1e-10;
    out << "matrix       " << source << " (" << a.rows() << "x" << a.cols() << ")\n";
    out << "k            " << k << "\n";
    out << "subsets      " << gram.subsets << "\n";
    out << "delta_k      " << csv::format_double(gram.delta) << "\n";
    out << "argmax       " << format_support(gram.argmax) << "\n";
    out << "cross_check  " << csv::format_double(sv.delta) << (agree ? " (agree)" : " (MISMATCH)")
        << "\n";
    return agree ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Oracle receiver simulations for compressed sensing", "oracle-cs"};
    app.fallthrough();
    app.require_subcommand(1);
    Flags f;

    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.add_option("--n", f.n, "signal length N")->check(CLI::PositiveNumber);
    app.add_option("--k", f.k, "sparsity K")->check(CLI::PositiveNumber);
    app.add_option("--m", f.m, "measurement count M")->check(CLI::PositiveNumber);
    app.add_option("--trials", f.trials, "Monte-Carlo trials (per grid point)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", f.seed, "master seed")->capture_default_str();
    app.add_option("--sigma2-phi", f.sigma2_phi, "sensing entry variance (default 1/M)")
        ->check(CLI::PositiveNumber);
    app.add_option("--sigma2-theta", f.sigma2_theta, "variance of nonzero coefficients")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", f.out, "output directory")->capture_default_str();
    app.add_option("--threads", f.threads,
                   "worker threads (0: $ORACLE_CS_THREADS, else all cores)");

    const std::string sweep_group = "Sweep";
    app.add_option("--sigma2z-grid", f.sigma2z_grid, "noise variances (white, corr)")
        ->delimiter(',')
        ->group(sweep_group);
    app.add_option("--delta-grid", f.delta_grid, "quantizer step sizes (quant)")
        ->delimiter(',')
        ->group(sweep_group);
    app.add_option("--rho", f.rho, "AR(1) correlation, repeatable (corr)")
        ->check(CLI::Range(0.0, 0.999999999999))
        ->group(sweep_group);
    app.add_option("--delta-k", f.delta_k, "RIP constant for bound columns, repeatable")
        ->check(CLI::Range(0.0, 0.999999999999))
        ->group(sweep_group);
    app.add_flag("--gnuplot", f.gnuplot, "also write a gnuplot script")->group(sweep_group);

    const std::string wishart_group = "Wishart check";
    app.add_option("--tolerance", f.tolerance, "relative tolerance on the diagonal mean")
        ->capture_default_str()
        ->group(wishart_group);
    app.add_option("--offdiag-tolerance", f.offdiag_tolerance,
                   "max |off-diagonal| as a fraction of the diagonal mean")
        ->capture_default_str()
        ->group(wishart_group);
    app.add_option("--min-trials", f.min_trials, "fewer trials give an INCONCLUSIVE verdict")
        ->capture_default_str()
        ->group(wishart_group);

    app.add_option("--matrix", f.matrix_csv, "matrix CSV for rip (default: Gaussian draw)")
        ->check(CLI::ExistingFile)
        ->group("RIP");

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep against the closed form");
    sweep->require_subcommand(1);
    auto* white = sweep->add_subcommand("white", "white Gaussian noise vs sigma2_z");
    auto* quant = sweep->add_subcommand("quant", "uniform scalar quantization vs step size");
    auto* corr = sweep->add_subcommand("corr", "AR(1) correlated noise vs sigma2_z, per rho");
    auto* wishart = app.add_subcommand("check-wishart", "pseudo-inverse Wishart mean check");
    auto* rip = app.add_subcommand("rip", "brute-force RIP constant of a small matrix");
    auto* replay = app.add_subcommand("replay", "re-run a sweep from its manifest");
    replay->add_option("manifest", f.manifest, "manifest JSON")->required()->check(
        CLI::ExistingFile);
    auto* version = app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*white) return cmd_sweep("white", f, out);
        if (*quant) return cmd_sweep("quant", f, out);
        if (*corr) return cmd_sweep("corr", f, out);
        if (*wishart) return cmd_check_wishart(f, out, err);
        if (*rip) return cmd_rip(f, out);
        if (*replay) return cmd_replay(f, out);
        if (*version) {
            out << "oracle-cs " << kVersion << "\n";
            return 0;
        }
    } catch (const CombinatorialLimitError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace oracle_cs::cli
