#include <chrono>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "oracle_cs/cli.hpp"
#include "oracle_cs/csv.hpp"
#include "oracle_cs/mc.hpp"

namespace oracle_cs::cli {

using nlohmann::json;

namespace {

json options_to_json(const SweepOptions& o) {
    return json{{"kind", o.kind},
                {"n", o.n},
                {"k", o.k},
                {"m", o.m},
                {"trials", o.trials},
                {"seed", o.seed},
                {"sigma2_theta", o.sigma2_theta},
                {"sigma2_phi", o.sigma2_phi},
                {"sigma2z_grid", o.sigma2z_grid},
                {"delta_grid", o.delta_grid},
                {"rho", o.rho},
                {"delta_k", o.delta_k},
                {"gnuplot", o.gnuplot}};
}

SweepOptions options_from_json(const json& j) {
    SweepOptions o;
    j.at("kind").get_to(o.kind);
    j.at("n").get_to(o.n);
    j.at("k").get_to(o.k);
    j.at("m").get_to(o.m);
    j.at("trials").get_to(o.trials);
    j.at("seed").get_to(o.seed);
    j.at("sigma2_theta").get_to(o.sigma2_theta);
    j.at("sigma2_phi").get_to(o.sigma2_phi);
    j.at("sigma2z_grid").get_to(o.sigma2z_grid);
    j.at("delta_grid").get_to(o.delta_grid);
    j.at("rho").get_to(o.rho);
    j.at("delta_k").get_to(o.delta_k);
    o.gnuplot = j.value("gnuplot", false);
    return o;
}

struct Series {
    std::string file;
    std::string title;
    ExperimentConfig config;
    SweepParameter parameter;
    std::vector<double> grid;
};

std::vector<Series> plan(const SweepOptions& o) {
    ExperimentConfig base;
    base.n = o.n;
    base.k = o.k;
    base.m = o.m;
    base.sigma2_theta = o.sigma2_theta;
    base.sigma2_phi = o.sigma2_phi;
    base.trials = o.trials;
    base.seed = o.seed;

    std::vector<Series> out;
    if (o.kind == "white") {
        if (o.sigma2z_grid.empty()) throw std::invalid_argument("sweep white: empty sigma2_z grid");
        base.noise = NoiseModel::white(o.m, o.sigma2z_grid.front());
        out.push_back({"white.csv", "white", base, SweepParameter::sigma2_z, o.sigma2z_grid});
    } else if (o.kind == "quant") {
        if (o.delta_grid.empty()) throw std::invalid_argument("sweep quant: empty delta grid");
        base.noise = NoiseModel::quantizer(o.delta_grid.front());
        out.push_back({"quant.csv", "quantized", base, SweepParameter::delta, o.delta_grid});
    } else if (o.kind == "corr") {
        if (o.sigma2z_grid.empty()) throw std::invalid_argument("sweep corr: empty sigma2_z grid");
        if (o.rho.empty()) throw std::invalid_argument("sweep corr: no --rho given");
        for (std::size_t s = 0; s < o.rho.size(); ++s) {
            ExperimentConfig c = base;
            // Independent randomness per series.
            c.seed = derive_seed(o.seed, s);
            c.noise = NoiseModel::ar1(o.m, o.sigma2z_grid.front(), o.rho[s]);
            const std::string r = csv::format_double(o.rho[s]);
            out.push_back({"corr_rho" + r + ".csv", "rho=" + r, c, SweepParameter::sigma2_z,
                           o.sigma2z_grid});
        }
    } else {
        throw std::invalid_argument("unknown sweep kind '" + o.kind + "'");
    }
    return out;
}

std::string gnuplot_script(const SweepOptions& o, const std::vector<Series>& series) {
    const std::string xlabel = o.kind == "quant" ? "step size Delta" : "noise variance sigma_z^2";
    std::string s;
    s += "# Oracle reconstruction error, generated by oracle-cs " + std::string(kVersion) + "\n";
    s += "set datafile separator ','\nset key autotitle columnhead\n";
    s += "set logscale xy\nset format y '%g'\nset format x '%g'\n";
    s += "set xlabel '" + xlabel + "'\nset ylabel 'E||x_hat - x||^2'\n";
    s += "plot \\\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& f = series[i].file;
        const auto& t = series[i].title;
        s += "  '" + f + "' using 1:2:3 with yerrorbars title 'simulated " + t + "', \\\n";
        s += "  '" + f + "' using 1:4 with lines title 'closed form " + t + "'";
        for (std::size_t d = 0; d < o.delta_k.size(); ++d) {
            const auto col = std::to_string(5 + 2 * d);
            const auto dk = csv::format_double(o.delta_k[d]);
            s += ", \\\n  '" + f + "' using 1:" + col + " with lines dt 2 title 'lower dk=" + dk +
                 " " + t + "'";
            s += ", \\\n  '" + f + "' using 1:" + std::to_string(6 + 2 * d) +
                 " with lines dt 3 title 'upper dk=" + dk + " " + t + "'";
        }
        s += i + 1 < series.size() ? ", \\\n" : "\n";
    }
    return s;
}

}  // namespace

std::vector<double> default_sigma2z_grid() { return {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1}; }

std::vector<double> default_delta_grid() {
    return {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
}

SweepOutputs execute_sweep(const SweepOptions& options, const std::filesystem::path& out_dir,
                           unsigned threads, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Series> series = plan(options);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

    SweepOutputs outputs;
    for (const Series& s : series) {
        log << "sweep " << options.kind << " [" << s.title << "]: " << s.grid.size()
            << " points x " << s.config.trials << " trials\n";
        const SweepResult r = run_sweep(s.config, s.parameter, s.grid, options.delta_k, threads);
        const auto path = out_dir / s.file;
        csv::write_file(path, csv::sweep_table(r, options.kind == "corr"));
        outputs.csv_files.push_back(path);
        log << "  wrote " << path.string() << "\n";
    }
    if (options.gnuplot) {
        outputs.gnuplot_script = out_dir / (options.kind + ".gp");
        std::ofstream gp(outputs.gnuplot_script, std::ios::binary | std::ios::trunc);
        gp << gnuplot_script(options, series);
        if (!gp) throw std::runtime_error("write failed: " + outputs.gnuplot_script.string());
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json files = json::array();
    for (const auto& p : outputs.csv_files) files.push_back(p.filename().string());
    json manifest{{"tool", "oracle-cs"},
                  {"version", kVersion},
                  {"config", options_to_json(options)},
                  {"seed", options.seed},
                  {"duration_seconds", seconds},
                  {"output_dir", out_dir.string()},
                  {"outputs", files}};
    if (!outputs.gnuplot_script.empty())
        manifest["gnuplot_script"] = outputs.gnuplot_script.filename().string();

    outputs.manifest = out_dir / (options.kind + "_manifest.json");
    std::ofstream mf(outputs.manifest, std::ios::binary | std::ios::trunc);
    mf << manifest.dump(2) << '\n';
    if (!mf) throw std::runtime_error("write failed: " + outputs.manifest.string());
    log << "  manifest " << outputs.manifest.string() << "\n";
    return outputs;
}

SweepOptions load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest " + path.string());
    const json j = json::parse(in);
    if (j.value("tool", "") != "oracle-cs")
        throw std::invalid_argument(path.string() + " is not an oracle-cs manifest");
    if (j.value("version", "") != kVersion)
        throw std::invalid_argument("manifest was written by version " +
                                    j.value("version", std::string("?")) + ", this is " +
                                    kVersion);
    return options_from_json(j.at("config"));
}

}  // namespace oracle_cs::cli
