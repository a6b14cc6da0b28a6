#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "oracle_cs/model.hpp"

namespace oracle_cs::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Fully resolved sweep request. Together with the tool version this is
/// everything needed to regenerate the CSVs of a run.
struct SweepOptions {
    std::string kind = "white";  // white | quant | corr
    Index n = 512;
    Index k = 16;
    Index m = 128;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    double sigma2_theta = 1.0;
    double sigma2_phi = 1.0 / 128.0;
    std::vector<double> sigma2z_grid;  // white, corr
    std::vector<double> delta_grid;    // quant
    std::vector<double> rho;           // corr, one series per value
    std::vector<double> delta_k;
    bool gnuplot = false;
};

std::vector<double> default_sigma2z_grid();
std::vector<double> default_delta_grid();

struct SweepOutputs {
    std::vector<std::filesystem::path> csv_files;
    std::filesystem::path manifest;
    std::filesystem::path gnuplot_script;  // empty unless requested
};

/// Runs the sweep(s) in `options`, writes CSVs, the manifest and (optionally)
/// a gnuplot script into `out_dir`. Output bytes do not depend on `threads`.
SweepOutputs execute_sweep(const SweepOptions& options, const std::filesystem::path& out_dir,
                           unsigned threads, std::ostream& log);

/// Reads the options back from a manifest written by execute_sweep.
SweepOptions load_manifest(const std::filesystem::path& manifest);

/// CLI entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oracle_cs::cli
