#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "oracle_cs/model.hpp"
#include "oracle_cs/noise.hpp"
#include "oracle_cs/theory.hpp"

namespace oracle_cs {

/// One Monte-Carlo experiment. The sparsity basis is the orthonormal DCT.
struct ExperimentConfig {
    Index n = 512;
    Index k = 16;
    Index m = 128;
    double sigma2_theta = 1.0;
    double sigma2_phi = 1.0 / 128.0;
    NoiseModel noise = NoiseModel::white(128, 1e-3);
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument on inconsistent dimensions or counts.
    /// With `closed_form`, also requires m > k + 3.
    void validate(bool closed_form = false) const;
};

/// Squared reconstruction error ||x_hat - x||^2 of one oracle trial.
///
/// Draws, in order, the support, the nonzero coefficients, Phi (row major) and
/// the noise from Rng(config.seed, stream). A quantizer channel replaces the
/// additive noise by quantizing Phi x. Reconstruction uses the true support.
double run_trial(const ExperimentConfig& config, std::uint64_t stream);

enum class SweepParameter { sigma2_z, delta, rho };

std::string_view to_string(SweepParameter p);

struct SweepResult {
    SweepParameter parameter = SweepParameter::sigma2_z;
    std::vector<double> grid;
    std::vector<double> delta_k;
    std::vector<double> empirical_mse;
    std::vector<double> std_error;      // sample stddev / sqrt(trials); NaN for one trial
    std::vector<double> predicted_mse;
    std::vector<std::vector<BoundSet>> bounds;  // [point][delta_k index]
};

/// The channel of `config` with `parameter` set to `value`. Throws
/// std::invalid_argument when the parameter does not belong to the channel.
NoiseModel with_parameter(const NoiseModel& noise, SweepParameter parameter, double value);

/// Runs config.trials trials at every grid value. Point p, trial t uses stream
/// p * trials + t under config.seed. Trials run on up to `threads` workers;
/// errors are reduced per point in trial order, so the result is independent
/// of the worker count.
SweepResult run_sweep(const ExperimentConfig& config, SweepParameter parameter,
                      const std::vector<double>& grid, const std::vector<double>& delta_k,
                      unsigned threads = 1);

}  // namespace oracle_cs
