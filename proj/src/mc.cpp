#include "oracle_cs/mc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "oracle_cs/oracle.hpp"
#include "oracle_cs/parallel.hpp"

namespace oracle_cs {

void ExperimentConfig::validate(bool closed_form) const {
    if (!(k >= 1 && k < m && m < n))
        throw std::invalid_argument("config: need 0 < k < m < n (got n=" + std::to_string(n) +
                                    ", k=" + std::to_string(k) + ", m=" + std::to_string(m) +
                                    ")");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (!(sigma2_theta > 0.0)) throw std::invalid_argument("config: sigma2_theta must be > 0");
    if (!(sigma2_phi > 0.0)) throw std::invalid_argument("config: sigma2_phi must be > 0");
    if (!noise.is_quantizer() && noise.length() != m)
        throw std::invalid_argument("config: noise length " + std::to_string(noise.length()) +
                                    " does not match m=" + std::to_string(m));
    if (closed_form && m <= k + 3)
        throw std::invalid_argument("config: closed-form comparison requires M > K + 3");
}

double run_trial(const ExperimentConfig& config, std::uint64_t stream) {
    const auto basis = shared_dct_basis(config.n);
    Rng rng(config.seed, stream);

    const SparseSignal signal =
        gen_sparse_signal(config.n, config.k, config.sigma2_theta, *basis, rng);
    const SensingMatrix sensing = gen_sensing_matrix(config.m, config.n, config.sigma2_phi, rng);

    Eigen::VectorXd y;
    if (const auto* q = std::get_if<UniformQuantizer>(&config.noise.params())) {
        y = quantize_uniform(sensing.phi * signal.x, q->delta);
    } else {
        y = measure(sensing, signal.x, sample_noise(config.noise, rng));
    }

    // U_Omega = Phi Psi_Omega; the full m x n product is never needed.
    const Eigen::MatrixXd u_support = sensing.phi * restrict_columns(basis->matrix, signal.support);
    const OracleReconstruction rec =
        reconstruct_on_support(u_support, signal.support, *basis, y, &signal.x);
    return *rec.squared_error;
}

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::sigma2_z: return "sigma2_z";
        case SweepParameter::delta: return "delta";
        case SweepParameter::rho: return "rho";
    }
    return "unknown";
}

NoiseModel with_parameter(const NoiseModel& noise, SweepParameter parameter, double value) {
    const auto mismatch = [&]() -> std::invalid_argument {
        return std::invalid_argument("sweep parameter " + std::string(to_string(parameter)) +
                                     " does not apply to this noise model");
    };
    switch (parameter) {
        case SweepParameter::sigma2_z:
            if (const auto* w = std::get_if<WhiteNoise>(&noise.params()))
                return NoiseModel::white(w->m, value);
            if (const auto* a = std::get_if<Ar1Noise>(&noise.params()))
                return NoiseModel::ar1(a->m, value, a->rho);
            throw mismatch();
        case SweepParameter::delta:
            if (noise.is_quantizer()) return NoiseModel::quantizer(value);
            throw mismatch();
        case SweepParameter::rho:
            if (const auto* a = std::get_if<Ar1Noise>(&noise.params()))
                return NoiseModel::ar1(a->m, a->sigma2_z, value);
            throw mismatch();
    }
    throw mismatch();
}

SweepResult run_sweep(const ExperimentConfig& config, SweepParameter parameter,
                      const std::vector<double>& grid, const std::vector<double>& delta_k,
                      unsigned threads) {
    if (grid.empty()) throw std::invalid_argument("sweep: grid is empty");
    config.validate(true);

    std::vector<ExperimentConfig> points;
    points.reserve(grid.size());
    for (double v : grid) {
        ExperimentConfig c = config;
        c.noise = with_parameter(config.noise, parameter, v);
        points.push_back(std::move(c));
    }
    const std::uint64_t trials = config.trials;
    shared_dct_basis(config.n);  // build once before the workers start

    std::vector<double> errors(points.size() * trials);
    parallel_for(errors.size(), threads, [&](std::size_t i) {
        const std::size_t p = i / trials;
        errors[i] = run_trial(points[p], static_cast<std::uint64_t>(i));
    });

    SweepResult r;
    r.parameter = parameter;
    r.grid = grid;
    r.delta_k = delta_k;
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double* e = errors.data() + p * trials;
        CompensatedSum sum;
        for (std::uint64_t t = 0; t < trials; ++t) sum.add(e[t]);
        const double mean = sum.value() / static_cast<double>(trials);
        double se = std::numeric_limits<double>::quiet_NaN();
        if (trials > 1) {
            CompensatedSum sq;
            for (std::uint64_t t = 0; t < trials; ++t) sq.add((e[t] - mean) * (e[t] - mean));
            const double var = sq.value() / static_cast<double>(trials - 1);
            se = std::sqrt(var / static_cast<double>(trials));
        }
        r.empirical_mse.push_back(mean);
        r.std_error.push_back(se);

        const NoiseModel& noise = points[p].noise;
        const CovarianceSummary summary =
            covariance_summary(noise, noise.is_quantizer() ? config.m : 0);
        r.predicted_mse.push_back(
            closed_form_mse(config.k, config.m, config.sigma2_phi, summary.trace));
        std::vector<BoundSet> bounds;
        for (double d : delta_k)
            bounds.push_back(make_bound_set(config.k, config.m, config.sigma2_phi, noise, d));
        r.bounds.push_back(std::move(bounds));
    }
    return r;
}

}  // namespace oracle_cs
