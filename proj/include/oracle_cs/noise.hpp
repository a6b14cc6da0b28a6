#pragma once

#include <memory>
#include <variant>

#include <Eigen/Dense>

#include "oracle_cs/model.hpp"
#include "oracle_cs/rng.hpp"

namespace oracle_cs {

struct WhiteNoise {
    Index m = 0;
    double sigma2_z = 0.0;
};

/// Stationary AR(1) Gaussian noise, covariance sigma2_z * rho^|i-j|.
struct Ar1Noise {
    Index m = 0;
    double sigma2_z = 0.0;
    double rho = 0.0;  // [0, 1)
};

/// Unbounded mid-tread uniform scalar quantizer.
struct UniformQuantizer {
    double delta = 0.0;

    /// High-rate surrogate for the per-entry error variance.
    double surrogate_variance() const { return delta * delta / 12.0; }
};

/// Measurement channel. Immutable once built; the AR(1) Cholesky factor is
/// computed at construction and shared between copies.
class NoiseModel {
public:
    using Variant = std::variant<WhiteNoise, Ar1Noise, UniformQuantizer>;

    static NoiseModel white(Index m, double sigma2_z);
    static NoiseModel ar1(Index m, double sigma2_z, double rho);
    static NoiseModel quantizer(double delta);

    const Variant& params() const { return params_; }

    bool is_white() const { return std::holds_alternative<WhiteNoise>(params_); }
    bool is_ar1() const { return std::holds_alternative<Ar1Noise>(params_); }
    bool is_quantizer() const { return std::holds_alternative<UniformQuantizer>(params_); }

    /// Per-entry variance: sigma2_z for Gaussian channels, delta^2/12 for the quantizer.
    double entry_variance() const;

    /// Vector length for the Gaussian channels. Throws DeterministicChannelError
    /// for the quantizer, which adapts to its input.
    Index length() const;

    /// Lower Cholesky factor of the AR(1) covariance; null for other channels.
    const Eigen::MatrixXd* cholesky_factor() const { return chol_.get(); }

private:
    explicit NoiseModel(Variant v) : params_(std::move(v)) {}

    Variant params_;
    std::shared_ptr<const Eigen::MatrixXd> chol_;
};

struct CovarianceSummary {
    double trace = 0.0;
    double lambda_max = 0.0;
};

/// Covariance matrix of a Gaussian channel.
Eigen::MatrixXd covariance(const NoiseModel& model);

/// One noise draw. White: i.i.d. N(0, sigma2_z). AR(1): L w with w i.i.d. N(0, 1).
Eigen::VectorXd sample_noise(const NoiseModel& model, Rng& rng);

/// delta * round(y / delta), halves rounded away from zero.
Eigen::VectorXd quantize_uniform(const Eigen::VectorXd& y, double delta);

/// Trace and largest eigenvalue of the channel covariance. For the quantizer
/// the high-rate surrogate (delta^2/12) I_m is summarised, with m taken from
/// `measurements`; for the Gaussian channels `measurements` must be zero or
/// equal the model length.
CovarianceSummary covariance_summary(const NoiseModel& model, Index measurements = 0);

}  // namespace oracle_cs
