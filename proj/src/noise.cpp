#include "oracle_cs/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oracle_cs/errors.hpp"

namespace oracle_cs {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void check_gaussian(Index m, double sigma2_z) {
    if (m < 1) throw std::invalid_argument("noise: length must be >= 1");
    if (!(sigma2_z >= 0.0) || !std::isfinite(sigma2_z))
        throw std::invalid_argument("noise: sigma2_z must be finite and >= 0");
}

Eigen::MatrixXd ar1_covariance(const Ar1Noise& p) {
    Eigen::MatrixXd cov(p.m, p.m);
    for (Index i = 0; i < p.m; ++i)
        for (Index j = 0; j < p.m; ++j)
            cov(i, j) = p.sigma2_z * std::pow(p.rho, static_cast<double>(std::abs(i - j)));
    return cov;
}

}  // namespace

NoiseModel NoiseModel::white(Index m, double sigma2_z) {
    check_gaussian(m, sigma2_z);
    return NoiseModel(WhiteNoise{m, sigma2_z});
}

NoiseModel NoiseModel::ar1(Index m, double sigma2_z, double rho) {
    check_gaussian(m, sigma2_z);
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("noise: AR(1) rho must lie in [0, 1), got " +
                                    std::to_string(rho));
    NoiseModel model(Ar1Noise{m, sigma2_z, rho});
    // Factor the unit-variance correlation so sigma2_z = 0 stays well defined.
    Eigen::LLT<Eigen::MatrixXd> llt(ar1_covariance(Ar1Noise{m, 1.0, rho}));
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("noise: internal error, AR(1) Cholesky failed");
    model.chol_ = std::make_shared<const Eigen::MatrixXd>(
        std::sqrt(sigma2_z) * Eigen::MatrixXd(llt.matrixL()));
    return model;
}

NoiseModel NoiseModel::quantizer(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("noise: quantizer step must be positive");
    return NoiseModel(UniformQuantizer{delta});
}

double NoiseModel::entry_variance() const {
    return std::visit(Overloaded{[](const WhiteNoise& p) { return p.sigma2_z; },
                                 [](const Ar1Noise& p) { return p.sigma2_z; },
                                 [](const UniformQuantizer& p) { return p.surrogate_variance(); }},
                      params_);
}

Index NoiseModel::length() const {
    return std::visit(
        Overloaded{[](const WhiteNoise& p) { return p.m; }, [](const Ar1Noise& p) { return p.m; },
                   [](const UniformQuantizer&) -> Index {
                       throw DeterministicChannelError(
                           "quantizer is a deterministic channel with no fixed length");
                   }},
        params_);
}

Eigen::MatrixXd covariance(const NoiseModel& model) {
    return std::visit(
        Overloaded{[](const WhiteNoise& p) -> Eigen::MatrixXd {
                       return p.sigma2_z * Eigen::MatrixXd::Identity(p.m, p.m);
                   },
                   [](const Ar1Noise& p) -> Eigen::MatrixXd { return ar1_covariance(p); },
                   [](const UniformQuantizer&) -> Eigen::MatrixXd {
                       throw DeterministicChannelError(
                           "quantizer is a deterministic channel and has no covariance matrix");
                   }},
        model.params());
}

Eigen::VectorXd sample_noise(const NoiseModel& model, Rng& rng) {
    return std::visit(
        Overloaded{[&](const WhiteNoise& p) -> Eigen::VectorXd {
                       Eigen::VectorXd z(p.m);
                       const double sd = std::sqrt(p.sigma2_z);
                       for (Index i = 0; i < p.m; ++i) z(i) = sd * rng.normal();
                       return z;
                   },
                   [&](const Ar1Noise& p) -> Eigen::VectorXd {
                       Eigen::VectorXd w(p.m);
                       for (Index i = 0; i < p.m; ++i) w(i) = rng.normal();
                       return model.cholesky_factor()->triangularView<Eigen::Lower>() * w;
                   },
                   [](const UniformQuantizer&) -> Eigen::VectorXd {
                       throw DeterministicChannelError(
                           "quantizer is a deterministic channel; apply quantize_uniform instead");
                   }},
        model.params());
}

Eigen::VectorXd quantize_uniform(const Eigen::VectorXd& y, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("quantize_uniform: delta must be positive");
    // std::round rounds halves away from zero.
    return y.unaryExpr([delta](double v) { return delta * std::round(v / delta); });
}

CovarianceSummary covariance_summary(const NoiseModel& model, Index measurements) {
    if (const auto* q = std::get_if<UniformQuantizer>(&model.params())) {
        if (measurements < 1)
            throw std::invalid_argument(
                "covariance_summary: quantizer surrogate needs the measurement count");
        const double v = q->surrogate_variance();
        return {static_cast<double>(measurements) * v, v};
    }
    const Index m = model.length();
    if (measurements != 0 && measurements != m)
        throw std::invalid_argument("covariance_summary: measurement count does not match model");
    const double s2 = model.entry_variance();
    if (model.is_white()) return {static_cast<double>(m) * s2, s2};

    // Diagonal is constant, so the trace is exact.
    CovarianceSummary out;
    out.trace = static_cast<double>(m) * s2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance(model),
                                                       Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("covariance_summary: eigensolver failed");
    out.lambda_max = eig.eigenvalues().maxCoeff();
    return out;
}

}  // namespace oracle_cs
