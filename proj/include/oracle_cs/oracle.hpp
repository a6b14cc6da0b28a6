#pragma once

#include <optional>

#include <Eigen/Dense>

#include "oracle_cs/model.hpp"

namespace oracle_cs {

/// Relative singular-value floor below which a restricted dictionary is
/// treated as rank deficient.
inline constexpr double kOracleRankTolerance = 1e-10;

struct OracleReconstruction {
    Eigen::VectorXd theta_hat;  // zero off the support
    Eigen::VectorXd x_hat;      // basis * theta_hat
    std::optional<double> squared_error;  // ||x_hat - x||^2 when the truth was supplied
};

/// Columns of `u` listed in `support`, in support order.
Eigen::MatrixXd restrict_columns(const Eigen::MatrixXd& u, const Support& support);

/// Least-squares coefficients on the support, via SVD of u_support. Throws
/// SingularMatrixError when sigma_min <= kOracleRankTolerance * sigma_max.
Eigen::VectorXd solve_on_support(const Eigen::MatrixXd& u_support, const Eigen::VectorXd& y);

/// Oracle estimate from an already restricted dictionary. Used by the
/// Monte-Carlo harness, which never needs the full U = Phi Psi.
OracleReconstruction reconstruct_on_support(const Eigen::MatrixXd& u_support,
                                            const Support& support, const Basis& basis,
                                            const Eigen::VectorXd& y,
                                            const Eigen::VectorXd* x_true = nullptr);

/// Oracle estimator: least squares on the columns of U indexed by the known
/// support, zero elsewhere, mapped back through the basis.
OracleReconstruction oracle_reconstruct(const SensingSetup& setup, const Support& support,
                                        const Eigen::VectorXd& y,
                                        const Eigen::VectorXd* x_true = nullptr);

}  // namespace oracle_cs
