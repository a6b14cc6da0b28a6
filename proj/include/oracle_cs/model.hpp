#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "oracle_cs/rng.hpp"

namespace oracle_cs {

using Index = Eigen::Index;
using Support = std::vector<Index>;

/// Orthonormal n x n sparsity basis. Columns are the atoms, so x = matrix * theta.
struct Basis {
    Eigen::MatrixXd matrix;

    Index dimension() const { return matrix.rows(); }
};

/// Orthonormal DCT-II matrix, entry (k, j) = c_k cos(pi (2j + 1) k / (2n)) with
/// c_0 = sqrt(1/n) and c_k = sqrt(2/n) otherwise. Built by direct evaluation.
Basis dct_basis(Index n);

/// Process-wide shared copy of dct_basis(n), built on first use.
std::shared_ptr<const Basis> shared_dct_basis(Index n);

/// K-sparse coefficient vector together with its synthesis x = Psi * theta.
struct SparseSignal {
    Index n = 0;
    Index k = 0;
    Support support;  // ascending
    Eigen::VectorXd theta;
    Eigen::VectorXd x;
};

SparseSignal gen_sparse_signal(Index n, Index k, double sigma2_theta, const Basis& basis,
                               Rng& rng);

/// Uniform random k-subset of [0, n), returned in ascending order.
Support draw_support(Index n, Index k, Rng& rng);

/// Gaussian sensing matrix Phi (m x n, i.i.d. N(0, sigma2_phi)).
struct SensingMatrix {
    Eigen::MatrixXd phi;
    double sigma2_phi = 0.0;

    Index rows() const { return phi.rows(); }
    Index cols() const { return phi.cols(); }
};

SensingMatrix gen_sensing_matrix(Index m, Index n, double sigma2_phi, Rng& rng);

/// Phi together with the basis it acts on and the effective dictionary U = Phi Psi.
struct SensingSetup {
    SensingMatrix sensing;
    std::shared_ptr<const Basis> basis;
    Eigen::MatrixXd u;

    Index m() const { return sensing.rows(); }
    Index n() const { return sensing.cols(); }
};

SensingSetup make_sensing_setup(SensingMatrix sensing, std::shared_ptr<const Basis> basis);

/// y = Phi x + z.
Eigen::VectorXd measure(const SensingMatrix& sensing, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& z);

inline Eigen::VectorXd measure(const SensingSetup& setup, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& z) {
    return measure(setup.sensing, x, z);
}

}  // namespace oracle_cs
