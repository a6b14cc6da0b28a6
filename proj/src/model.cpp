#include "oracle_cs/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace oracle_cs {

Basis dct_basis(Index n) {
    if (n < 1) throw std::invalid_argument("dct_basis: n must be >= 1");
    Basis basis{Eigen::MatrixXd(n, n)};
    const double nd = static_cast<double>(n);
    const double c0 = std::sqrt(1.0 / nd);
    const double ck = std::sqrt(2.0 / nd);
    for (Index k = 0; k < n; ++k) {
        const double scale = k == 0 ? c0 : ck;
        for (Index j = 0; j < n; ++j) {
            // Reduce the angle argument mod 4n to keep cos() accurate at large n.
            const auto phase = ((2 * j + 1) * k) % (4 * n);
            basis.matrix(k, j) =
                scale * std::cos(std::numbers::pi * static_cast<double>(phase) / (2.0 * nd));
        }
    }
    return basis;
}

std::shared_ptr<const Basis> shared_dct_basis(Index n) {
    static std::mutex mutex;
    static std::map<Index, std::shared_ptr<const Basis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const Basis>(dct_basis(n));
    return slot;
}

Support draw_support(Index n, Index k, Rng& rng) {
    if (k <= 0 || k > n) throw std::invalid_argument("draw_support: need 0 < k <= n");
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    for (Index i = 0; i < k; ++i) {
        const auto j = i + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    Support support(pool.begin(), pool.begin() + k);
    std::sort(support.begin(), support.end());
    return support;
}

SparseSignal gen_sparse_signal(Index n, Index k, double sigma2_theta, const Basis& basis,
                               Rng& rng) {
    if (k <= 0 || k >= n)
        throw std::invalid_argument("gen_sparse_signal: need 0 < k < n, got k=" +
                                    std::to_string(k) + ", n=" + std::to_string(n));
    if (!(sigma2_theta > 0.0))
        throw std::invalid_argument("gen_sparse_signal: sigma2_theta must be positive");
    if (basis.dimension() != n)
        throw std::invalid_argument("gen_sparse_signal: basis dimension does not match n");

    SparseSignal s;
    s.n = n;
    s.k = k;
    s.support = draw_support(n, k, rng);
    s.theta = Eigen::VectorXd::Zero(n);
    const double sd = std::sqrt(sigma2_theta);
    for (Index idx : s.support) {
        double v = 0.0;
        // A Gaussian draw of exactly zero has probability zero but would break
        // the sparsity invariant; redraw.
        while (v == 0.0) v = sd * rng.normal();
        s.theta(idx) = v;
    }
    s.x = Eigen::VectorXd::Zero(n);
    for (Index idx : s.support) s.x += basis.matrix.col(idx) * s.theta(idx);
    return s;
}

SensingMatrix gen_sensing_matrix(Index m, Index n, double sigma2_phi, Rng& rng) {
    if (m <= 0 || m >= n)
        throw std::invalid_argument("gen_sensing_matrix: need 0 < m < n, got m=" +
                                    std::to_string(m) + ", n=" + std::to_string(n));
    if (!(sigma2_phi > 0.0))
        throw std::invalid_argument("gen_sensing_matrix: sigma2_phi must be positive");
    SensingMatrix s{Eigen::MatrixXd(m, n), sigma2_phi};
    const double sd = std::sqrt(sigma2_phi);
    // Row-major fill order, fixed so the draw sequence is part of the contract.
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j) s.phi(i, j) = sd * rng.normal();
    return s;
}

SensingSetup make_sensing_setup(SensingMatrix sensing, std::shared_ptr<const Basis> basis) {
    if (!basis) throw std::invalid_argument("make_sensing_setup: null basis");
    if (basis->dimension() != sensing.cols())
        throw std::invalid_argument("make_sensing_setup: basis dimension does not match Phi");
    Eigen::MatrixXd u = sensing.phi * basis->matrix;
    return SensingSetup{std::move(sensing), std::move(basis), std::move(u)};
}

Eigen::VectorXd measure(const SensingMatrix& sensing, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& z) {
    if (x.size() != sensing.cols() || z.size() != sensing.rows())
        throw std::invalid_argument("measure: dimension mismatch");
    return sensing.phi * x + z;
}

}  // namespace oracle_cs
