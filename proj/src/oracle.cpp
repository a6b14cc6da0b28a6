#include "oracle_cs/oracle.hpp"

#include <stdexcept>
#include <vector>

#include "oracle_cs/errors.hpp"

namespace oracle_cs {

Eigen::MatrixXd restrict_columns(const Eigen::MatrixXd& u, const Support& support) {
    std::vector<bool> seen(static_cast<std::size_t>(u.cols()), false);
    Eigen::MatrixXd out(u.rows(), static_cast<Index>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c) {
        const Index idx = support[c];
        if (idx < 0 || idx >= u.cols())
            throw std::out_of_range("restrict_columns: index " + std::to_string(idx) +
                                    " outside [0, " + std::to_string(u.cols()) + ")");
        if (seen[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("restrict_columns: duplicate index " +
                                        std::to_string(idx));
        seen[static_cast<std::size_t>(idx)] = true;
        out.col(static_cast<Index>(c)) = u.col(idx);
    }
    return out;
}

Eigen::VectorXd solve_on_support(const Eigen::MatrixXd& u_support, const Eigen::VectorXd& y) {
    if (y.size() != u_support.rows())
        throw std::invalid_argument("solve_on_support: measurement length mismatch");
    if (u_support.cols() == 0 || u_support.cols() > u_support.rows())
        throw std::invalid_argument("solve_on_support: need 0 < k <= m");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(u_support, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smax > 0.0) || !(smin > kOracleRankTolerance * smax))
        throw SingularMatrixError("oracle: restricted dictionary is rank deficient (sigma_min=" +
                                  std::to_string(smin) + ", sigma_max=" +
                                  std::to_string(smax) + ")");
    return svd.solve(y);
}

OracleReconstruction reconstruct_on_support(const Eigen::MatrixXd& u_support,
                                            const Support& support, const Basis& basis,
                                            const Eigen::VectorXd& y,
                                            const Eigen::VectorXd* x_true) {
    const Index n = basis.dimension();
    if (u_support.cols() != static_cast<Index>(support.size()))
        throw std::invalid_argument("reconstruct_on_support: support size mismatch");

    const Eigen::VectorXd coeffs = solve_on_support(u_support, y);

    OracleReconstruction rec;
    rec.theta_hat = Eigen::VectorXd::Zero(n);
    rec.x_hat = Eigen::VectorXd::Zero(n);
    for (std::size_t c = 0; c < support.size(); ++c) {
        const Index idx = support[c];
        if (idx < 0 || idx >= n) throw std::out_of_range("reconstruct_on_support: bad index");
        rec.theta_hat(idx) = coeffs(static_cast<Index>(c));
        rec.x_hat += basis.matrix.col(idx) * coeffs(static_cast<Index>(c));
    }
    if (x_true) {
        if (x_true->size() != n)
            throw std::invalid_argument("reconstruct_on_support: true signal length mismatch");
        rec.squared_error = (rec.x_hat - *x_true).squaredNorm();
    }
    return rec;
}

OracleReconstruction oracle_reconstruct(const SensingSetup& setup, const Support& support,
                                        const Eigen::VectorXd& y,
                                        const Eigen::VectorXd* x_true) {
    if (static_cast<Index>(support.size()) >= setup.m())
        throw std::invalid_argument("oracle_reconstruct: need |support| < m");
    return reconstruct_on_support(restrict_columns(setup.u, support), support, *setup.basis, y,
                                  x_true);
}

}  // namespace oracle_cs
