#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "oracle_cs/model.hpp"
#include "oracle_cs/noise.hpp"
#include "oracle_cs/rng.hpp"

namespace oracle_cs {

/// Exact expected oracle error E||x_hat - x||^2 for Gaussian sensing:
/// k tr(Sigma_z) / (m (m - k - 1) sigma2_phi). Requires m > k + 3.
double closed_form_mse(Index k, Index m, double sigma2_phi, double trace_sigma_z);

/// Equal-variance form k sigma2_z / ((m - k - 1) sigma2_phi). Evaluated as
/// closed_form_mse with trace m sigma2_z so the two agree bit for bit.
double closed_form_mse_white(Index k, Index m, double sigma2_phi, double sigma2_z);

struct RipBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// RIP-based white-noise bounds k sigma2_z / (1 +- delta_k). delta_k in [0, 1).
RipBounds rip_bounds_white(Index k, double delta_k, double sigma2_z);

/// RIP-based correlated-noise upper bound k lambda_max / (1 - delta_k).
double rip_bound_correlated(Index k, double delta_k, double lambda_max);

/// Closed-form prediction next to the RIP bounds at one delta_k.
struct BoundSet {
    double closed_form = 0.0;
    double rip_lower_white = 0.0;
    double rip_upper_white = 0.0;
    double rip_upper_corr = 0.0;
    double delta_k = 0.0;
};

/// Bounds for a channel. White bounds use the per-entry variance
/// (delta^2/12 for the quantizer); the correlated bound uses lambda_max.
BoundSet make_bound_set(Index k, Index m, double sigma2_phi, const NoiseModel& noise,
                        double delta_k);

/// Binomial coefficient as a double (exact up to 2^53).
double binomial(Index n, Index k);

/// Largest subset count rip_constant_bruteforce will enumerate.
inline constexpr double kMaxRipSubsets = 1e6;

struct RipConstant {
    double delta = 0.0;
    Support argmax;  // first maximising subset in lexicographic order
    std::uint64_t subsets = 0;
};

/// delta_k = max over k-subsets S of ||A_S^T A_S - I||_2, each Gram matrix
/// handled by a symmetric eigensolve. Subsets are split into fixed
/// lexicographic rank ranges so the result does not depend on `threads`.
RipConstant rip_constant_bruteforce(const Eigen::MatrixXd& a, Index k, unsigned threads = 1);

/// Same quantity from the singular values of each A_S: max |sigma_i^2 - 1|.
/// Serial; kept as an independent cross-check of the Gram route.
RipConstant rip_constant_singular_values(const Eigen::MatrixXd& a, Index k);

struct WishartCheckReport {
    Index m = 0;
    Index k = 0;
    std::uint64_t trials = 0;
    double sigma2_phi = 0.0;
    double predicted_scale = 0.0;
    double empirical_diag_mean = 0.0;
    double empirical_offdiag_max = 0.0;
};

/// Monte-Carlo mean of (U U^T)^+ for m x k Gaussian U with entry variance
/// sigma2_phi, compared with the scaled identity k / (m (m - k - 1) sigma2_phi) I.
/// Trial t draws from rng.substream(t).
WishartCheckReport wishart_pinv_mean_check(Index m, Index k, double sigma2_phi,
                                           std::uint64_t trials, const Rng& rng,
                                           unsigned threads = 1);

}  // namespace oracle_cs
