#include "oracle_cs/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oracle_cs/errors.hpp"
#include "oracle_cs/parallel.hpp"

namespace oracle_cs {

namespace {

void require_closed_form_regime(Index k, Index m) {
    if (k < 1) throw std::domain_error("closed form: need k >= 1");
    if (m <= k + 3)
        throw std::domain_error("closed form requires M > K + 3 (got M=" + std::to_string(m) +
                                ", K=" + std::to_string(k) + ")");
}

void require_delta(double delta_k) {
    if (!(delta_k >= 0.0 && delta_k < 1.0))
        throw std::domain_error("RIP bound: delta_k must lie in [0, 1), got " +
                                std::to_string(delta_k));
}

// Lexicographic k-subset of [0, n) with the given rank.
Support unrank_combination(Index n, Index k, std::uint64_t rank) {
    Support out;
    out.reserve(static_cast<std::size_t>(k));
    Index next = 0;
    for (Index slot = 0; slot < k; ++slot) {
        for (Index v = next; v < n; ++v) {
            const auto count = static_cast<std::uint64_t>(binomial(n - v - 1, k - slot - 1));
            if (rank < count) {
                out.push_back(v);
                next = v + 1;
                break;
            }
            rank -= count;
        }
    }
    return out;
}

bool next_combination(Support& s, Index n) {
    const auto k = static_cast<Index>(s.size());
    for (Index i = k - 1; i >= 0; --i) {
        auto& v = s[static_cast<std::size_t>(i)];
        if (v < n - k + i) {
            ++v;
            for (Index j = i + 1; j < k; ++j)
                s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

std::uint64_t checked_subset_count(const Eigen::MatrixXd& a, Index k) {
    if (k < 1 || k > a.cols())
        throw std::invalid_argument("RIP constant: need 1 <= k <= n (got k=" +
                                    std::to_string(k) + ")");
    const double count = binomial(a.cols(), k);
    if (count > kMaxRipSubsets) throw CombinatorialLimitError(count, kMaxRipSubsets);
    return static_cast<std::uint64_t>(count);
}

double gram_deviation(const Eigen::MatrixXd& a, const Support& s, Eigen::MatrixXd& cols) {
    for (std::size_t c = 0; c < s.size(); ++c) cols.col(static_cast<Index>(c)) = a.col(s[c]);
    Eigen::MatrixXd gram = cols.transpose() * cols;
    gram.diagonal().array() -= 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double closed_form_mse(Index k, Index m, double sigma2_phi, double trace_sigma_z) {
    require_closed_form_regime(k, m);
    if (!(sigma2_phi > 0.0)) throw std::domain_error("closed form: sigma2_phi must be positive");
    if (!(trace_sigma_z >= 0.0)) throw std::domain_error("closed form: trace must be >= 0");
    const double kd = static_cast<double>(k);
    const double md = static_cast<double>(m);
    return kd * trace_sigma_z / (md * (md - kd - 1.0) * sigma2_phi);
}

double closed_form_mse_white(Index k, Index m, double sigma2_phi, double sigma2_z) {
    return closed_form_mse(k, m, sigma2_phi, static_cast<double>(m) * sigma2_z);
}

RipBounds rip_bounds_white(Index k, double delta_k, double sigma2_z) {
    require_delta(delta_k);
    const double base = static_cast<double>(k) * sigma2_z;
    return {base / (1.0 + delta_k), base / (1.0 - delta_k)};
}

double rip_bound_correlated(Index k, double delta_k, double lambda_max) {
    require_delta(delta_k);
    if (!(lambda_max >= 0.0)) throw std::domain_error("RIP bound: lambda_max must be >= 0");
    return static_cast<double>(k) * lambda_max / (1.0 - delta_k);
}

BoundSet make_bound_set(Index k, Index m, double sigma2_phi, const NoiseModel& noise,
                        double delta_k) {
    const CovarianceSummary summary = covariance_summary(noise, noise.is_quantizer() ? m : 0);
    if (!noise.is_quantizer() && noise.length() != m)
        throw std::invalid_argument("make_bound_set: noise length does not match m");
    const RipBounds white = rip_bounds_white(k, delta_k, noise.entry_variance());
    BoundSet b;
    b.closed_form = closed_form_mse(k, m, sigma2_phi, summary.trace);
    b.rip_lower_white = white.lower;
    b.rip_upper_white = white.upper;
    b.rip_upper_corr = rip_bound_correlated(k, delta_k, summary.lambda_max);
    b.delta_k = delta_k;
    return b;
}

double binomial(Index n, Index k) {
    if (k < 0 || n < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (Index i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

RipConstant rip_constant_bruteforce(const Eigen::MatrixXd& a, Index k, unsigned threads) {
    const std::uint64_t total = checked_subset_count(a, k);
    const std::uint64_t chunk = 4096;
    const std::size_t parts = static_cast<std::size_t>((total + chunk - 1) / chunk);

    std::vector<RipConstant> partial(parts);
    parallel_for(parts, threads, [&](std::size_t p) {
        const std::uint64_t begin = p * chunk;
        const std::uint64_t end = std::min(total, begin + chunk);
        Support s = unrank_combination(a.cols(), k, begin);
        Eigen::MatrixXd cols(a.rows(), k);
        RipConstant best{-1.0, {}, end - begin};
        for (std::uint64_t r = begin; r < end; ++r) {
            const double d = gram_deviation(a, s, cols);
            if (d > best.delta) best = {d, s, best.subsets};
            next_combination(s, a.cols());
        }
        partial[p] = std::move(best);
    });

    RipConstant out{-1.0, {}, 0};
    for (auto& part : partial) {
        out.subsets += part.subsets;
        if (part.delta > out.delta) {
            out.delta = part.delta;
            out.argmax = std::move(part.argmax);
        }
    }
    return out;
}

RipConstant rip_constant_singular_values(const Eigen::MatrixXd& a, Index k) {
    const std::uint64_t total = checked_subset_count(a, k);
    Support s(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = i;
    RipConstant out{-1.0, {}, total};
    Eigen::MatrixXd cols(a.rows(), k);
    do {
        for (Index c = 0; c < k; ++c) cols.col(c) = a.col(s[static_cast<std::size_t>(c)]);
        Eigen::VectorXd sv = Eigen::VectorXd::Zero(k);
        const auto computed = Eigen::JacobiSVD<Eigen::MatrixXd>(cols).singularValues();
        sv.head(computed.size()) = computed;  // a wide A_S has k - m zero singular values
        const double d = (sv.array().square() - 1.0).abs().maxCoeff();
        if (d > out.delta) {
            out.delta = d;
            out.argmax = s;
        }
    } while (next_combination(s, a.cols()));
    return out;
}

WishartCheckReport wishart_pinv_mean_check(Index m, Index k, double sigma2_phi,
                                           std::uint64_t trials, const Rng& rng,
                                           unsigned threads) {
    if (k < 1 || m <= k + 3)
        throw std::domain_error("Wishart check requires M > K + 3 (got M=" + std::to_string(m) +
                                ", K=" + std::to_string(k) + ")");
    if (trials < 1) throw std::invalid_argument("Wishart check: trials must be >= 1");
    if (!(sigma2_phi > 0.0)) throw std::invalid_argument("Wishart check: sigma2_phi must be > 0");

    // Fixed partition count keeps the summation order independent of threads.
    const std::size_t parts = static_cast<std::size_t>(std::min<std::uint64_t>(trials, 16));
    const std::uint64_t per = trials / parts;
    const std::uint64_t extra = trials % parts;
    const double sd = std::sqrt(sigma2_phi);

    std::vector<Eigen::MatrixXd> sums(parts);
    parallel_for(parts, threads, [&](std::size_t p) {
        const std::uint64_t begin = p * per + std::min<std::uint64_t>(p, extra);
        const std::uint64_t end = begin + per + (p < extra ? 1 : 0);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
        Eigen::MatrixXd u(m, k);
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng local = rng.substream(t);
            for (Index i = 0; i < m; ++i)
                for (Index j = 0; j < k; ++j) u(i, j) = sd * local.normal();
            // (U U^T)^+ = V diag(1/s^2) V^T over the nonzero singular values of U.
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(u, Eigen::ComputeThinU);
            const Eigen::VectorXd eig = svd.singularValues().array().square();
            const double floor = 1e-10 * eig(0);
            Eigen::VectorXd inv = Eigen::VectorXd::Zero(eig.size());
            for (Index i = 0; i < eig.size(); ++i)
                if (eig(i) > floor) inv(i) = 1.0 / eig(i);
            const auto& v = svd.matrixU();
            acc.selfadjointView<Eigen::Lower>().rankUpdate(v * inv.cwiseSqrt().asDiagonal(), 1.0);
        }
        sums[p] = std::move(acc);
    });

    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(m, m);
    for (const auto& s : sums) lower += s;
    Eigen::MatrixXd mean = lower.selfadjointView<Eigen::Lower>();
    mean /= static_cast<double>(trials);

    WishartCheckReport r;
    r.m = m;
    r.k = k;
    r.trials = trials;
    r.sigma2_phi = sigma2_phi;
    r.predicted_scale = static_cast<double>(k) /
                        (static_cast<double>(m) * static_cast<double>(m - k - 1) * sigma2_phi);
    r.empirical_diag_mean = mean.diagonal().mean();
    Eigen::MatrixXd off = mean;
    off.diagonal().setZero();
    r.empirical_offdiag_max = off.cwiseAbs().maxCoeff();
    return r;
}

}  // namespace oracle_cs
