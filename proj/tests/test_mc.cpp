#include <doctest.h>

#include <cmath>

#include "oracle_cs/mc.hpp"

using namespace oracle_cs;

namespace {

ExperimentConfig small_config(NoiseModel noise, std::uint64_t trials = 200) {
    ExperimentConfig c;
    c.n = 128;
    c.k = 4;
    c.m = 32;
    c.sigma2_phi = 1.0 / 32;
    c.noise = std::move(noise);
    c.trials = trials;
    c.seed = 2718;
    return c;
}

}  // namespace

TEST_CASE("config validation") {
    ExperimentConfig c = small_config(NoiseModel::white(32, 1e-3));
    CHECK_NOTHROW(c.validate(true));

    ExperimentConfig bad = c;
    bad.m = 200;
    bad.noise = NoiseModel::white(200, 1e-3);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = c;
    bad.noise = NoiseModel::white(31, 1e-3);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = c;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = c;
    bad.k = 29;
    CHECK_NOTHROW(bad.validate(false));
    CHECK_THROWS_AS(bad.validate(true), std::invalid_argument);
}

TEST_CASE("run_trial") {
    SUBCASE("noiseless recovery is exact") {
        const ExperimentConfig c = small_config(NoiseModel::white(32, 0.0));
        const auto basis = shared_dct_basis(c.n);
        for (std::uint64_t t = 0; t < 20; ++t) {
            // The signal is the first thing drawn from the trial stream.
            Rng rng(c.seed, t);
            const SparseSignal s = gen_sparse_signal(c.n, c.k, c.sigma2_theta, *basis, rng);
            CHECK(run_trial(c, t) < 1e-18 * s.x.squaredNorm());
        }
    }

    SUBCASE("same stream, same bits") {
        for (const NoiseModel& noise :
             {NoiseModel::white(32, 1e-2), NoiseModel::ar1(32, 1e-2, 0.9), NoiseModel::quantizer(0.05)}) {
            const ExperimentConfig c = small_config(noise);
            CHECK(run_trial(c, 5) == run_trial(c, 5));
            CHECK(run_trial(c, 5) != run_trial(c, 6));
        }
    }

    SUBCASE("error scales linearly with the noise variance") {
        // x_hat - x = U_S^+ z, so with shared streams the error is proportional to sigma2_z.
        const ExperimentConfig a = small_config(NoiseModel::white(32, 1e-4));
        const ExperimentConfig b = small_config(NoiseModel::white(32, 1e-2));
        for (std::uint64_t t = 0; t < 5; ++t)
            CHECK(run_trial(b, t) == doctest::Approx(100.0 * run_trial(a, t)).epsilon(1e-9));
    }

    SUBCASE("consecutive trials are uncorrelated") {
        const ExperimentConfig c = small_config(NoiseModel::white(32, 1e-2));
        const int trials = 2000;
        std::vector<double> e(trials);
        for (int t = 0; t < trials; ++t) e[t] = run_trial(c, static_cast<std::uint64_t>(t));
        double mean = 0.0;
        for (double v : e) mean += v;
        mean /= trials;
        double num = 0.0, den = 0.0;
        for (int t = 0; t < trials; ++t) {
            den += (e[t] - mean) * (e[t] - mean);
            if (t + 1 < trials) num += (e[t] - mean) * (e[t + 1] - mean);
        }
        CHECK(std::abs(num / den) < 3.0 / std::sqrt(double(trials)));
    }
}

TEST_CASE("with_parameter") {
    CHECK(std::get<WhiteNoise>(with_parameter(NoiseModel::white(8, 1.0), SweepParameter::sigma2_z, 0.5).params()).sigma2_z == 0.5);
    const auto ar = std::get<Ar1Noise>(with_parameter(NoiseModel::ar1(8, 1.0, 0.5), SweepParameter::rho, 0.9).params());
    CHECK(ar.rho == 0.9);
    CHECK(ar.sigma2_z == 1.0);
    CHECK(std::get<UniformQuantizer>(with_parameter(NoiseModel::quantizer(1.0), SweepParameter::delta, 0.2).params()).delta == 0.2);

    CHECK_THROWS_AS(with_parameter(NoiseModel::white(8, 1.0), SweepParameter::rho, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(with_parameter(NoiseModel::white(8, 1.0), SweepParameter::delta, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(with_parameter(NoiseModel::quantizer(1.0), SweepParameter::sigma2_z, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(with_parameter(NoiseModel::ar1(8, 1.0, 0.5), SweepParameter::delta, 0.5), std::invalid_argument);
}

TEST_CASE("run_sweep aggregation") {
    const ExperimentConfig c = small_config(NoiseModel::white(32, 1.0), 50);
    const std::vector<double> grid{1e-4, 1e-2};
    const SweepResult r = run_sweep(c, SweepParameter::sigma2_z, grid, {0.0, 0.5});

    REQUIRE(r.empirical_mse.size() == 2);
    REQUIRE(r.bounds.size() == 2);
    REQUIRE(r.bounds[0].size() == 2);
    CHECK(r.bounds[1][1].delta_k == 0.5);

    for (std::size_t p = 0; p < grid.size(); ++p) {
        ExperimentConfig pc = c;
        pc.noise = NoiseModel::white(32, grid[p]);
        std::vector<double> e;
        for (std::uint64_t t = 0; t < c.trials; ++t) e.push_back(run_trial(pc, p * c.trials + t));
        double mean = 0.0;
        for (double v : e) mean += v;
        mean /= double(e.size());
        double ss = 0.0;
        for (double v : e) ss += (v - mean) * (v - mean);
        const double se = std::sqrt(ss / double(e.size() - 1) / double(e.size()));
        CHECK(r.empirical_mse[p] == doctest::Approx(mean).epsilon(1e-13));
        CHECK(r.std_error[p] == doctest::Approx(se).epsilon(1e-10));
        CHECK(r.predicted_mse[p] == closed_form_mse_white(4, 32, 1.0 / 32, grid[p]));
        CHECK(r.empirical_mse[p] > 0.0);
    }

    SUBCASE("single trial has no standard error") {
        ExperimentConfig one = c;
        one.trials = 1;
        CHECK(std::isnan(run_sweep(one, SweepParameter::sigma2_z, {1e-3}, {}).std_error[0]));
    }
}

TEST_CASE("run_sweep is independent of the worker count") {
    const ExperimentConfig c = small_config(NoiseModel::ar1(32, 1e-3, 0.9), 40);
    const SweepResult a = run_sweep(c, SweepParameter::rho, {0.5, 0.9, 0.99}, {0.0}, 1);
    const SweepResult b = run_sweep(c, SweepParameter::rho, {0.5, 0.9, 0.99}, {0.0}, 5);
    CHECK(a.empirical_mse == b.empirical_mse);
    CHECK(a.std_error == b.std_error);
    CHECK(a.predicted_mse == b.predicted_mse);
    // Covariance blindness of the prediction along a rho sweep.
    CHECK(a.predicted_mse[0] == a.predicted_mse[2]);
    CHECK(a.bounds[2][0].rip_upper_corr > a.bounds[0][0].rip_upper_corr);
}

TEST_CASE("run_sweep errors") {
    const ExperimentConfig c = small_config(NoiseModel::white(32, 1e-3), 5);
    CHECK_THROWS_AS(run_sweep(c, SweepParameter::sigma2_z, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(c, SweepParameter::delta, {0.1}, {}), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(c, SweepParameter::sigma2_z, {1e-3}, {1.0}), std::domain_error);
}

TEST_CASE("small-scale agreement with the closed form") {
    const ExperimentConfig c = small_config(NoiseModel::white(32, 1e-2), 2000);
    const SweepResult r = run_sweep(c, SweepParameter::sigma2_z, {1e-2}, {});
    CHECK(std::abs(r.empirical_mse[0] - r.predicted_mse[0]) < 4.0 * r.std_error[0]);
}
