#include <doctest.h>

#include <cmath>

#include "bhmc/baseline.hpp"
#include "bhmc/errors.hpp"
#include "bhmc/models.hpp"
#include "bhmc/solver.hpp"
#include "oracles.hpp"

using namespace bhmc;

TEST_CASE("lbcl_direct hand values") {
    const auto gen = models::make_mm1(1, 2);
    const auto pi = lbcl_direct(gen, 2, Vector{1.0});
    CHECK(pi[0][0] == doctest::Approx(4.0 / 7));
    CHECK(pi[1][0] == doctest::Approx(2.0 / 7));
    CHECK(pi[2][0] == doctest::Approx(1.0 / 7));
    CHECK(lbcl_direct(gen, 0, Vector{1.0}) == LevelVector{{1.0}});
    CHECK_THROWS_AS(lbcl_direct(gen, 2, Vector{0.5}), BadDistribution);
}

TEST_CASE("lbcl_direct matches GTH on the augmented generator") {
    std::mt19937_64 rng(11);
    for (const auto& gen : {oracle::mmpp_queue(), models::make_lattice_rw_2d({}), oracle::banded_two_phase(),
                            models::make_heavy_tail_mg1(3, 1)}) {
        for (std::size_t n : {1u, 5u, 12u}) {
            const auto sub = principal_submatrix(gen, n);
            std::vector<std::size_t> all(gen.phase_count(n));
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            const Vector alpha = oracle::random_simplex(rng, all.size(), all);
            const Vector direct = flatten(lbcl_direct(gen, n, alpha));
            const Vector gth = oracle::gth_stationary(lbcl_augment(sub, alpha));
            const Vector brute = brute_force_stationary(lbcl_augment(sub, alpha));
            CHECK(oracle::tv(direct, gth) < 1e-12);
            CHECK(oracle::tv(brute, gth) < 1e-12);
        }
    }
}

TEST_CASE("brute force stationary") {
    const Vector x = brute_force_stationary(Matrix{{-1, 1}, {2, -2}});
    CHECK(x[0] == doctest::Approx(2.0 / 3));
    CHECK(x[1] == doctest::Approx(1.0 / 3));
    CHECK(brute_force_stationary(Matrix{{0.0}}) == Vector{1.0});
    // Two closed classes: reducible.
    CHECK_THROWS_AS(brute_force_stationary(Matrix{{0, 0}, {0, 0}}), SingularBlock);
    CHECK_THROWS_AS(brute_force_stationary(Matrix(2, 3)), InvalidBlock);
}

TEST_CASE("Bright-Taylor on M/M/1") {
    const auto gen = models::make_mm1(1, 2);
    const auto bt = bright_taylor(gen, 60);
    REQUIRE(bt.chain.R.size() == 60);
    CHECK(bt.chain.K_star == 60);
    // Minimal root of 2R^2 - 3R + 1 = 0 is 1/2; the other root is 1.
    CHECK(std::abs(bt.chain.R[0](0, 0) - 0.5) < 1e-10);
    for (const auto& R : bt.chain.R) CHECK(R(0, 0) >= 0.0);
    for (std::size_t k = 0; k <= 20; ++k) CHECK(std::abs(bt.blocks[k][0] - oracle::mm1_pi(1, 2, k)) < 1e-8);
}

TEST_CASE("Bright-Taylor on level-dependent QBDs") {
    const auto mmc = models::make_mmc(1, 1, 2);
    const auto bt = bright_taylor(mmc, 60);
    const Vector erlang = oracle::mmc_pi(1, 1, 2, 60);
    CHECK(oracle::tv(flatten(bt.blocks), erlang) < 1e-12);

    const auto gen = oracle::mmpp_queue();
    const auto b2 = bright_taylor(gen, 80);
    const auto ref = lbcl_direct(gen, 80, Vector{0.5, 0.5});
    CHECK(tv_distance(b2.blocks, ref) < 1e-10);
    for (const auto& R : b2.chain.R)
        for (std::size_t i = 0; i < R.rows(); ++i)
            for (std::size_t j = 0; j < R.cols(); ++j) CHECK(R(i, j) >= 0.0);
}

TEST_CASE("Bright-Taylor refuses non-QBD generators") {
    CHECK_THROWS_AS(bright_taylor(models::make_heavy_tail_mg1(3, 1), 10), NotQbd);
    CHECK_THROWS_AS(bright_taylor(oracle::banded_two_phase(), 10), NotQbd);
}

TEST_CASE("oracle triangle at matched depth and pivot") {
    for (const auto& gen : {models::make_mm1(1, 2), models::make_mmc(1, 1, 2), oracle::mmpp_queue(),
                            models::make_lattice_rw_2d({}), models::make_heavy_tail_mg1(3, 1)}) {
        SolverOptions o;
        o.epsilon = 1e-300;
        for (std::size_t n : {2u, 7u, 15u}) {
            o.max_level = n;
            const auto a = solve_mip(gen, o);
            const auto d = lbcl_direct(gen, n, a.direction);
            const auto sub = principal_submatrix(gen, n);
            const Vector b = brute_force_stationary(lbcl_augment(sub, a.direction));
            CHECK(tv_distance(a.blocks, d) <= 1e-10);
            CHECK(tv_distance(flatten(a.blocks), b) <= 1e-10);
            CHECK(tv_distance(flatten(d), b) <= 1e-10);
        }
    }
}

TEST_CASE("deep truncation reference improves with depth") {
    for (const auto& gen : {models::make_mm1(1, 2), oracle::mmpp_queue(), models::make_lattice_rw_2d({})}) {
        SolverOptions o;
        o.epsilon = 1e-300;
        o.max_level = 60;
        const auto deep = solve_mip(gen, o);
        const auto ref = lbcl_direct(gen, 60, deep.direction);
        double previous = 2.0;
        for (std::size_t n = 5; n <= 15; ++n) {
            o.max_level = n;
            const double err = tv_distance(solve_mip(gen, o).blocks, ref);
            CHECK(err < previous);
            previous = err;
        }
    }
}
