#include <doctest.h>

#include "bhmc/errors.hpp"
#include "bhmc/generator.hpp"
#include "bhmc/models.hpp"
#include "oracles.hpp"

using namespace bhmc;

namespace {

BlockGenerator scalar_generator(std::function<Matrix(std::size_t, std::size_t)> block,
                                std::optional<std::size_t> band = 1) {
    return BlockGenerator([](std::size_t) { return std::size_t{1}; }, std::move(block), band);
}

}  // namespace

TEST_CASE("block access outside the Hessenberg band never calls the provider") {
    int calls = 0;
    const auto gen = scalar_generator([&](std::size_t, std::size_t) {
        ++calls;
        return Matrix{{1.0}};
    });
    CHECK(gen.block(3, 1) == Matrix{{0.0}});
    CHECK(gen.block(1, 3) == Matrix{{0.0}});
    CHECK(calls == 0);
    CHECK(gen.block(2, 1) == Matrix{{1.0}});
    CHECK(calls == 1);
}

TEST_CASE("blocks of the wrong shape are rejected") {
    const auto gen = scalar_generator([](std::size_t, std::size_t) { return Matrix(2, 1); });
    CHECK_THROWS_AS(gen.block(0, 0), InvalidBlock);
    const BlockGenerator empty([](std::size_t) { return std::size_t{0}; },
                               [](std::size_t, std::size_t) { return Matrix(); }, 1);
    CHECK_THROWS_AS(empty.phase_count(0), InvalidBlock);
}

TEST_CASE("principal_submatrix of M/M/1") {
    const auto gen = models::make_mm1(1, 2);
    CHECK(principal_submatrix(gen, 0).data == gen.block(0, 0));
    CHECK(principal_submatrix(gen, 1).data == Matrix{{-1, 1}, {2, -3}});
    const auto sub = principal_submatrix(gen, 2);
    CHECK(sub.data == Matrix{{-1, 1, 0}, {2, -3, 1}, {0, 2, -3}});
    CHECK(sub.level_offsets == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("principal_submatrix nests and has nonpositive row sums") {
    for (const auto& gen : {models::make_lattice_rw_2d({}), oracle::banded_two_phase(),
                            models::make_heavy_tail_mg1(3, 1)}) {
        for (std::size_t n = 1; n <= 8; ++n) {
            const auto big = principal_submatrix(gen, n);
            const auto small = principal_submatrix(gen, n - 1);
            for (std::size_t i = 0; i < small.size(); ++i)
                for (std::size_t j = 0; j < small.size(); ++j) CHECK(big.data(i, j) == small.data(i, j));
            const Vector rows = big.data.row_sums();
            for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i] <= 1e-12);
            // Rows of levels whose whole band fits inside the truncation sum to zero.
            if (gen.bandwidth()) {
                const std::size_t b = *gen.bandwidth();
                for (std::size_t k = 0; k + b <= n; ++k)
                    for (std::size_t i = big.level_offsets[k]; i < big.level_offsets[k + 1]; ++i)
                        CHECK(std::abs(rows[i]) < 1e-12);
            }
        }
    }
}

TEST_CASE("lower_extent tracks the block-Hessenberg profile") {
    const auto sub = principal_submatrix(models::make_lattice_rw_2d({}), 2);
    // Levels have 1, 2, 3 phases: columns of level 0 reach the end of level 1,
    // deeper columns reach the last row.
    CHECK(sub.lower_extent() == std::vector<std::size_t>{2, 5, 5, 5, 5, 5});
    for (std::size_t j = 0; j < sub.size(); ++j)
        for (std::size_t i = sub.lower_extent()[j] + 1; i < sub.size(); ++i) CHECK(sub.data(i, j) == 0.0);
}

TEST_CASE("lbcl_augment") {
    const auto gen = models::make_mm1(1, 2);
    CHECK(lbcl_augment(principal_submatrix(gen, 1), Vector{1.0}) == Matrix{{-1, 1}, {2, -2}});
    CHECK(lbcl_augment(principal_submatrix(gen, 0), Vector{1.0}) == Matrix{{0.0}});

    const auto lat = models::make_lattice_rw_2d({});
    const auto sub = principal_submatrix(lat, 4);
    const Matrix q = lbcl_augment(sub, Vector{0.1, 0.2, 0.3, 0.2, 0.2});
    for (double r : q.row_sums()) CHECK(std::abs(r) < 1e-12);

    CHECK_THROWS_AS(lbcl_augment(sub, Vector{0.5, 0.5}), BadDistribution);
    CHECK_THROWS_AS(lbcl_augment(sub, Vector{0.5, 0.5, 0.5, -0.5, 0.0}), BadDistribution);
    CHECK_THROWS_AS(lbcl_augment(sub, Vector{0.1, 0.1, 0.1, 0.1, 0.1}), BadDistribution);
}

TEST_CASE("lbcl_augment leaves an exactly fitting band alone") {
    // A chain that never leaves level 0 has no truncation deficit.
    const auto gen = scalar_generator([](std::size_t k, std::size_t l) {
        if (k == 0 && l == 0) return Matrix{{0.0}};
        if (l + 1 == k) return Matrix{{1.0}};
        if (l == k) return Matrix{{-1.0}};
        return Matrix{{0.0}};
    });
    const auto sub = principal_submatrix(gen, 3);
    CHECK(lbcl_augment(sub, Vector{1.0}) == sub.data);
}

TEST_CASE("validate_proper_q on the catalog") {
    CHECK(validate_proper_q(models::make_mm1(1, 2), 5, 1e-12).ok());
    CHECK(validate_proper_q(models::make_heavy_tail_mg1(3, 1), 10, 1e-12).ok());
    for (const auto& gen : {models::make_mm1(1, 2), models::make_mmc(1, 1, 2), models::make_heavy_tail_mg1(3, 1),
                            models::make_lattice_rw_2d({})}) {
        const auto report = validate_proper_q(gen, 20, 1e-12);
        CHECK(report.ok());
        CHECK(report.levels_checked == 21);
        CHECK(report.warnings.empty());
    }
}

TEST_CASE("validate_proper_q error contract") {
    const auto positive_diag = scalar_generator([](std::size_t k, std::size_t l) {
        if (k == 1 && l == 1) return Matrix{{3.0}};
        if (l == k) return Matrix{{-1.0}};
        return Matrix{{0.5}};
    });
    CHECK_THROWS_AS(validate_proper_q(positive_diag, 3, 1e-12), InvalidBlock);

    const auto negative_rate = scalar_generator([](std::size_t k, std::size_t l) {
        if (l == k) return Matrix{{-1.0}};
        return Matrix{{-0.5}};
    });
    CHECK_THROWS_AS(validate_proper_q(negative_rate, 3, 1e-12), InvalidBlock);

    const auto infinite = scalar_generator([](std::size_t, std::size_t) { return Matrix{{0.0}}; }, std::nullopt);
    CHECK_THROWS_AS(validate_proper_q(infinite, 3, 1e-12), MissingTailInfo);
}

TEST_CASE("validate_proper_q reports leaks and missing down moves") {
    const auto leaky = scalar_generator([](std::size_t k, std::size_t l) {
        if (l == k) return Matrix{{k == 2 ? -5.0 : -3.0}};
        if (l == k + 1) return Matrix{{1.0}};
        return Matrix{{2.0}};
    });
    const auto report = validate_proper_q(leaky, 4, 1e-12);
    CHECK_FALSE(report.ok());
    REQUIRE(report.violations.size() >= 1);
    bool level2 = false;
    for (const auto& v : report.violations)
        if (v.level == 2 && v.kind == Violation::Kind::NonConservative) level2 = v.value == doctest::Approx(-2.0);
    CHECK(level2);

    const auto stuck = scalar_generator([](std::size_t k, std::size_t l) {
        if (l == k) return Matrix{{k == 0 ? -1.0 : -1.0}};
        if (l == k + 1) return Matrix{{1.0}};
        return Matrix{{0.0}};
    });
    const auto r2 = validate_proper_q(stuck, 2, 1e-12);
    CHECK(r2.warnings.size() == 2);
}

TEST_CASE("flatten and split_levels round trip") {
    const LevelVector v{{1.0}, {2.0, 3.0}, {4.0, 5.0, 6.0}};
    const Vector flat = flatten(v);
    CHECK(flat == Vector{1, 2, 3, 4, 5, 6});
    const std::vector<std::size_t> offsets{0, 1, 3, 6};
    CHECK(split_levels(flat, offsets) == v);
    CHECK_THROWS_AS(split_levels(flat, std::vector<std::size_t>{0, 1, 3}), IndexOutOfRange);
}
