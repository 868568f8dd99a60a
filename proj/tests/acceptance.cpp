// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bhmc/baseline.hpp"
#include "bhmc/errors.hpp"
#include "bhmc/lfp.hpp"
#include "bhmc/models.hpp"
#include "bhmc/recursions.hpp"
#include "bhmc/solver.hpp"
#include "oracles.hpp"

using namespace bhmc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolverOptions options(double epsilon, std::size_t max_level = 10000) {
    SolverOptions o;
    o.epsilon = epsilon;
    o.max_level = max_level;
    return o;
}

/// Approximation stopped at exactly level n.
Approximation at_level(const BlockGenerator& gen, std::size_t n) { return solve_mip(gen, options(1e-300, n)); }

struct Named {
    std::string name;
    BlockGenerator gen;
};

std::vector<Named> catalog() {
    return {{"mm1", models::make_mm1(1, 2)},
            {"mmc", models::make_mmc(3, 2, 2)},
            {"heavy_tail_mg1", models::make_heavy_tail_mg1(3, 1)},
            {"lattice_rw_2d", models::make_lattice_rw_2d({})}};
}

Outcome geometric_exactness() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto gen = models::make_mm1(1, 2);
    const auto a = solve_mip(gen, options(1e-10));
    const double elapsed = seconds_since(t0);
    o.require(a.converged, "stop at finite n");

    LevelVector truth(31), approx(31);
    for (std::size_t k = 0; k <= 30; ++k) {
        truth[k] = {oracle::mm1_pi(1, 2, k)};
        approx[k] = {k < a.blocks.size() ? a.blocks[k][0] : 0.0};
    }
    const double tv = tv_distance(approx, truth);
    o.require(tv <= 1e-9, "TV over levels 0..30 <= 1e-9");
    o.note("n = " + std::to_string(a.n) + ", TV = " + num(tv));

    RecursionState s = init_state(gen, {0}, kernels::Exec::serial);
    double worst = 0.0;
    for (std::size_t n = 0; n <= 30; ++n) {
        if (n) advance(s, gen);
        const double expected = std::ldexp(1.0, static_cast<int>(n) + 1) - 1.0;
        worst = std::max(worst, std::abs(s.u_star[0] - expected) / expected);
        if (n >= 1) {
            const double r = residual_q_norm(s, 0);
            worst = std::max(worst, std::abs(r - 1.0 / (3.0 * expected)) * 3.0 * expected);
        }
    }
    o.require(worst <= 1e-12, "u_n* = 2^{n+1}-1 and residual = 1/(3 u_n*)");

    const auto two = at_level(gen, 2);
    const double w = tv_distance(two.blocks, LevelVector{{4.0 / 7}, {2.0 / 7}, {1.0 / 7}});
    o.require(w <= 1e-15, "level-2 blocks (4/7, 2/7, 1/7)");
    o.require(elapsed < 1.0, "runtime < 1 s");
    o.note("runtime " + num(elapsed) + " s");
    return o;
}

Outcome residual_identity() {
    Outcome o;
    double worst = 0.0, worst_abs = 0.0;
    std::size_t checkpoints = 0;
    for (const auto& m : catalog()) {
        const double eps = m.name == "heavy_tail_mg1" ? 1e-4 : 1e-8;
        const auto a = solve_mip(m.gen, options(eps));
        o.require(a.converged && a.residual < eps, m.name + " residual at stop < epsilon");
        RecursionState s = init_state(m.gen, {0}, kernels::Exec::serial);
        for (std::size_t n = 0; n <= a.n; ++n) {
            if (n) advance(s, m.gen);
            const auto sel = select_pivot(s, m.gen);
            const double r = residual_q_norm(s, sel.pivot);
            const double direct = residual_q_norm_direct(m.gen, assemble_blocks(s, sel.pivot));
            o.require(r > 0.0 && r <= 1.0, m.name + " residual in (0, 1] at level " + std::to_string(n));
            worst = std::max(worst, std::abs(r - direct) / r);
            worst_abs = std::max(worst_abs, std::abs(r - direct));
            ++checkpoints;
        }
    }
    o.require(worst <= 1e-12, "relative gap <= 1e-12");
    o.note(std::to_string(checkpoints) + " checkpoints, max relative gap " + num(worst) +
           ", max absolute gap " + num(worst_abs));
    return o;
}

Outcome oracle_triangle() {
    Outcome o;
    std::vector<Named> models = catalog();
    models.push_back({"two_phase_ld_qbd", oracle::mmpp_queue()});
    double worst = 0.0;
    for (const auto& m : models) {
        const double eps = m.name == "heavy_tail_mg1" ? 1e-4 : 1e-8;
        const auto a = solve_mip(m.gen, options(eps));
        if (m.name == "heavy_tail_mg1") o.require(a.n <= 60, "heavy-tail assembly depth <= 60");
        const LevelVector direct = lbcl_direct(m.gen, a.n, a.direction);
        const PrincipalSubmatrix sub = principal_submatrix(m.gen, a.n);
        const LevelVector brute =
            split_levels(brute_force_stationary(lbcl_augment(sub, a.direction)), sub.level_offsets);
        const double d = std::max({tv_distance(a.blocks, direct), tv_distance(a.blocks, brute),
                                   tv_distance(direct, brute)});
        o.require(d <= 1e-10, m.name + " pairwise TV <= 1e-10");
        o.note(m.name + " n=" + std::to_string(a.n) + " " + num(d));
        worst = std::max(worst, d);
    }
    return o;
}

Outcome cross_method() {
    Outcome o;
    for (const auto& [name, gen] : std::vector<Named>{{"mm1", models::make_mm1(1, 2)},
                                                      {"mmc", models::make_mmc(3, 2, 2)}}) {
        const auto a = solve_mip(gen, options(1e-10));
        const auto bt = bright_taylor(gen, 3 * a.n);
        const double d = tv_distance(a.blocks, bt.blocks);
        o.require(d <= 1e-8, name + " TV <= 1e-8");
        o.note(name + " n=" + std::to_string(a.n) + " TV " + num(d));
    }
    const auto mm1 = models::make_mm1(1, 2);
    const auto bt = bright_taylor(mm1, 3 * solve_mip(mm1, options(1e-10)).n);
    const double r1 = bt.chain.R.front()(0, 0);
    o.require(std::abs(r1 - 0.5) <= 1e-10, "R = 0.5 (minimal root, not 1)");
    o.note("R_1 = " + num(r1));
    return o;
}

Outcome heavy_tail() {
    Outcome o;
    const auto gen = models::make_heavy_tail_mg1(3, 1);
    const auto a = solve_mip(gen, options(1e-4));
    o.require(a.converged, "converges at epsilon 1e-4");
    const std::size_t deep = 4 * a.n;
    const LevelVector ref = lbcl_direct(gen, deep, a.direction);
    o.note("n = " + std::to_string(a.n) + ", reference depth " + std::to_string(deep));
    bool any = false;
    for (std::size_t k = 20; 2 * k <= deep; k *= 2) {
        const double kk = static_cast<double>(k);
        const double ratio = (4 * kk * kk * ref[2 * k][0]) / (kk * kk * ref[k][0]);
        o.require(std::abs(ratio - 1.0) <= 0.1, "tail ratio at k = " + std::to_string(k));
        o.note("k=" + std::to_string(k) + " ratio " + num(ratio));
        any = true;
    }
    o.require(any, "at least one k >= 20 pair");
    return o;
}

Outcome lfp_optimality() {
    Outcome o;
    std::mt19937_64 rng(20261015);
    const auto models = catalog();
    double worst = -1.0;
    for (int c = 0; c < 10; ++c) {
        const auto& m = models[static_cast<std::size_t>(c) % models.size()];
        const std::size_t level = 1 + std::uniform_int_distribution<std::size_t>(0, 29)(rng);
        RecursionState s = init_state(m.gen, {0}, kernels::Exec::serial);
        while (s.n < level) advance(s, m.gen);
        const auto sel = select_pivot(s, m.gen);
        for (int t = 0; t < 100; ++t) {
            const Vector alpha = oracle::random_simplex(rng, s.phases(), sel.I_plus);
            worst = std::max(worst, lfp_objective(s, alpha) - sel.ratio);
        }
    }
    o.require(worst <= 1e-12, "r(alpha) <= r(alpha*) + 1e-12");
    o.note("1000 draws, max excess " + num(worst));
    return o;
}

Outcome legacy_path() {
    Outcome o;
    const double eps = 1e-6;
    const auto gen = models::make_mm1(1, 2);
    DriftCertificate cert;
    cert.v = [](std::size_t l) { return Vector{static_cast<double>(l + 1)}; };
    cert.b = 2.0;
    cert.C = {{0, 0}};
    const auto drift = solve_mip_drift(gen, cert, options(eps));
    const auto mip = solve_mip(gen, options(eps));
    const double d = tv_distance(drift.blocks, mip.blocks);
    o.require(d <= 2 * eps, "TV(drift, mip) <= 2 epsilon");
    o.note("drift n=" + std::to_string(drift.n) + ", mip n=" + std::to_string(mip.n) + ", TV " + num(d));

    bool refused = false;
    try {
        solve_mip_drift(models::make_heavy_tail_mg1(3, 1), cert, options(eps));
    } catch (const UnsupportedInfiniteBand&) {
        refused = true;
    }
    o.require(refused, "heavy tail refused with UnsupportedInfiniteBand");
    return o;
}

Outcome sojourn_semantics() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto gen = models::make_mm1(1, 2);
    RecursionState s = init_state(gen, {0}, kernels::Exec::serial);
    advance(s, gen);
    advance(s, gen);
    const double recursion = sojourn_matrix(s, 0)(0, 0);

    // Time spent in level 0 from level 2 until the chain first reaches level 3.
    std::mt19937_64 rng(42);
    std::exponential_distribution<double> hold_zero(1.0), hold_busy(3.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int paths = 100000;
    double total = 0.0, total_sq = 0.0;
    for (int p = 0; p < paths; ++p) {
        int level = 2;
        double in_zero = 0.0;
        while (level < 3) {
            if (level == 0) {
                in_zero += hold_zero(rng);
                level = 1;
            } else {
                hold_busy(rng);
                level += coin(rng) < 1.0 / 3.0 ? 1 : -1;
            }
        }
        total += in_zero;
        total_sq += in_zero * in_zero;
    }
    const double mean = total / paths;
    const double se = std::sqrt((total_sq / paths - mean * mean) / (paths - 1));
    const double elapsed = seconds_since(t0);
    o.require(std::abs(recursion - 4.0) <= 1e-12, "recursion value 4");
    o.require(std::abs(mean - recursion) <= 3 * se, "within 3 standard errors");
    o.require(elapsed < 30.0, "runtime < 30 s");
    o.note("recursion " + num(recursion) + ", estimate " + num(mean) + " +/- " + num(se) + ", " + num(elapsed) + " s");
    return o;
}

Outcome fixed_direction() {
    Outcome o;
    const double eps = 1e-6;
    const auto gen = oracle::product_form_qbd();
    const auto fixed = solve_fixed_direction(gen, {{2.0 / 3, 1.0 / 3}, 0}, options(eps));
    o.require(fixed.converged, "fixed-direction path converges");
    const auto mip = at_level(gen, fixed.n);
    const double d = tv_distance(fixed.blocks, mip.blocks);
    o.require(d <= 2 * eps, "TV <= 2 epsilon at matched depth");
    o.note("n = " + std::to_string(fixed.n) + ", TV " + num(d));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"geometric exactness (M/M/1)", geometric_exactness},
        {"residual identity", residual_identity},
        {"oracle triangle", oracle_triangle},
        {"cross-method (Bright-Taylor)", cross_method},
        {"heavy-tail regime", heavy_tail},
        {"LFP optimality", lfp_optimality},
        {"legacy drift path", legacy_path},
        {"sojourn semantics (Monte Carlo)", sojourn_semantics},
        {"fixed-direction path", fixed_direction},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("threw: ") + e.what();
        }
        failures += r.pass ? 0 : 1;
        std::printf("criterion %zu: %s  %s: %s\n", i + 1, r.pass ? "PASS" : "FAIL", criteria[i].first,
                    r.detail.c_str());
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
