#include "bhmc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "bhmc/baseline.hpp"
#include "bhmc/errors.hpp"
#include "bhmc/lfp.hpp"
#include "bhmc/recursions.hpp"

namespace bhmc::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string schedule_text(const Schedule& s) {
    switch (s.kind) {
        case Schedule::Kind::every: return "every";
        case Schedule::Kind::stride: return "stride:" + std::to_string(s.stride);
        case Schedule::Kind::geometric: return "geometric:" + fmt(s.factor);
    }
    return "every";
}

bool is_unit_vector(const Vector& v) {
    std::size_t ones = 0;
    for (double x : v) {
        if (x == 1.0) ++ones;
        else if (x != 0.0) return false;
    }
    return ones == 1;
}

/// Probability vector on level n for reference solves where no pivot is at
/// hand: proportional to the rates entering level n from above.
Vector entry_direction(const BlockGenerator& gen, std::size_t n) {
    Vector a = gen.block(n + 1, n).col_sums();
    double total = sum(a);
    if (!(total > 0.0)) {
        a.assign(a.size(), 1.0);
        total = static_cast<double>(a.size());
    }
    for (double& x : a) x /= total;
    return a;
}

struct BaselineRun {
    Baseline which;
    std::size_t depth = 0;
    LevelVector blocks;
    std::string error;
};

BaselineRun run_baseline(Baseline which, const RunConfig& cfg, const BlockGenerator& gen,
                         const Approximation& approx) {
    BaselineRun r{which, approx.n, {}, {}};
    try {
        switch (which) {
            case Baseline::lbcl_direct: {
                r.depth = static_cast<std::size_t>(
                    std::ceil(cfg.compare_depth_factor * static_cast<double>(approx.n)));
                const Vector alpha = r.depth == approx.n && is_unit_vector(approx.direction)
                                         ? approx.direction
                                         : entry_direction(gen, r.depth);
                r.blocks = lbcl_direct(gen, r.depth, alpha, cfg.solver.exec);
                break;
            }
            case Baseline::bright_taylor:
                r.depth = 3 * approx.n;
                r.blocks = bright_taylor(gen, r.depth).blocks;
                break;
            case Baseline::brute_force: {
                const Vector alpha =
                    is_unit_vector(approx.direction) ? approx.direction : entry_direction(gen, approx.n);
                const PrincipalSubmatrix sub = principal_submatrix(gen, approx.n);
                r.blocks = split_levels(brute_force_stationary(lbcl_augment(sub, alpha)), sub.level_offsets);
                break;
            }
        }
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

double weighted_tv(const LevelVector& a, const LevelVector& b, bool level_weighted) {
    if (!level_weighted) return tv_distance(a, b);
    const LevelVector& longer = a.size() >= b.size() ? a : b;
    Vector f;
    for (std::size_t k = 0; k < longer.size(); ++k) f.insert(f.end(), longer[k].size(), 1.0 + static_cast<double>(k));
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
        if (a[k].size() != b[k].size()) throw PhaseMismatch("level blocks differ in size", k);
    return tv_distance(flatten(a), flatten(b), f);
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

RunConfig load(const std::filesystem::path& path, const Overrides& o) {
    RunConfig cfg = load_config(path);
    apply_overrides(cfg, o);
    return cfg;
}

std::string phase_set(const std::vector<std::size_t>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + std::to_string(s[i] + 1);
    return out + "}";
}

void print_vector(std::ostream& out, const Vector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << fmt(v[i]);
    out << '\n';
}

}  // namespace

Approximation solve(const RunConfig& cfg, const BlockGenerator& gen) {
    switch (cfg.solver.variant) {
        case Variant::mip_new: return solve_mip(gen, cfg.solver);
        case Variant::mip_drift:
            if (!cfg.drift) throw ConfigError("variant mip_drift needs solver.drift");
            return solve_mip_drift(gen, build_certificate(*cfg.drift, gen), cfg.solver);
        case Variant::fixed_direction:
            if (!cfg.direction) throw ConfigError("variant fixed_direction needs solver.varpi");
            return solve_fixed_direction(gen, *cfg.direction, cfg.solver);
    }
    throw ConfigError("unknown variant");
}

void write_distribution(std::ostream& out, const LevelVector& blocks) {
    out << "level,phase,probability\n";
    for (std::size_t k = 0; k < blocks.size(); ++k)
        for (std::size_t i = 0; i < blocks[k].size(); ++i)
            out << k << ',' << i + 1 << ',' << fmt(blocks[k][i]) << '\n';
}

json run(const RunConfig& cfg, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    const BlockGenerator gen = build_generator(cfg);
    const Approximation approx = solve(cfg, gen);

    std::vector<BaselineRun> baselines;
    for (Baseline b : cfg.compare) baselines.push_back(run_baseline(b, cfg, gen, approx));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json report;
    report["config"] = cfg.source;
    report["solver"] = {
        {"variant", to_string(cfg.solver.variant)},
        {"epsilon", cfg.solver.epsilon},
        {"k_set", cfg.solver.K_set},
        {"max_level", cfg.solver.max_level},
        {"schedule", schedule_text(cfg.solver.schedule)},
    };
    double mass = 0.0;
    for (const auto& b : approx.blocks) mass += sum(b);
    report["result"] = {
        {"model", gen.name()},
        {"n", approx.n},
        {"converged", approx.converged},
        {"residual", approx.residual},
        {"pivot", approx.pivot ? json(*approx.pivot + 1) : json(nullptr)},
        {"probability_sum", mass},
    };
    json trace = json::array();
    for (const auto& t : approx.pivot_trace) {
        json e = {{"level", t.level}, {"residual", t.residual}};
        if (t.pivot) e["pivot"] = *t.pivot + 1;
        if (cfg.solver.variant == Variant::mip_new) e["ratio"] = t.ratio;
        if (t.step_tv) e["step_tv"] = *t.step_tv;
        trace.push_back(std::move(e));
    }
    report["trace"] = std::move(trace);

    if (!baselines.empty()) {
        json base = json::array();
        std::vector<std::pair<std::string, const LevelVector*>> named{{"solver", &approx.blocks}};
        for (const auto& b : baselines) {
            json e = {{"name", to_string(b.which)}, {"depth", b.depth}};
            if (!b.error.empty()) e["error"] = b.error;
            else named.emplace_back(to_string(b.which), &b.blocks);
            base.push_back(std::move(e));
        }
        json pairs = json::array();
        for (std::size_t i = 0; i < named.size(); ++i)
            for (std::size_t j = i + 1; j < named.size(); ++j)
                pairs.push_back({{"a", named[i].first},
                                 {"b", named[j].first},
                                 {"tv", weighted_tv(*named[i].second, *named[j].second, cfg.level_weighted_tv)}});
        report["baselines"] = std::move(base);
        report["comparisons"] = {{"weight", cfg.level_weighted_tv ? "level" : "unit"}, {"pairs", std::move(pairs)}};
    }
    report["wall_time_seconds"] = seconds;

    if (cfg.distribution_path) {
        std::ofstream f(*cfg.distribution_path, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + cfg.distribution_path->string() + "'");
        write_distribution(f, approx.blocks);
    }
    if (cfg.report_path) {
        std::ofstream f(*cfg.report_path, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + cfg.report_path->string() + "'");
        f << report.dump(2) << '\n';
    }

    log << gen.name() << ": " << to_string(cfg.solver.variant) << " stopped at level " << approx.n
        << ", residual " << fmt(approx.residual) << (approx.converged ? ", converged" : ", NOT converged")
        << '\n';
    for (const auto& b : baselines)
        if (!b.error.empty()) log << "  baseline " << to_string(b.which) << " skipped: " << b.error << '\n';
    if (report.contains("comparisons"))
        for (const auto& p : report["comparisons"]["pairs"])
            log << "  tv(" << p["a"].get<std::string>() << ", " << p["b"].get<std::string>()
                << ") = " << fmt(p["tv"].get<double>()) << '\n';
    return report;
}

void inspect(const RunConfig& cfg, std::size_t level, std::ostream& out) {
    if (level > cfg.solver.max_level)
        throw ConfigError("level " + std::to_string(level) + " exceeds max_level " +
                          std::to_string(cfg.solver.max_level));
    const BlockGenerator gen = build_generator(cfg);
    RecursionState state = init_state(gen, cfg.solver.K_set, cfg.solver.exec);
    while (state.n < level) advance(state, gen);

    out << "level " << level << " (" << state.phases() << " phases, K = {";
    for (std::size_t i = 0; i < state.K_set.size(); ++i) out << (i ? ", " : "") << state.K_set[i];
    out << "})\n";
    out << "U_n* =\n";
    for (std::size_t i = 0; i < state.U_star.rows(); ++i) {
        out << "  ";
        print_vector(out, Vector(state.U_star.row(i).begin(), state.U_star.row(i).end()));
    }
    out << "u_n* = ";
    print_vector(out, state.u_star);
    if (!state.u_star_K) {
        out << "u_n,K* = n/a (level below max K = " << state.K() << ")\n";
        return;
    }
    out << "u_n,K* = ";
    print_vector(out, *state.u_star_K);

    const auto I = incoming_support(gen, level);
    out << "I_n+ = " << phase_set(I) << '\n';
    std::optional<std::vector<std::size_t>> O;
    if (level >= 1) {
        O = outgoing_support(state, gen);
        out << "O_n+ = " << phase_set(*O) << '\n';
    } else {
        out << "O_n+ = undefined at level 0\n";
    }
    const PivotSelection sel = select_pivot(state, I, O);
    out << "J_n* = " << phase_set(sel.J_star) << '\n';
    out << "pivot = " << sel.pivot + 1 << '\n';
    out << "ratio = " << fmt(sel.ratio) << '\n';
    out << "residual = " << fmt(residual_q_norm(state, sel.pivot)) << '\n';
}

int run_command(const std::filesystem::path& config, const Overrides& o, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = load(config, o);
        const json report = run(cfg, out);
        return report["result"]["converged"].get<bool>() ? kExitConverged : kExitNotConverged;
    });
}

int inspect_command(const std::filesystem::path& config, const Overrides& o, std::size_t level,
                    std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        inspect(load(config, o), level, out);
        return kExitConverged;
    });
}

int validate_command(const std::filesystem::path& config, const Overrides& o, std::ostream& out,
                     std::ostream& err) {
    return guarded(err, [&] {
        const RunConfig cfg = load(config, o);
        const BlockGenerator gen = build_generator(cfg);
        out << "configuration OK\n";
        ValidationReport report;
        try {
            report = validate_proper_q(gen, cfg.validate_levels, cfg.validate_tol);
        } catch (const MissingTailInfo& e) {
            out << "warning: conservativity not checked: " << e.what() << '\n';
            return kExitConverged;
        }
        out << gen.name() << ": levels 0.." << cfg.validate_levels << " checked at tol "
            << fmt(cfg.validate_tol) << '\n';
        for (const auto& w : report.warnings) out << "warning: " << w << '\n';
        for (const auto& v : report.violations)
            out << (v.kind == Violation::Kind::Unstable ? "unstable" : "non-conservative") << " state (level "
                << v.level << ", phase " << v.phase + 1 << "): " << fmt(v.value) << '\n';
        out << (report.ok() ? "proper Q-matrix\n" : "NOT a proper Q-matrix\n");
        return report.ok() ? kExitConverged : kExitNotConverged;
    });
}

}  // namespace bhmc::cli
