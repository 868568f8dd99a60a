#include "bhmc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "bhmc/errors.hpp"

namespace bhmc {

const char* to_string(Variant v) noexcept {
    switch (v) {
        case Variant::mip_new: return "mip_new";
        case Variant::mip_drift: return "mip_drift";
        case Variant::fixed_direction: return "fixed_direction";
    }
    return "unknown";
}

std::size_t Schedule::next(std::size_t current) const {
    switch (kind) {
        case Kind::every: return current + 1;
        case Kind::stride: return current + stride;
        case Kind::geometric: {
            const auto scaled = static_cast<std::size_t>(std::ceil(factor * static_cast<double>(current)));
            return std::max(current + 1, scaled);
        }
    }
    return current + 1;
}

void validate_options(const SolverOptions& opts) {
    if (!(opts.epsilon > 0.0 && opts.epsilon < 1.0))
        throw ConfigError("epsilon must lie in (0, 1), got " + std::to_string(opts.epsilon));
    if (opts.K_set.empty()) throw ConfigError("K set must be nonempty");
    if (opts.schedule.kind == Schedule::Kind::stride && opts.schedule.stride == 0)
        throw ConfigError("schedule stride must be >= 1");
    if (opts.schedule.kind == Schedule::Kind::geometric && !(opts.schedule.factor > 1.0))
        throw ConfigError("geometric schedule factor must exceed 1");
    const std::size_t K = *std::max_element(opts.K_set.begin(), opts.K_set.end());
    if (opts.max_level < K) throw ConfigError("max_level must be >= max K");
}

namespace {

class TraceBuffer {
public:
    explicit TraceBuffer(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}
    void push(TraceEntry e) {
        if (entries_.size() == capacity_) entries_.pop_front();
        entries_.push_back(std::move(e));
    }
    std::vector<TraceEntry> take() { return {entries_.begin(), entries_.end()}; }

private:
    std::size_t capacity_;
    std::deque<TraceEntry> entries_;
};

/// Walks levels 0..max_level, calling `at_checkpoint(state)` on scheduled
/// levels and on max_level; stops as soon as the callback returns true.
template <typename BeforeAdvance, typename AtCheckpoint>
bool run_levels(const BlockGenerator& gen, const SolverOptions& opts, RecursionState& state,
                BeforeAdvance&& before_advance, AtCheckpoint&& at_checkpoint) {
    std::size_t next_cp = opts.schedule.first(state.K());
    for (;;) {
        const std::size_t n = state.n;
        const bool scheduled = n == next_cp;
        if (scheduled) next_cp = opts.schedule.next(n);
        if (scheduled || n == opts.max_level) {
            if (at_checkpoint(state)) return true;
        }
        if (n >= opts.max_level) return false;
        before_advance(state, n + 1 == next_cp || n + 1 == opts.max_level);
        advance(state, gen);
    }
}

}  // namespace

LevelVector assemble_blocks(const RecursionState& state, std::size_t pivot) {
    if (pivot >= state.phases()) throw IndexOutOfRange("pivot outside level phases", state.n);
    const double denom = state.u_star[pivot];
    LevelVector blocks(state.n + 1);
    for (std::size_t k = 0; k <= state.n; ++k) {
        const auto row = state.U_family[k].row(pivot);
        blocks[k].resize(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) blocks[k][j] = row[j] / denom;
    }
    return blocks;
}

double residual_q_norm(const RecursionState& state, std::size_t pivot) {
    // u*(j) >= 1/|q_jj| holds exactly; only rounding can push the ratio past 1.
    return std::min(1.0, 1.0 / (std::abs(state.q_diag.at(pivot)) * state.u_star.at(pivot)));
}

double residual_q_norm_direct(const BlockGenerator& gen, const LevelVector& blocks) {
    if (blocks.empty()) throw IndexOutOfRange("empty approximation");
    const std::size_t n = blocks.size() - 1;
    const PrincipalSubmatrix sub = principal_submatrix(gen, n);
    const Vector x = flatten(blocks);
    if (x.size() != sub.size()) throw PhaseMismatch("approximation does not match the generator", n);
    const Vector y = vecmat(x, sub.data);
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) total += std::abs(y[i]) / std::abs(sub.data(i, i));
    return total;
}

double residual_q_norm_direct(const BlockGenerator& gen, const Approximation& approx) {
    return residual_q_norm_direct(gen, approx.blocks);
}

Approximation solve_mip(const BlockGenerator& gen, const SolverOptions& opts) {
    validate_options(opts);
    RecursionState state = init_state(gen, opts.K_set, opts.exec);
    TraceBuffer trace(opts.trace_capacity);
    Approximation out;
    out.variant = Variant::mip_new;

    const bool done = run_levels(
        gen, opts, state, [](const RecursionState&, bool) {},
        [&](const RecursionState& s) {
            const PivotSelection sel = select_pivot(s, gen);
            const double res = residual_q_norm(s, sel.pivot);
            trace.push({s.n, sel.pivot, sel.ratio, res, std::nullopt});
            out.n = s.n;
            out.pivot = sel.pivot;
            out.direction = sel.alpha_star;
            out.residual = res;
            out.blocks = assemble_blocks(s, sel.pivot);
            return res < opts.epsilon;
        });
    out.converged = done;
    out.pivot_trace = trace.take();
    return out;
}

Approximation solve_mip_drift(const BlockGenerator& gen, const DriftCertificate& cert,
                              const SolverOptions& opts) {
    validate_options(opts);
    if (!gen.bandwidth())
        throw UnsupportedInfiniteBand("the drift-based path needs a finite bandwidth");
    RecursionState state = init_state(gen, opts.K_set, opts.exec);
    TraceBuffer trace(opts.trace_capacity);
    Approximation out;
    out.variant = Variant::mip_drift;
    std::optional<LevelVector> previous;

    const bool done = run_levels(
        gen, opts, state, [](const RecursionState&, bool) {},
        [&](const RecursionState& s) {
            const DriftPivot dp = select_pivot_drift(s, gen, cert);
            LevelVector blocks = assemble_blocks(s, dp.pivot);
            const double res = residual_q_norm(s, dp.pivot);
            std::optional<double> step;
            if (previous) step = tv_distance(blocks, *previous);
            trace.push({s.n, dp.pivot, 0.0, res, step});
            out.n = s.n;
            out.pivot = dp.pivot;
            out.direction = dp.alpha;
            out.residual = res;
            out.blocks = blocks;
            previous = std::move(blocks);
            return step && *step < opts.epsilon;
        });
    out.converged = done;
    out.pivot_trace = trace.take();
    return out;
}

Approximation solve_fixed_direction(const BlockGenerator& gen, const FixedDirection& dir,
                                    const SolverOptions& opts) {
    validate_options(opts);
    const Vector& varpi = dir.varpi;
    if (varpi.empty()) throw PhaseMismatch("direction is empty");
    for (double w : varpi)
        if (!(w > 0.0)) throw PhaseMismatch("direction must be strictly positive");
    check_distribution(varpi, varpi.size(), "varpi");

    RecursionState state = init_state(gen, opts.K_set, opts.exec);
    TraceBuffer trace(opts.trace_capacity);
    Approximation out;
    out.variant = Variant::fixed_direction;

    // varpi U_{n,k} = (varpi Q_{n,n-1}) U*_{n-1,k}: gathered from the state
    // at n-1, just before it advances, so every term stays nonnegative.
    LevelVector pending;
    auto check_phases = [&](std::size_t level) {
        const std::size_t m = gen.phase_count(level);
        if (m != varpi.size())
            throw PhaseMismatch("level has " + std::to_string(m) + " phases, direction has " +
                                    std::to_string(varpi.size()), level);
    };
    auto evaluable = [&](std::size_t level) { return level >= dir.from_level; };

    const bool done = run_levels(
        gen, opts, state,
        [&](const RecursionState& s, bool next_is_checkpoint) {
            const std::size_t m = s.n + 1;
            if (!next_is_checkpoint || !evaluable(m)) return;
            check_phases(m);
            const Vector w = vecmat(varpi, gen.block(m, s.n));
            pending.assign(m + 1, {});
            for (std::size_t k = 0; k <= s.n; ++k) pending[k] = vecmat(w, s.U_family[k]);
            pending[m] = varpi;
        },
        [&](const RecursionState& s) {
            if (!evaluable(s.n)) return false;
            check_phases(s.n);
            if (s.n == 0) pending = {varpi};
            double total = 0.0;
            for (const auto& b : pending) total += sum(b);
            for (auto& b : pending)
                for (double& v : b) v /= total;

            // Residual of the approximation: (0..0, x)(-(n)Q)^{-1} with x = varpi (U_n*)^{-1}.
            const Vector x = vecmat(varpi, s.inner);
            double num = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) num += std::abs(x[i]) / std::abs(s.q_diag[i]);
            const double res = num / std::abs(dot(x, s.u_star));

            trace.push({s.n, std::nullopt, 0.0, res, std::nullopt});
            out.n = s.n;
            out.residual = res;
            out.direction = x;
            out.blocks = pending;
            return res < opts.epsilon;
        });
    out.converged = done;
    out.pivot_trace = trace.take();
    return out;
}

LevelVector conditional_distribution(const LevelVector& blocks, std::size_t N) {
    if (N >= blocks.size())
        throw IndexOutOfRange("conditional level " + std::to_string(N) + " beyond available levels");
    LevelVector out(blocks.begin(), blocks.begin() + static_cast<std::ptrdiff_t>(N + 1));
    double total = 0.0;
    for (const auto& b : out) total += sum(b);
    for (auto& b : out)
        for (double& v : b) v /= total;
    return out;
}

double tv_distance(std::span<const double> h1, std::span<const double> h2,
                   std::span<const double> f) {
    const std::size_t common = std::min(h1.size(), h2.size());
    const std::size_t longest = std::max(h1.size(), h2.size());
    if (f.size() < longest) throw NonpositiveWeight("weight vector shorter than the compared vectors");
    for (std::size_t i = 0; i < longest; ++i)
        if (!(f[i] > 0.0)) throw NonpositiveWeight("weight " + std::to_string(i) + " is not positive");
    double total = 0.0;
    for (std::size_t i = 0; i < common; ++i) total += std::abs(h1[i] - h2[i]) * f[i];
    for (std::size_t i = common; i < h1.size(); ++i) total += std::abs(h1[i]) * f[i];
    for (std::size_t i = common; i < h2.size(); ++i) total += std::abs(h2[i]) * f[i];
    return total;
}

double tv_distance(std::span<const double> h1, std::span<const double> h2) {
    const Vector f(std::max(h1.size(), h2.size()), 1.0);
    return tv_distance(h1, h2, f);
}

double tv_distance(const LevelVector& h1, const LevelVector& h2) {
    // Level blocks must line up for the flattened prefixes to be comparable.
    for (std::size_t k = 0; k < std::min(h1.size(), h2.size()); ++k)
        if (h1[k].size() != h2[k].size()) throw PhaseMismatch("level blocks differ in size", k);
    return tv_distance(flatten(h1), flatten(h2));
}

}  // namespace bhmc
