#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bhmc/generator.hpp"
#include "bhmc/kernels.hpp"
#include "bhmc/lfp.hpp"
#include "bhmc/recursions.hpp"

namespace bhmc {

enum class Variant { mip_new, mip_drift, fixed_direction };

const char* to_string(Variant v) noexcept;

/// Levels at which the solver builds an approximation and tests for stopping.
/// All schedules start at max K.
///   every:     K, K+1, K+2, ...
///   stride:    K, K+s, K+2s, ...
///   geometric: K, then max(n+1, ceil(factor * n))
struct Schedule {
    enum class Kind { every, stride, geometric };
    Kind kind = Kind::every;
    std::size_t stride = 1;
    double factor = 2.0;

    std::size_t first(std::size_t K) const { return K; }
    std::size_t next(std::size_t current) const;
};

struct SolverOptions {
    double epsilon = 1e-6;
    std::vector<std::size_t> K_set{0};
    Schedule schedule;
    std::size_t max_level = 10000;
    Variant variant = Variant::mip_new;
    kernels::Exec exec = kernels::Exec::parallel;
    std::size_t trace_capacity = 1024;
};

/// Throws ConfigError unless 0 < epsilon < 1, the schedule is valid, and
/// max_level >= max K.
void validate_options(const SolverOptions& opts);

struct TraceEntry {
    std::size_t level = 0;
    std::optional<std::size_t> pivot;  // absent on the fixed-direction path
    double ratio = 0.0;                // LFP objective at the pivot (mip_new)
    double residual = 0.0;             // q-weighted residual ||pi (n)Q||_q
    std::optional<double> step_tv;     // drift path: TV to the previous checkpoint
};

struct Approximation {
    std::size_t n = 0;
    LevelVector blocks;
    std::vector<TraceEntry> pivot_trace;  // last `trace_capacity` checkpoints
    double residual = 0.0;
    bool converged = false;
    Variant variant = Variant::mip_new;
    std::optional<std::size_t> pivot;
    /// Row vector on level n such that blocks = (0..0, direction)(-(n)Q)^{-1},
    /// up to normalization. A unit vector for the pivot rules.
    Vector direction;
};

/// Direction for the fixed-direction path: a positive probability vector on
/// the phase set shared by all levels >= from_level.
struct FixedDirection {
    Vector varpi;
    std::size_t from_level = 0;
};

/// Sequential update with the maximizing pivot rule and the q-weighted
/// residual stopping test. Returns converged = false with the approximation
/// at max_level if the residual never drops below epsilon.
Approximation solve_mip(const BlockGenerator& gen, const SolverOptions& opts);

/// Legacy path: drift-based pivot, stops when successive checkpoints are
/// within epsilon in total variation. Banded generators only.
Approximation solve_mip_drift(const BlockGenerator& gen, const DriftCertificate& cert,
                              const SolverOptions& opts);

/// Normalized varpi U_{n,k} without any pivot selection.
Approximation solve_fixed_direction(const BlockGenerator& gen, const FixedDirection& dir,
                                    const SolverOptions& opts);

/// Approximation at the state's level for a given unit-vector pivot.
LevelVector assemble_blocks(const RecursionState& state, std::size_t pivot);

/// 1 / (|q(n,j;n,j)| u*_n(j)).
double residual_q_norm(const RecursionState& state, std::size_t pivot);

/// ||pi (n)Q||_q by explicit assembly of (n)Q.
double residual_q_norm_direct(const BlockGenerator& gen, const Approximation& approx);
double residual_q_norm_direct(const BlockGenerator& gen, const LevelVector& blocks);

/// (pi_0, ..., pi_N) / sum_{l<=N} pi_l e. Throws IndexOutOfRange if N is past the end.
LevelVector conditional_distribution(const LevelVector& blocks, std::size_t N);

/// f-modulated total variation. The index sets of h1 and h2 are prefixes
/// 0..len-1, so unmatched tails count with their own mass. `f` must cover the
/// longer vector; throws NonpositiveWeight on a weight <= 0.
double tv_distance(std::span<const double> h1, std::span<const double> h2,
                   std::span<const double> f);
/// Plain total variation (f = e).
double tv_distance(std::span<const double> h1, std::span<const double> h2);
double tv_distance(const LevelVector& h1, const LevelVector& h2);

}  // namespace bhmc
