#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bhmc/generator.hpp"
#include "bhmc/recursions.hpp"

namespace bhmc {

/// Relative threshold separating structural zeros from positive entries of
/// computed quantities (U_n* Q_{n,n-1} e, ratios).
inline constexpr double kSupportRelTol = 1e-12;

/// Phases are 0-based throughout the library.
struct PivotSelection {
    std::vector<std::size_t> I_plus;  // phases fed directly from level n+1
    std::vector<std::size_t> O_plus;  // phases with a path down to level n-1
    std::vector<std::size_t> J_star;  // maximizers of u*_{n,K}(j) / u*_n(j)
    std::size_t pivot = 0;            // smallest index in J_star
    Vector alpha_star;                // unit vector at pivot
    double ratio = 0.0;
};

/// Foster-Lyapunov certificate (v, b, C) for the drift-based pivot rule. The
/// library takes the drift inequality Qv <= -e + b 1_C on trust.
struct DriftCertificate {
    std::function<Vector(std::size_t level)> v;
    double b = 1.0;
    std::vector<std::pair<std::size_t, std::size_t>> C;  // (level, phase)
};

/// {j : (e^T Q_{n+1,n})_j > 0}, exact on the model data.
std::vector<std::size_t> incoming_support(const BlockGenerator& gen, std::size_t n);

/// {i : (U_n* Q_{n,n-1} e)_i > kSupportRelTol * max}. Throws IndexOutOfRange at n = 0.
std::vector<std::size_t> outgoing_support(const RecursionState& state, const BlockGenerator& gen);

/// Closed-form argmax of the fractional program
///   maximize alpha u*_{n,K} / alpha u*_n  over probability vectors on I,
/// searched over I intersected with O (O is omitted at level 0, where it is
/// undefined). Phases whose u*_{n,K} entry is a structural zero are skipped;
/// ties within 1e-14 relative go to the smallest phase. Throws
/// EmptyCandidateSet when nothing remains, and IndexOutOfRange when n < max K.
PivotSelection select_pivot(const RecursionState& state, const std::vector<std::size_t>& I,
                            const std::optional<std::vector<std::size_t>>& O);

/// Candidates and pivot for the state's level in one call (uses O_n+ when n >= 1).
PivotSelection select_pivot(const RecursionState& state, const BlockGenerator& gen);

/// Objective r_n(alpha) = alpha u*_{n,K} / alpha u*_n.
double lfp_objective(const RecursionState& state, std::span<const double> alpha);

struct DriftPivot {
    std::size_t pivot = 0;
    Vector alpha;
    Vector y;  // y_n
};

/// Legacy minimizing rule: argmin_j y_n(j) / u*_n(j) with
///   y_n = v_n + sum_{k<=n} U*_{n,k} sum_{l=n+1}^{min(k+b, n+b)} Q_{k,l} v_l.
/// Banded generators only; throws UnsupportedInfiniteBand otherwise.
DriftPivot select_pivot_drift(const RecursionState& state, const BlockGenerator& gen,
                              const DriftCertificate& cert);

}  // namespace bhmc
