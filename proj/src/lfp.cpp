#include "bhmc/lfp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bhmc/errors.hpp"

namespace bhmc {

std::vector<std::size_t> incoming_support(const BlockGenerator& gen, std::size_t n) {
    const Vector cols = gen.block(n + 1, n).col_sums();
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (cols[j] > 0.0) out.push_back(j);
    return out;
}

std::vector<std::size_t> outgoing_support(const RecursionState& state, const BlockGenerator& gen) {
    if (state.n == 0) throw IndexOutOfRange("outgoing support is defined for n >= 1", 0);
    const Matrix& exit_down = state.exit_down.empty()
                                  ? matmul(state.U_star, gen.block(state.n, state.n - 1))
                                  : state.exit_down;
    const Vector flow = exit_down.row_sums();
    const double top = *std::max_element(flow.begin(), flow.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flow.size(); ++i)
        if (flow[i] > kSupportRelTol * top) out.push_back(i);
    return out;
}

PivotSelection select_pivot(const RecursionState& state, const std::vector<std::size_t>& I,
                            const std::optional<std::vector<std::size_t>>& O) {
    if (!state.u_star_K)
        throw IndexOutOfRange("pivot selection needs n >= max K (n = " + std::to_string(state.n) + ")",
                              state.n);
    const Vector& uK = *state.u_star_K;
    const Vector& u = state.u_star;

    PivotSelection sel;
    sel.I_plus = I;
    if (O) sel.O_plus = *O;

    std::vector<std::size_t> candidates;
    if (O) {
        std::set_intersection(I.begin(), I.end(), O->begin(), O->end(), std::back_inserter(candidates));
    } else {
        candidates = I;
    }

    const double uK_scale = *std::max_element(uK.begin(), uK.end());
    std::vector<double> ratios(candidates.size(), 0.0);
    double best = 0.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const std::size_t j = candidates[c];
        if (uK[j] <= kSupportRelTol * uK_scale) continue;
        ratios[c] = uK[j] / u[j];
        best = std::max(best, ratios[c]);
    }
    if (!(best > 0.0) || !std::isfinite(best))
        throw EmptyCandidateSet("no phase of level " + std::to_string(state.n) +
                                    " has a positive objective; chain may be non-ergodic or the "
                                    "checkpoint too early",
                                state.n);

    for (std::size_t c = 0; c < candidates.size(); ++c)
        if (ratios[c] > 0.0 && ratios[c] >= best * (1.0 - 1e-14)) sel.J_star.push_back(candidates[c]);
    sel.pivot = sel.J_star.front();
    sel.ratio = uK[sel.pivot] / u[sel.pivot];
    sel.alpha_star.assign(u.size(), 0.0);
    sel.alpha_star[sel.pivot] = 1.0;
    return sel;
}

PivotSelection select_pivot(const RecursionState& state, const BlockGenerator& gen) {
    const auto I = incoming_support(gen, state.n);
    std::optional<std::vector<std::size_t>> O;
    if (state.n >= 1) O = outgoing_support(state, gen);
    return select_pivot(state, I, O);
}

double lfp_objective(const RecursionState& state, std::span<const double> alpha) {
    if (!state.u_star_K) throw IndexOutOfRange("objective needs n >= max K", state.n);
    return dot(alpha, *state.u_star_K) / dot(alpha, state.u_star);
}

DriftPivot select_pivot_drift(const RecursionState& state, const BlockGenerator& gen,
                              const DriftCertificate& cert) {
    if (!gen.bandwidth())
        throw UnsupportedInfiniteBand("the drift rule needs y_n, an infinite sum without a finite band",
                                      state.n);
    if (!cert.v) throw BadDistribution("drift certificate has no v");
    const std::size_t n = state.n;
    const std::size_t b = *gen.bandwidth();

    DriftPivot out;
    out.y = cert.v(n);
    if (out.y.size() != state.phases())
        throw PhaseMismatch("v_n has the wrong length", n);

    std::vector<Vector> v_up;  // v_{n+1} .. v_{n+b}
    for (std::size_t l = n + 1; l <= n + b; ++l) v_up.push_back(cert.v(l));

    const std::size_t lo = n + 1 > b ? n + 1 - b : 0;
    for (std::size_t k = lo; k <= n; ++k) {
        Vector flow(gen.phase_count(k), 0.0);
        for (std::size_t l = n + 1; l <= std::min(k + b, n + b); ++l) {
            const Vector part = matvec(gen.block(k, l), v_up[l - n - 1]);
            for (std::size_t i = 0; i < flow.size(); ++i) flow[i] += part[i];
        }
        const Vector add = matvec(state.U_family[k], flow);
        for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] += add[i];
    }

    double best = 0.0;
    bool first = true;
    for (std::size_t j = 0; j < out.y.size(); ++j) {
        const double r = out.y[j] / state.u_star[j];
        if (first || r < best * (1.0 - 1e-14)) {
            best = r;
            out.pivot = j;
            first = false;
        }
    }
    out.alpha.assign(state.phases(), 0.0);
    out.alpha[out.pivot] = 1.0;
    return out;
}

}  // namespace bhmc
