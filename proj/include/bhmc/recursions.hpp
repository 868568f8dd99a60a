#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bhmc/generator.hpp"
#include "bhmc/kernels.hpp"
#include "bhmc/matrix.hpp"

namespace bhmc {

/// Rolling state of the matrix-product recursion at level n.
///
/// U_family[k] = U*_{n,k}: entry (i, j) is the expected time spent in state
/// (k, j) before the chain first enters a level above n, starting from (n, i).
/// U_star = U*_{n,n}, u_star = sum_k U*_{n,k} e, and u_star_K restricts that
/// sum to the levels in K_set (available once n >= max K_set).
struct RecursionState {
    std::size_t n = 0;
    Matrix U_star;
    std::vector<Matrix> U_family;
    Vector u_star;
    std::optional<Vector> u_star_K;
    std::vector<std::size_t> K_set;  // sorted, unique, nonempty
    Vector q_diag;                   // diagonal of Q_{n,n}

    /// The matrix inverted to obtain U_star, i.e. (U_n*)^{-1}.
    Matrix inner;
    /// U_n* Q_{n,n-1} (empty at n = 0).
    Matrix exit_down;

    kernels::Exec exec = kernels::Exec::parallel;

    std::size_t K() const { return K_set.back(); }
    std::size_t phases() const { return u_star.size(); }
};

/// Normalizes an index set: sorts, deduplicates, rejects empty.
std::vector<std::size_t> normalize_k_set(std::vector<std::size_t> K_set);

/// State at level 0: U_0* = (-Q_{0,0})^{-1}, u_0* = U_0* e.
RecursionState init_state(const BlockGenerator& gen, std::vector<std::size_t> K_set,
                          kernels::Exec exec = kernels::Exec::parallel);

/// Moves the state from level n to n + 1. Throws SingularBlock when the
/// matrix to invert is numerically singular or the recursion overflows.
void advance(RecursionState& state, const BlockGenerator& gen);

/// Sum over K of U*_{n,l} e computed from the stored family; cross-checks the
/// recursively maintained u_star_K. Throws IndexOutOfRange when n < max K.
Vector u_star_K_direct(const RecursionState& state);

/// U*_{n,k}. Throws IndexOutOfRange when k > n.
const Matrix& sojourn_matrix(const RecursionState& state, std::size_t k);

}  // namespace bhmc
