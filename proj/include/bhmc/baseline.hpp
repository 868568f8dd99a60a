#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bhmc/generator.hpp"
#include "bhmc/kernels.hpp"
#include "bhmc/matrix.hpp"

// Reference solvers the matrix-product recursion is validated against. None
// of them shares code with the recursion beyond the generator and the dense
// kernels.

namespace bhmc {

/// Stationary vector of the LBCL-augmented truncation at level n:
///   (0, ..., 0, alpha_n)(-(n)Q)^{-1}, normalized.
/// One sparse-aware LU of (n)Q. Throws BadDistribution on a bad alpha_n and
/// SingularBlock if (n)Q is numerically singular.
LevelVector lbcl_direct(const BlockGenerator& gen, std::size_t n, std::span<const double> alpha_n,
                        kernels::Exec exec = kernels::Exec::serial);

struct RMatrixChain {
    std::size_t K_star = 0;
    std::vector<Matrix> R;  // R[k-1] = R_k, k = 1..K_star; R_k is M_{k-1} x M_k
};

struct BrightTaylorResult {
    RMatrixChain chain;
    LevelVector blocks;  // pi_0..pi_{K_star}, normalized over those levels
};

/// Level-dependent QBD baseline: R_{K*+1} = 0 and, backwards,
///   R_k = Q_{k-1,k} (-Q_{k,k} - R_{k+1} Q_{k+1,k})^{-1},
/// then pi_0 (Q_{0,0} + R_1 Q_{1,0}) = 0 and pi_k = pi_{k-1} R_k.
/// Throws NotQbd unless the generator has bandwidth 1.
BrightTaylorResult bright_taylor(const BlockGenerator& gen, std::size_t K_star);

/// x Q = 0, x e = 1 for a finite conservative generator, with the last
/// column of Q replaced by ones. Throws SingularBlock when that system is
/// singular, which signals a reducible Q.
Vector brute_force_stationary(const Matrix& Q);

}  // namespace bhmc
