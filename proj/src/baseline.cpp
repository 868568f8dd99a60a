#include "bhmc/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bhmc/errors.hpp"
#include "bhmc/lu.hpp"

namespace bhmc {

namespace {

void normalize(LevelVector& blocks) {
    double total = 0.0;
    for (const auto& b : blocks) total += sum(b);
    for (auto& b : blocks)
        for (double& v : b) v /= total;
}

}  // namespace

LevelVector lbcl_direct(const BlockGenerator& gen, std::size_t n, std::span<const double> alpha_n,
                        kernels::Exec exec) {
    PrincipalSubmatrix sub = principal_submatrix(gen, n);
    const std::size_t first = sub.level_offsets[n];
    check_distribution(alpha_n, sub.size() - first, "alpha_n");

    const auto extent = sub.lower_extent();
    Matrix negated = -sub.data;
    const LuFactorization lu(std::move(negated), exec, extent, n, kTruncationPivotRel);

    Vector rhs(sub.size(), 0.0);
    for (std::size_t j = 0; j < alpha_n.size(); ++j) rhs[first + j] = alpha_n[j];
    Vector x = lu.solve_left(rhs);
    // At depth the last pivot sinks below round-off and can come out with
    // either sign. The direction of x is still right, so scale by the signed
    // total before clearing the round-off negatives.
    const double total = sum(x);
    if (!std::isfinite(total) || total == 0.0) throw SingularBlock("truncated system has no usable solution", n);
    for (double& v : x) v = std::max(0.0, v / total);

    LevelVector blocks = split_levels(x, sub.level_offsets);
    normalize(blocks);
    return blocks;
}

BrightTaylorResult bright_taylor(const BlockGenerator& gen, std::size_t K_star) {
    if (gen.bandwidth() != std::optional<std::size_t>{1})
        throw NotQbd("the R-matrix baseline needs a block-tridiagonal generator");

    BrightTaylorResult out;
    out.chain.K_star = K_star;
    out.chain.R.resize(K_star);

    // R_{k+1} Q_{k+1,k}, zero at k = K*.
    Matrix correction = Matrix(gen.phase_count(K_star), gen.phase_count(K_star));
    for (std::size_t k = K_star; k >= 1; --k) {
        Matrix inner = -gen.block(k, k);
        inner -= correction;
        const Matrix inv = invert(inner, k);
        Matrix R = matmul(gen.block(k - 1, k), inv);
        correction = matmul(R, gen.block(k, k - 1));
        out.chain.R[k - 1] = std::move(R);
    }

    Matrix B = gen.block(0, 0);
    if (K_star > 0) B += correction;
    out.blocks.resize(K_star + 1);
    out.blocks[0] = brute_force_stationary(B);
    for (std::size_t k = 1; k <= K_star; ++k) out.blocks[k] = vecmat(out.blocks[k - 1], out.chain.R[k - 1]);
    normalize(out.blocks);
    return out;
}

Vector brute_force_stationary(const Matrix& Q) {
    const std::size_t n = Q.rows();
    if (n == 0 || Q.cols() != n) throw InvalidBlock("generator must be square and nonempty");
    Matrix A = Q;
    for (std::size_t i = 0; i < n; ++i) A(i, n - 1) = 1.0;
    Vector rhs(n, 0.0);
    rhs[n - 1] = 1.0;
    const LuFactorization lu(std::move(A), kernels::Exec::serial, {}, {}, kTruncationPivotRel);
    return lu.solve_left(rhs);
}

}  // namespace bhmc
