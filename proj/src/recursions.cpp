#include "bhmc/recursions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bhmc/errors.hpp"
#include "bhmc/lu.hpp"

namespace bhmc {

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Vector family_row_sum(const std::vector<Matrix>& family, std::span<const std::size_t> levels) {
    Vector out(family.front().rows(), 0.0);
    for (std::size_t l : levels) {
        const Vector s = family[l].row_sums();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += s[i];
    }
    return out;
}

}  // namespace

std::vector<std::size_t> normalize_k_set(std::vector<std::size_t> K_set) {
    if (K_set.empty()) throw IndexOutOfRange("index set K must be nonempty");
    std::sort(K_set.begin(), K_set.end());
    K_set.erase(std::unique(K_set.begin(), K_set.end()), K_set.end());
    return K_set;
}

RecursionState init_state(const BlockGenerator& gen, std::vector<std::size_t> K_set,
                          kernels::Exec exec) {
    RecursionState s;
    s.exec = exec;
    s.K_set = normalize_k_set(std::move(K_set));
    s.n = 0;
    const Matrix q00 = gen.block(0, 0);
    s.inner = -q00;
    s.U_star = LuFactorization(s.inner, kernels::Exec::serial, {}, 0).inverse();
    s.U_family = {s.U_star};
    s.u_star = s.U_star.row_sums();
    s.q_diag = gen.diagonal(0);
    if (s.K() == 0) s.u_star_K = s.u_star;
    return s;
}

void advance(RecursionState& s, const BlockGenerator& gen) {
    const std::size_t n = s.n;
    const std::size_t m = n + 1;
    const Matrix q_down = gen.block(m, n);
    const Matrix q_diag_block = gen.block(m, m);

    // Sum_{l} U*_{n,l} Q_{l,m}; only l >= m - b contribute for a banded Q.
    std::size_t lo = 0;
    if (gen.bandwidth() && m > *gen.bandwidth()) lo = m - *gen.bandwidth();
    std::vector<Matrix> up_blocks;
    up_blocks.reserve(m - lo);
    for (std::size_t l = lo; l <= n; ++l) up_blocks.push_back(gen.block(l, m));
    std::vector<const Matrix*> lhs;
    std::vector<const Matrix*> rhs;
    for (std::size_t l = lo; l <= n; ++l) {
        lhs.push_back(&s.U_family[l]);
        rhs.push_back(&up_blocks[l - lo]);
    }
    const Matrix reach = kernels::sum_of_products(s.exec, lhs, rhs);

    Matrix inner = -q_diag_block;
    inner -= kernels::gemm(s.exec, q_down, reach);
    Matrix u_star_new = LuFactorization(inner, kernels::Exec::serial, {}, m).inverse();

    Matrix exit_down = kernels::gemm(s.exec, u_star_new, q_down);
    std::vector<Matrix> family(m + 1);
    kernels::apply_left(s.exec, exit_down, std::span<const Matrix>(s.U_family),
                        std::span<Matrix>(family.data(), m));
    family[m] = u_star_new;

    Vector rhs_vec = matvec(q_down, s.u_star);
    for (double& v : rhs_vec) v += 1.0;
    Vector u_new = matvec(u_star_new, rhs_vec);
    if (!all_finite(u_new) || !u_star_new.all_finite())
        throw SingularBlock("recursion produced non-finite values", m);

    std::optional<Vector> u_K;
    if (m == s.K()) u_K = family_row_sum(family, s.K_set);
    else if (m > s.K()) u_K = matvec(exit_down, *s.u_star_K);

    s.n = m;
    s.inner = std::move(inner);
    s.U_star = std::move(u_star_new);
    s.exit_down = std::move(exit_down);
    s.U_family = std::move(family);
    s.u_star = std::move(u_new);
    s.u_star_K = std::move(u_K);
    s.q_diag.resize(q_diag_block.rows());
    for (std::size_t i = 0; i < s.q_diag.size(); ++i) s.q_diag[i] = q_diag_block(i, i);
}

Vector u_star_K_direct(const RecursionState& s) {
    if (s.n < s.K())
        throw IndexOutOfRange("u*_{n,K} needs n >= max K (n = " + std::to_string(s.n) + ")", s.n);
    return family_row_sum(s.U_family, s.K_set);
}

const Matrix& sojourn_matrix(const RecursionState& s, std::size_t k) {
    if (k > s.n) throw IndexOutOfRange("sojourn level " + std::to_string(k) + " above n", s.n);
    return s.U_family[k];
}

}  // namespace bhmc
