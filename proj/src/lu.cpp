#include "bhmc/lu.hpp"

#include <string>

#include "bhmc/errors.hpp"

namespace bhmc {

LuFactorization::LuFactorization(Matrix a, kernels::Exec exec,
                                 std::span<const std::size_t> lower_extent,
                                 std::optional<std::size_t> level, double pivot_floor_rel) {
    if (a.rows() != a.cols()) throw SingularBlock("non-square matrix passed to LU", level);
    const double floor = pivot_floor_rel * a.norm_inf();
    factors_.lu = std::move(a);
    if (auto bad = kernels::lu_factor(exec, factors_, lower_extent, floor)) {
        throw SingularBlock("pivot below threshold at column " + std::to_string(*bad), level);
    }
}

Matrix LuFactorization::inverse() const {
    const std::size_t n = size();
    Matrix inv(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const Vector col = solve(e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
        e[j] = 0.0;
    }
    return inv;
}

Matrix invert(const Matrix& a, std::optional<std::size_t> level) {
    return LuFactorization(a, kernels::Exec::serial, {}, level).inverse();
}

}  // namespace bhmc
