#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "bhmc/kernels.hpp"
#include "kernels_detail.hpp"

namespace bhmc::kernels {

namespace serial {

void gemm(const Matrix& a, const Matrix& b, Matrix& c) {
    detail::check_gemm(a, b, c);
    for (std::size_t i = 0; i < a.rows(); ++i) detail::gemm_row(a, b, c, i);
}

void apply_left(const Matrix& p, std::span<const Matrix> in, std::span<Matrix> out) {
    if (in.size() != out.size()) throw std::invalid_argument("apply_left: size mismatch");
    for (std::size_t k = 0; k < in.size(); ++k) gemm(p, in[k], out[k]);
}

Matrix sum_of_products(std::span<const Matrix* const> lhs, std::span<const Matrix* const> rhs) {
    if (lhs.size() != rhs.size() || lhs.empty())
        throw std::invalid_argument("sum_of_products: bad operand lists");
    Matrix acc;
    Matrix tmp;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        gemm(*lhs[i], *rhs[i], tmp);
        if (i == 0) acc = tmp;
        else acc += tmp;
    }
    return acc;
}

std::optional<std::size_t> lu_factor(LuFactors& f, std::span<const std::size_t> lower_extent,
                                     double pivot_floor) {
    Matrix& a = f.lu;
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("lu_factor: matrix not square");
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

    std::size_t running = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t lim = detail::row_limit(lower_extent, j, n, running);
        running = lim;
        std::size_t p = j;
        double best = std::abs(a(j, j));
        for (std::size_t i = j + 1; i <= lim; ++i)
            if (std::abs(a(i, j)) > best) { best = std::abs(a(i, j)); p = i; }
        if (!(best >= pivot_floor) || best == 0.0) return j;
        if (p != j) {
            std::swap_ranges(a.row(p).begin(), a.row(p).end(), a.row(j).begin());
            std::swap(f.perm[p], f.perm[j]);
        }
        const double piv = a(j, j);
        const auto prow = a.row(j);
        for (std::size_t i = j + 1; i <= lim; ++i) {
            const double l = a(i, j) / piv;
            a(i, j) = l;
            if (l == 0.0) continue;
            auto r = a.row(i);
            for (std::size_t c = j + 1; c < n; ++c) r[c] -= l * prow[c];
        }
    }
    return std::nullopt;
}

}  // namespace serial

Vector lu_solve(const LuFactors& f, std::span<const double> b) {
    const Matrix& a = f.lu;
    const std::size_t n = a.rows();
    if (b.size() != n) throw std::invalid_argument("lu_solve: size mismatch");
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= a(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

Vector lu_solve_left(const LuFactors& f, std::span<const double> b) {
    const Matrix& a = f.lu;
    const std::size_t n = a.rows();
    if (b.size() != n) throw std::invalid_argument("lu_solve_left: size mismatch");
    // z U = b
    Vector z(b.begin(), b.end());
    for (std::size_t j = 0; j < n; ++j) {
        z[j] /= a(j, j);
        const double zj = z[j];
        if (zj == 0.0) continue;
        for (std::size_t c = j + 1; c < n; ++c) z[c] -= zj * a(j, c);
    }
    // w L = z, L unit lower
    for (std::size_t k = n; k-- > 0;) {
        const double wk = z[k];
        if (wk == 0.0) continue;
        for (std::size_t i = 0; i < k; ++i) z[i] -= wk * a(k, i);
    }
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[f.perm[i]] = z[i];
    return x;
}

}  // namespace bhmc::kernels
