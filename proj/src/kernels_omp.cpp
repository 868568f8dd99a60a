#include <cmath>
#include <stdexcept>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bhmc/kernels.hpp"
#include "kernels_detail.hpp"

namespace bhmc::kernels {

namespace {
// Below this many flops a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 14;
}  // namespace

int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace omp {

void gemm(const Matrix& a, const Matrix& b, Matrix& c) {
    detail::check_gemm(a, b, c);
    const auto rows = static_cast<std::ptrdiff_t>(a.rows());
    const std::size_t work = a.rows() * a.cols() * b.cols();
#pragma omp parallel for schedule(static) if (work > kParallelWork)
    for (std::ptrdiff_t i = 0; i < rows; ++i) detail::gemm_row(a, b, c, static_cast<std::size_t>(i));
}

void apply_left(const Matrix& p, std::span<const Matrix> in, std::span<Matrix> out) {
    if (in.size() != out.size()) throw std::invalid_argument("apply_left: size mismatch");
    const auto count = static_cast<std::ptrdiff_t>(in.size());
    std::size_t work = 0;
    for (const auto& m : in) work += p.rows() * p.cols() * m.cols();
#pragma omp parallel for schedule(dynamic, 4) if (work > kParallelWork)
    for (std::ptrdiff_t k = 0; k < count; ++k) serial::gemm(p, in[k], out[k]);
}

Matrix sum_of_products(std::span<const Matrix* const> lhs, std::span<const Matrix* const> rhs) {
    if (lhs.size() != rhs.size() || lhs.empty())
        throw std::invalid_argument("sum_of_products: bad operand lists");
    // Products in parallel, accumulation in index order (matches serial::).
    std::vector<Matrix> parts(lhs.size());
    const auto count = static_cast<std::ptrdiff_t>(lhs.size());
    std::size_t work = 0;
    for (std::size_t i = 0; i < lhs.size(); ++i) work += lhs[i]->rows() * lhs[i]->cols() * rhs[i]->cols();
#pragma omp parallel for schedule(dynamic, 4) if (work > kParallelWork)
    for (std::ptrdiff_t i = 0; i < count; ++i) serial::gemm(*lhs[i], *rhs[i], parts[i]);
    Matrix acc = std::move(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i) acc += parts[i];
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
        const auto first = static_cast<std::ptrdiff_t>(j + 1);
        const auto last = static_cast<std::ptrdiff_t>(lim);
        const std::size_t work = (lim - j) * (n - j);
#pragma omp parallel for schedule(static) if (work > kParallelWork)
        for (std::ptrdiff_t ii = first; ii <= last; ++ii) {
            const auto i = static_cast<std::size_t>(ii);
            const double l = a(i, j) / piv;
            a(i, j) = l;
            if (l == 0.0) continue;
            auto r = a.row(i);
            for (std::size_t c = j + 1; c < n; ++c) r[c] -= l * prow[c];
        }
    }
    return std::nullopt;
}

}  // namespace omp

Matrix gemm(Exec exec, const Matrix& a, const Matrix& b) {
    Matrix c;
    if (exec == Exec::parallel) omp::gemm(a, b, c);
    else serial::gemm(a, b, c);
    return c;
}

void apply_left(Exec exec, const Matrix& p, std::span<const Matrix> in, std::span<Matrix> out) {
    if (exec == Exec::parallel) omp::apply_left(p, in, out);
    else serial::apply_left(p, in, out);
}

Matrix sum_of_products(Exec exec, std::span<const Matrix* const> lhs,
                       std::span<const Matrix* const> rhs) {
    return exec == Exec::parallel ? omp::sum_of_products(lhs, rhs)
                                  : serial::sum_of_products(lhs, rhs);
}

std::optional<std::size_t> lu_factor(Exec exec, LuFactors& f,
                                     std::span<const std::size_t> lower_extent, double pivot_floor) {
    return exec == Exec::parallel ? omp::lu_factor(f, lower_extent, pivot_floor)
                                  : serial::lu_factor(f, lower_extent, pivot_floor);
}

}  // namespace bhmc::kernels
