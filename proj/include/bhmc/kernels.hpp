#pragma once

// Dense kernels behind the recursion and the baseline solves.
//
// Every kernel exists twice: `serial::` is the reference implementation kept
// for testing, `omp::` splits the same work across OpenMP threads. Both
// variants perform each floating-point reduction in the same order, so their
// results are bitwise identical; tests/test_kernels.cpp holds them to that.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bhmc/matrix.hpp"

namespace bhmc::kernels {

enum class Exec { serial, parallel };

/// Number of threads the OpenMP variants will use (1 without OpenMP).
int max_threads() noexcept;

/// In-place LU factors with partial pivoting: row i of P*A is row perm[i] of A.
struct LuFactors {
    Matrix lu;
    std::vector<std::size_t> perm;
};

namespace serial {

void gemm(const Matrix& a, const Matrix& b, Matrix& c);
/// out[k] = p * in[k] for every k.
void apply_left(const Matrix& p, std::span<const Matrix> in, std::span<Matrix> out);
/// Sum_i lhs[i] * rhs[i], accumulated in index order.
Matrix sum_of_products(std::span<const Matrix* const> lhs, std::span<const Matrix* const> rhs);
/// Factor `a` in place. `lower_extent[j]` bounds the last row that can hold a
/// nonzero in column j (pass empty for a full matrix). Returns the column of
/// the first pivot below `pivot_floor`, or nullopt on success.
std::optional<std::size_t> lu_factor(LuFactors& f, std::span<const std::size_t> lower_extent,
                                     double pivot_floor);

}  // namespace serial

namespace omp {

void gemm(const Matrix& a, const Matrix& b, Matrix& c);
void apply_left(const Matrix& p, std::span<const Matrix> in, std::span<Matrix> out);
Matrix sum_of_products(std::span<const Matrix* const> lhs, std::span<const Matrix* const> rhs);
std::optional<std::size_t> lu_factor(LuFactors& f, std::span<const std::size_t> lower_extent,
                                     double pivot_floor);

}  // namespace omp

// Dispatchers.
Matrix gemm(Exec exec, const Matrix& a, const Matrix& b);
void apply_left(Exec exec, const Matrix& p, std::span<const Matrix> in, std::span<Matrix> out);
Matrix sum_of_products(Exec exec, std::span<const Matrix* const> lhs,
                       std::span<const Matrix* const> rhs);
std::optional<std::size_t> lu_factor(Exec exec, LuFactors& f,
                                     std::span<const std::size_t> lower_extent, double pivot_floor);

/// Solve (P^T L U) x = b.
Vector lu_solve(const LuFactors& f, std::span<const double> b);
/// Solve x (P^T L U) = b for the row vector x.
Vector lu_solve_left(const LuFactors& f, std::span<const double> b);

}  // namespace bhmc::kernels
