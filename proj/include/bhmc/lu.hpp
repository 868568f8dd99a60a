#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "bhmc/kernels.hpp"
#include "bhmc/matrix.hpp"

namespace bhmc {

/// Relative pivot floor: a pivot smaller than this times ||A||_inf is
/// treated as singular.
inline constexpr double kSingularPivotRel = 1e-13;

/// Floor for solves on whole truncated generators. With partial pivoting the
/// last pivot there shrinks like the stationary mass of the top level, and
/// the normalization afterwards cancels it, so only underflow counts.
inline constexpr double kTruncationPivotRel = std::numeric_limits<double>::min();

/// LU factorization with partial pivoting. Throws SingularBlock (tagged with
/// `level` when given) if a pivot falls below pivot_floor_rel * ||A||_inf.
class LuFactorization {
public:
    explicit LuFactorization(Matrix a, kernels::Exec exec = kernels::Exec::serial,
                             std::span<const std::size_t> lower_extent = {},
                             std::optional<std::size_t> level = {},
                             double pivot_floor_rel = kSingularPivotRel);

    std::size_t size() const noexcept { return factors_.lu.rows(); }

    Vector solve(std::span<const double> b) const { return kernels::lu_solve(factors_, b); }
    Vector solve_left(std::span<const double> b) const { return kernels::lu_solve_left(factors_, b); }
    Matrix inverse() const;

private:
    kernels::LuFactors factors_;
};

/// Convenience: explicit inverse of a small dense block.
Matrix invert(const Matrix& a, std::optional<std::size_t> level = {});

}  // namespace bhmc
