#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhmc/matrix.hpp"

namespace bhmc {

/// A probability (or measure) vector split by level: entry k has M_k phases.
using LevelVector = std::vector<Vector>;

Vector flatten(const LevelVector& v);
/// Inverse of flatten given cumulative level offsets (size = levels + 1).
LevelVector split_levels(std::span<const double> flat, std::span<const std::size_t> offsets);

/// Lazy generator of an upper block-Hessenberg Markov chain.
///
/// Q_{k,l} is produced on demand by the block provider. The wrapper returns
/// zero blocks for l < k-1 and, when a bandwidth b is known, for l > k+b
/// without consulting the provider, and rejects blocks of the wrong shape.
/// Providers must be pure: the same (k, l) always yields the same block, and
/// concurrent calls must be safe.
///
/// Each M_k is assumed to fit in memory as a dense block.
class BlockGenerator {
public:
    using PhaseCountFn = std::function<std::size_t(std::size_t level)>;
    using BlockFn = std::function<Matrix(std::size_t k, std::size_t l)>;
    /// Exact sum over l > L of (Q_{k,l} e)_i.
    using TailMassFn = std::function<double(std::size_t k, std::size_t i, std::size_t L)>;

    BlockGenerator(PhaseCountFn phase_count, BlockFn block,
                   std::optional<std::size_t> bandwidth, TailMassFn row_tail_mass = {},
                   std::string name = {});

    std::size_t phase_count(std::size_t k) const;
    Matrix block(std::size_t k, std::size_t l) const;

    std::optional<std::size_t> bandwidth() const noexcept { return bandwidth_; }
    bool has_row_tail_mass() const noexcept { return static_cast<bool>(tail_); }
    double row_tail_mass(std::size_t k, std::size_t i, std::size_t L) const;
    const std::string& name() const noexcept { return name_; }

    /// Diagonal entries q(k,i;k,i) of level k.
    Vector diagonal(std::size_t k) const;

    /// Cumulative phase offsets of levels 0..n (size n + 2).
    std::vector<std::size_t> level_offsets(std::size_t n) const;

private:
    PhaseCountFn phases_;
    BlockFn block_;
    std::optional<std::size_t> bandwidth_;
    TailMassFn tail_;
    std::string name_;
};

/// The north-west corner (n)Q of the generator, levels 0..n.
struct PrincipalSubmatrix {
    std::size_t n = 0;
    std::vector<std::size_t> level_offsets;  // size n + 2; last entry is |S_n|
    Matrix data;

    std::size_t size() const noexcept { return data.rows(); }
    /// Last row index that can be nonzero in each column (block-Hessenberg
    /// shape), suitable as the lower-extent hint of the LU kernels.
    std::vector<std::size_t> lower_extent() const;
};

PrincipalSubmatrix principal_submatrix(const BlockGenerator& gen, std::size_t n);

/// (n)Q - (n)Q e (0, ..., 0, alpha_n): returns the lost row rate to level n.
/// Throws BadDistribution unless alpha_n is a probability vector of length M_n.
Matrix lbcl_augment(const PrincipalSubmatrix& sub, std::span<const double> alpha_n);

/// Throws BadDistribution unless `alpha` is a probability vector of the given length.
void check_distribution(std::span<const double> alpha, std::size_t expected_size,
                        const char* what);

struct Violation {
    enum class Kind { Unstable, NonConservative };
    std::size_t level = 0;
    std::size_t phase = 0;
    Kind kind = Kind::Unstable;
    double value = 0.0;
};

struct ValidationReport {
    std::size_t levels_checked = 0;
    std::vector<Violation> violations;
    std::vector<std::string> warnings;

    bool ok() const noexcept { return violations.empty(); }
};

/// Checks stability (finite diagonal) and conservativity (|row sum| <= tol)
/// of every state in levels 0..levels. Row sums use the exact band when a
/// bandwidth is known, otherwise the analytic tail mass.
///
/// Throws MissingTailInfo if the generator has neither, and InvalidBlock on
/// a negative off-diagonal entry, a positive diagonal entry, or a bad shape.
ValidationReport validate_proper_q(const BlockGenerator& gen, std::size_t levels, double tol);

}  // namespace bhmc
