#include "bhmc/generator.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bhmc/errors.hpp"

namespace bhmc {

Vector flatten(const LevelVector& v) {
    Vector flat;
    for (const auto& block : v) flat.insert(flat.end(), block.begin(), block.end());
    return flat;
}

LevelVector split_levels(std::span<const double> flat, std::span<const std::size_t> offsets) {
    if (offsets.empty() || offsets.back() != flat.size())
        throw IndexOutOfRange("level offsets do not cover the vector");
    LevelVector out(offsets.size() - 1);
    for (std::size_t k = 0; k + 1 < offsets.size(); ++k)
        out[k].assign(flat.begin() + offsets[k], flat.begin() + offsets[k + 1]);
    return out;
}

BlockGenerator::BlockGenerator(PhaseCountFn phase_count, BlockFn block,
                               std::optional<std::size_t> bandwidth, TailMassFn row_tail_mass,
                               std::string name)
    : phases_(std::move(phase_count)),
      block_(std::move(block)),
      bandwidth_(bandwidth),
      tail_(std::move(row_tail_mass)),
      name_(std::move(name)) {
    if (!phases_ || !block_) throw InvalidBlock("generator needs phase-count and block providers");
    if (bandwidth_ && *bandwidth_ == 0) throw InvalidBlock("bandwidth must be positive");
}

std::size_t BlockGenerator::phase_count(std::size_t k) const {
    const std::size_t m = phases_(k);
    if (m == 0) throw InvalidBlock("level has no phases", k);
    return m;
}

Matrix BlockGenerator::block(std::size_t k, std::size_t l) const {
    const std::size_t rows = phase_count(k);
    const std::size_t cols = phase_count(l);
    if (l + 1 < k) return Matrix(rows, cols);
    if (bandwidth_ && l > k + *bandwidth_) return Matrix(rows, cols);
    Matrix b = block_(k, l);
    if (b.rows() != rows || b.cols() != cols) {
        throw InvalidBlock("block (" + std::to_string(k) + "," + std::to_string(l) + ") has shape " +
                               std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                               ", expected " + std::to_string(rows) + "x" + std::to_string(cols),
                           k);
    }
    return b;
}

double BlockGenerator::row_tail_mass(std::size_t k, std::size_t i, std::size_t L) const {
    if (!tail_) throw MissingTailInfo("generator has no analytic row tail mass", k);
    return tail_(k, i, L);
}

Vector BlockGenerator::diagonal(std::size_t k) const {
    const Matrix d = block(k, k);
    Vector out(d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i) out[i] = d(i, i);
    return out;
}

std::vector<std::size_t> BlockGenerator::level_offsets(std::size_t n) const {
    std::vector<std::size_t> off(n + 2, 0);
    for (std::size_t k = 0; k <= n; ++k) off[k + 1] = off[k] + phase_count(k);
    return off;
}

std::vector<std::size_t> PrincipalSubmatrix::lower_extent() const {
    std::vector<std::size_t> ext(size());
    for (std::size_t l = 0; l <= n; ++l) {
        const std::size_t last_level = std::min(l + 1, n);
        const std::size_t last_row = level_offsets[last_level + 1] - 1;
        for (std::size_t c = level_offsets[l]; c < level_offsets[l + 1]; ++c) ext[c] = last_row;
    }
    return ext;
}

PrincipalSubmatrix principal_submatrix(const BlockGenerator& gen, std::size_t n) {
    PrincipalSubmatrix sub;
    sub.n = n;
    sub.level_offsets = gen.level_offsets(n);
    const std::size_t dim = sub.level_offsets.back();
    sub.data = Matrix(dim, dim);
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t first = k == 0 ? 0 : k - 1;
        std::size_t last = n;
        if (gen.bandwidth()) last = std::min(n, k + *gen.bandwidth());
        for (std::size_t l = first; l <= last; ++l) {
            const Matrix b = gen.block(k, l);
            for (std::size_t i = 0; i < b.rows(); ++i)
                for (std::size_t j = 0; j < b.cols(); ++j)
                    sub.data(sub.level_offsets[k] + i, sub.level_offsets[l] + j) = b(i, j);
        }
    }
    return sub;
}

void check_distribution(std::span<const double> alpha, std::size_t expected_size, const char* what) {
    if (alpha.size() != expected_size) {
        throw BadDistribution(std::string(what) + " has length " + std::to_string(alpha.size()) +
                              ", expected " + std::to_string(expected_size));
    }
    double total = 0.0;
    for (double a : alpha) {
        if (!std::isfinite(a) || a < 0.0) throw BadDistribution(std::string(what) + " has a negative entry");
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-12) throw BadDistribution(std::string(what) + " does not sum to 1");
}

Matrix lbcl_augment(const PrincipalSubmatrix& sub, std::span<const double> alpha_n) {
    const std::size_t first = sub.level_offsets[sub.n];
    const std::size_t mn = sub.level_offsets[sub.n + 1] - first;
    check_distribution(alpha_n, mn, "alpha_n");
    Matrix q = sub.data;
    const Vector rows = q.row_sums();
    for (std::size_t i = 0; i < q.rows(); ++i) {
        const double deficit = -rows[i];
        if (deficit == 0.0) continue;
        for (std::size_t j = 0; j < mn; ++j) q(i, first + j) += deficit * alpha_n[j];
    }
    return q;
}

ValidationReport validate_proper_q(const BlockGenerator& gen, std::size_t levels, double tol) {
    if (!gen.bandwidth() && !gen.has_row_tail_mass())
        throw MissingTailInfo("conservativity needs a bandwidth or an analytic row tail mass");

    ValidationReport report;
    report.levels_checked = levels + 1;
    for (std::size_t k = 0; k <= levels; ++k) {
        const std::size_t mk = gen.phase_count(k);
        const std::size_t first = k == 0 ? 0 : k - 1;
        const std::size_t last = gen.bandwidth() ? k + *gen.bandwidth() : k;
        Vector rows(mk, 0.0);
        bool has_down = k == 0;
        for (std::size_t l = first; l <= last; ++l) {
            const Matrix b = gen.block(k, l);
            for (std::size_t i = 0; i < b.rows(); ++i) {
                for (std::size_t j = 0; j < b.cols(); ++j) {
                    const double v = b(i, j);
                    const bool diag = l == k && i == j;
                    if (diag) {
                        if (!std::isfinite(v)) {
                            report.violations.push_back({k, i, Violation::Kind::Unstable, v});
                            continue;
                        }
                        if (v > 0.0) {
                            throw InvalidBlock("positive diagonal entry " + std::to_string(v) +
                                                   " at phase " + std::to_string(i), k);
                        }
                    } else if (!(v >= 0.0)) {
                        throw InvalidBlock("negative or non-finite off-diagonal entry in block (" +
                                               std::to_string(k) + "," + std::to_string(l) + ")", k);
                    }
                    if (l + 1 == k && v > 0.0) has_down = true;
                    rows[i] += v;
                }
            }
        }
        if (!gen.bandwidth())
            for (std::size_t i = 0; i < mk; ++i) rows[i] += gen.row_tail_mass(k, i, last);
        for (std::size_t i = 0; i < mk; ++i) {
            if (std::isfinite(rows[i]) && std::abs(rows[i]) > tol)
                report.violations.push_back({k, i, Violation::Kind::NonConservative, rows[i]});
        }
        if (!has_down)
            report.warnings.push_back("block (" + std::to_string(k) + "," + std::to_string(k - 1) +
                                      ") is zero; the chain cannot be ergodic");
    }
    return report;
}

}  // namespace bhmc
