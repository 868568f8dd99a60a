#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>

#include "bhmc/kernels.hpp"

namespace bhmc::kernels {

namespace detail {

inline void gemm_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
    auto out = c.row(i);
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        const auto brow = b.row(k);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += aik * brow[j];
    }
}

inline void check_gemm(const Matrix& a, const Matrix& b, Matrix& c) {
    if (a.cols() != b.rows()) throw std::invalid_argument("gemm: inner dimension mismatch");
    if (c.rows() != a.rows() || c.cols() != b.cols()) c = Matrix(a.rows(), b.cols());
}

inline std::size_t row_limit(std::span<const std::size_t> ext, std::size_t j, std::size_t n,
                             std::size_t running) {
    if (ext.empty()) return n - 1;
    return std::min(n - 1, std::max({j, ext[j], running}));
}

}  // namespace detail

}  // namespace bhmc::kernels
