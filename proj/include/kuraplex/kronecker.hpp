#pragma once

#include <stdexcept>

#include "kuraplex/matrix.hpp"

namespace kuraplex {

/// Kronecker product A (x) B with the *block-of-A* layout: the result is an
/// r x s grid of p x q blocks and block (i, j) equals b_ij * A.
///
/// Note this is the transpose of the layout most linear-algebra texts use
/// (a_ij * B blocks). The multiplex assembly below depends on this exact
/// layout: with it, A_intra (+) A_inter comes out layer-major, diagonal
/// blocks A_intra and off-diagonal blocks eps_lk * I_N, matching the
/// flattened state ordering (layer 1 nodes first). Both conventions agree
/// on spectra, but the block layout must not be "fixed" to the textbook one.
inline Matrix kronecker_product(const Matrix& a, const Matrix& b) {
    if (!a.all_finite() || !b.all_finite())
        throw std::invalid_argument("kronecker_product: non-finite entries");
    const std::size_t p = a.rows(), q = a.cols();
    const std::size_t r = b.rows(), s = b.cols();
    if (p != 0 && q != 0 && r != 0 && s != 0) {
        const std::size_t max_dim = static_cast<std::size_t>(-1);
        if (p > max_dim / r || q > max_dim / s)
            throw std::overflow_error("kronecker_product: dimension overflow");
    }
    Matrix c(p * r, q * s);
    for (std::size_t bi = 0; bi < r; ++bi)
        for (std::size_t bj = 0; bj < s; ++bj) {
            const double scale = b(bi, bj);
            if (scale == 0.0) continue;
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < q; ++j)
                    c(bi * p + i, bj * q + j) = scale * a(i, j);
        }
    return c;
}

/// Kronecker sum A (+) B = A (x) I_m + I_n (x) B (A is n x n, B is m x m),
/// using the same product convention as kronecker_product: an m x m grid of
/// n x n blocks, diagonal block l = A + b_ll * I, off-diagonal block
/// (l, k) = b_lk * I. The spectrum of the result is the sumset
/// { alpha_i + beta_l } of the factor spectra.
inline Matrix kronecker_sum(const Matrix& a, const Matrix& b) {
    if (!a.is_square() || !b.is_square())
        throw std::invalid_argument("kronecker_sum: inputs must be square");
    const std::size_t n = a.rows();
    const std::size_t m = b.rows();
    Matrix c(n * m, n * m);
    for (std::size_t l = 0; l < m; ++l) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                c(l * n + i, l * n + j) = a(i, j);
        for (std::size_t i = 0; i < n; ++i)
            c(l * n + i, l * n + i) += b(l, l);
        for (std::size_t k = 0; k < m; ++k) {
            if (k == l) continue;
            const double eps = b(l, k);
            if (eps == 0.0) continue;
            for (std::size_t i = 0; i < n; ++i)
                c(l * n + i, k * n + i) = eps;
        }
    }
    return c;
}

}  // namespace kuraplex
