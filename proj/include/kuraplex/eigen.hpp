#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kuraplex/matrix.hpp"

namespace kuraplex {

/// Eigenvalues (ascending) and matching eigenvectors (column k of `vectors`
/// pairs with `values[k]`) of a real symmetric matrix.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;
};

namespace detail {

inline double offdiagonal_mass(const Matrix& a) {
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < a.rows(); ++p)
        for (std::size_t q = p + 1; q < a.cols(); ++q)
            s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
}

}  // namespace detail

/// Dense symmetric eigensolver: cyclic Jacobi plane rotations, sweeping the
/// upper triangle until the off-diagonal Frobenius mass drops below
/// `tol * ||A||_F`. Plenty for the matrix sizes this library works with
/// (order <= a few thousand) and free of external dependencies.
///
/// Throws std::invalid_argument when the input is not symmetric to 1e-12
/// relative, since silent symmetrization would mask assembly bugs upstream.
inline EigenDecomposition eigh_sym(const Matrix& a_in, double tol = 1e-12,
                                   std::size_t max_sweeps = 100) {
    if (!a_in.is_square()) throw std::invalid_argument("eigh_sym: matrix must be square");
    if (!a_in.all_finite()) throw std::invalid_argument("eigh_sym: non-finite entries");
    if (a_in.symmetry_defect() > 1e-12 * std::max(1.0, a_in.max_abs()))
        throw std::invalid_argument("eigh_sym: matrix not symmetric within 1e-12 relative");

    const std::size_t n = a_in.rows();
    Matrix a = a_in;
    Matrix v = Matrix::identity(n);
    const double frob = a.frobenius_norm();
    const double target = tol * frob;

    if (n <= 1 || frob == 0.0) {
        EigenDecomposition out;
        out.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
        out.vectors = v;
        return out;
    }

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        if (detail::offdiagonal_mass(a) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Skip rotations that cannot move the off-diagonal mass.
                if (std::abs(apq) < 1e-300) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p), arq = a(r, q);
                        a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                        a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                    }
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    // Ascending eigenvalues; stable sort keeps a deterministic tie order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

/// All eigenvalues of a symmetric matrix, sorted ascending.
inline std::vector<double> spectrum_sym(const Matrix& a, double tol = 1e-12) {
    return eigh_sym(a, tol).values;
}

/// Rebuild V diag(values) V^T; used by tests to bound eigensolver error.
inline Matrix reconstruct_from_eigenpairs(const EigenDecomposition& ed) {
    const std::size_t n = ed.values.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                acc += ed.vectors(i, k) * ed.values[k] * ed.vectors(j, k);
            m(i, j) = acc;
        }
    return m;
}

}  // namespace kuraplex
