#pragma once

#include <stdexcept>

#include "kuraplex/matrix.hpp"
#include "kuraplex/rng.hpp"

namespace kuraplex {

/// Undirected Erdos-Renyi graph G(n, p): one uniform draw per unordered
/// pair (i, j), i < j, in row-major order, so a given generator state always
/// yields the same graph. Zero diagonal, exactly symmetric.
inline Matrix gen_erdos_renyi(std::size_t n, double p, SplitMix64& rng) {
    if (n < 1) throw std::invalid_argument("gen_erdos_renyi: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_erdos_renyi: p must be in [0, 1]");
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) a(i, j) = a(j, i) = 1.0;
    return a;
}

/// Ring with periodic boundary conditions: node i connects to i-1 and i+1
/// mod n. For n = 2 this degenerates to a single edge of weight 1 (simple
/// graph reading, not a doubled edge); for n = 3 it is the triangle K3.
inline Matrix gen_ring(std::size_t n) {
    if (n < 2) throw std::invalid_argument("gen_ring: n must be >= 2");
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, (i + 1) % n) = 1.0;
        a((i + 1) % n, i) = 1.0;
    }
    return a;
}

/// Circulant graph: node i connects to i +- 1, ..., i +- half_width mod n.
/// Every node has degree 2 * half_width; half_width = 1 is gen_ring.
inline Matrix gen_circulant(std::size_t n, std::size_t half_width) {
    if (half_width < 1 || 2 * half_width > n - 1)
        throw std::invalid_argument("gen_circulant: need 1 <= half_width <= (n-1)/2");
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 1; d <= half_width; ++d) {
            a(i, (i + d) % n) = 1.0;
            a((i + d) % n, i) = 1.0;
        }
    return a;
}

/// Complete graph K_n.
inline Matrix gen_complete(std::size_t n) {
    if (n < 2) throw std::invalid_argument("gen_complete: n must be >= 2");
    Matrix a(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 0.0;
    return a;
}

}  // namespace kuraplex
