#pragma once

/**
 * @file classnumbers.hpp
 * @brief Cohen's function H(k-1, M), its level-N restriction H_N, and the
 * local correction factor C_{p,D}(v) relating H_N to H_{Np}.
 *
 * Writing M = -D f^2 with D fundamental,
 *
 *   H_N(M) = L(2-k, chi_D) sum_{g | f, (g,N)=1} mu(g) chi_D(g) g^{k-2}
 *                          sum_{h | f/g, (h,N)=1} h^{2k-3}
 *
 * and H = H_1.
 */

#include "siegel/exactmath.hpp"

#include <cstdint>
#include <string>

namespace siegel {

struct ClassNumberQuery {
    std::int64_t M;
    int k;
    std::int64_t N = 1;

    void validate() const {
        if (M <= 0) throw InputError("class number: M must be positive, got " + std::to_string(M));
        if (M % 4 == 1 || M % 4 == 2)
            throw InputError("class number: M must be 0 or 3 mod 4, got " + std::to_string(M));
        if (k < 4 || k % 2 != 0) throw InputError("class number: k must be even and >= 4");
        if (N < 1 || !is_squarefree(N)) throw InputError("class number: level must be squarefree");
    }
};

inline Rational cohen_h_level(const ClassNumberQuery& q) {
    q.validate();
    const auto [D, f] = decompose_discriminant(q.M);
    Integer sum = 0;
    for (const std::int64_t g : divisors(f)) {
        if (std::gcd(g, q.N) != 1) continue;
        const int sign = moebius(g) * kronecker_symbol(D, g);
        if (sign == 0) continue;
        Integer inner = 0;
        for (const std::int64_t h : divisors(f / g))
            if (std::gcd(h, q.N) == 1) inner += ipow(h, 2 * q.k - 3);
        sum += sign * ipow(g, q.k - 2) * inner;
    }
    return l_negative(q.k - 1, D) * Rational(sum);
}

inline Rational cohen_h_level(std::int64_t N, int k, std::int64_t M) {
    return cohen_h_level(ClassNumberQuery{M, k, N});
}

inline Rational cohen_h(int k, std::int64_t M) { return cohen_h_level(ClassNumberQuery{M, k, 1}); }

/// C_{p,D}(v) = sum_{j<=v} p^{j(2k-3)} - chi_D(p) p^{k-2} sum_{j<v} p^{j(2k-3)}.
inline Rational c_factor(std::int64_t p, std::int64_t D, int v, int k) {
    if (v < 0) throw InputError("c_factor: v must be non-negative");
    if (!is_prime(p)) throw InputError("c_factor: p must be prime");
    Integer head = 0;
    Integer tail = 0;
    for (int j = 0; j <= v; ++j) {
        const Integer term = ipow(p, j * (2 * k - 3));
        head += term;
        if (j < v) tail += term;
    }
    return Rational(head - kronecker_symbol(D, p) * ipow(p, k - 2) * tail);
}

}  // namespace siegel
