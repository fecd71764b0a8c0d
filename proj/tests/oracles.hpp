#pragma once

// Independent reference computations used only by the tests. None of these
// call into the code paths they are used to check.

#include "siegel/exactmath.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cstdint>
#include <vector>

namespace oracle {

using siegel::Integer;
using siegel::Rational;

/// Akiyama-Tanigawa; returns B_n with B_1 = +1/2.
inline Rational bernoulli_akiyama_tanigawa(int n) {
    std::vector<Rational> a(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        a[static_cast<std::size_t>(m)] = Rational(1, m + 1);
        for (int j = m; j >= 1; --j)
            a[static_cast<std::size_t>(j - 1)] = j * (a[static_cast<std::size_t>(j - 1)] - a[static_cast<std::size_t>(j)]);
    }
    return a[0];
}

/// Legendre symbol by Euler's criterion, p an odd prime below 2^31.
inline int legendre_euler(std::int64_t a, std::int64_t p) {
    std::int64_t base = ((a % p) + p) % p;
    if (base == 0) return 0;
    std::int64_t result = 1;
    std::int64_t e = (p - 1) / 2;
    while (e > 0) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return result == 1 ? 1 : -1;
}

/// Kronecker symbol (D/m) assembled from Euler's criterion and the 2-rule over the factorization of m.
inline int kronecker_by_factoring(std::int64_t D, std::int64_t m) {
    int result = 1;
    std::int64_t rest = m;
    for (std::int64_t p = 2; p <= rest; ++p) {
        while (rest % p == 0) {
            rest /= p;
            int local;
            if (p == 2) {
                const std::int64_t d8 = ((D % 8) + 8) % 8;
                local = (D % 2 == 0) ? 0 : (d8 == 1 || d8 == 7) ? 1 : -1;
            } else {
                local = legendre_euler(D, p);
            }
            result *= local;
        }
    }
    return result;
}

/// Class number h(D) of discriminant D < 0 by counting reduced primitive forms.
inline std::int64_t class_number(std::int64_t D) {
    std::int64_t h = 0;
    for (std::int64_t a = 1; 3 * a * a <= -D; ++a)
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            const std::int64_t num = b * b - D;
            if (num % (4 * a) != 0) continue;
            const std::int64_t c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
            ++h;
        }
    return h;
}

using Real = boost::multiprecision::cpp_dec_float_50;

/// Hurwitz zeta zeta(s, x) for real s > 1, 0 < x <= 1, by Euler-Maclaurin.
inline Real hurwitz_zeta(int s, const Real& x) {
    const int head = 40;
    Real sum = 0;
    for (int j = 0; j < head; ++j) sum += pow(Real(j) + x, -s);
    const Real big = Real(head) + x;
    sum += pow(big, 1 - s) / (s - 1) + pow(big, -s) / 2;
    Real rising = s;  // s (s+1) ... (s + 2j - 2)
    Real factorial = 2;
    for (int j = 1; j <= 20; ++j) {
        sum += boost::math::bernoulli_b2n<Real>(j) / factorial * rising * pow(big, -s - 2 * j + 1);
        rising *= Real(s + 2 * j - 1) * Real(s + 2 * j);
        factorial *= Real(2 * j + 1) * Real(2 * j + 2);
    }
    return sum;
}

/**
 * L(1 - n, chi_D) for D < 0 fundamental and odd n >= 3, from L(n, chi_D)
 * (Hurwitz sums) and the functional equation of an odd real character.
 */
inline Real l_negative_functional_equation(int n, std::int64_t D, int (*chi)(std::int64_t, std::int64_t)) {
    const std::int64_t q = -D;
    Real l_n = 0;
    for (std::int64_t a = 1; a < q; ++a) {
        const int c = chi(D, a);
        if (c != 0) l_n += c * hurwitz_zeta(n, Real(a) / Real(q));
    }
    l_n /= pow(Real(q), n);
    const Real pi = boost::math::constants::pi<Real>();
    // Lambda(s) = (q/pi)^{(s+1)/2} Gamma((s+1)/2) L(s) is invariant under s -> 1 - s.
    const Real lam = pow(Real(q) / pi, Real(n + 1) / 2) * boost::math::tgamma(Real(n + 1) / 2) * l_n;
    return lam / (pow(Real(q) / pi, Real(2 - n) / 2) * boost::math::tgamma(Real(2 - n) / 2));
}

/// Best rational approximation with denominator <= max_den (continued fractions).
inline Rational nearest_rational(const Real& value, std::int64_t max_den) {
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Real x = value;
    for (int step = 0; step < 60; ++step) {
        const Real fl = floor(x);
        const Integer a(fl.convert_to<long long>());
        const Integer p2 = a * p1 + p0;
        const Integer q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const Real frac = x - fl;
        if (frac < Real("1e-40")) break;
        x = 1 / frac;
    }
    return Rational(p1, q1);
}

/**
 * Hilbert symbol (a, b)_p for nonzero integers by searching a primitive
 * solution of z^2 = a x^2 + b y^2 modulo p^3 (p odd) or 2^5. Arguments must
 * have p-adic valuation 0 or 1, which makes the congruence test exact.
 */
inline int hilbert_by_search(std::int64_t a, std::int64_t b, std::int64_t p) {
    const std::int64_t mod = p == 2 ? 32 : p * p * p;
    auto reduce = [mod](std::int64_t v) { return ((v % mod) + mod) % mod; };
    for (std::int64_t x = 0; x < mod; ++x)
        for (std::int64_t y = 0; y < mod; ++y)
            for (std::int64_t z = 0; z < mod; ++z) {
                if (x % p == 0 && y % p == 0 && z % p == 0) continue;
                if (reduce(a * x * x + b * y * y - z * z) == 0) return 1;
            }
    return -1;
}

}  // namespace oracle
