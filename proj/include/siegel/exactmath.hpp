#pragma once

/**
 * @file exactmath.hpp
 * @brief Exact integer/rational arithmetic and the elementary number theory
 * (Bernoulli numbers, quadratic characters, L-values at negative integers,
 * discriminant factorization, divisor functions) used by the rest of the
 * library.
 *
 * Nothing in here touches floating point. All functions are pure; the two
 * memo tables are guarded by a mutex so every entry point may be called
 * concurrently.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace siegel {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised for arguments outside an operation's domain.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an argument is valid but too large for the chosen algorithm.
class SizeGuardError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Trial division is used for factoring; inputs must not exceed this bound.
inline constexpr std::int64_t kFactorizeLimit = std::int64_t{1} << 48;

struct PrimePower {
    std::int64_t prime;
    int exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization, primes strictly increasing.
using Factorization = std::vector<PrimePower>;

/// -delta = D * f^2 with D a fundamental discriminant and f >= 1.
struct FundamentalDecomposition {
    std::int64_t discriminant;
    std::int64_t conductor;
    friend bool operator==(const FundamentalDecomposition&,
                           const FundamentalDecomposition&) = default;
};

// ---------------------------------------------------------------------------
// Integer helpers

inline Integer ipow(std::int64_t base, unsigned exponent) {
    return boost::multiprecision::pow(Integer(base), exponent);
}

/// base^exponent for possibly negative exponents.
inline Rational rpow(std::int64_t base, int exponent) {
    if (exponent >= 0) return Rational(ipow(base, static_cast<unsigned>(exponent)));
    if (base == 0) throw InputError("rpow: zero to a negative power");
    return Rational(Integer(1), ipow(base, static_cast<unsigned>(-exponent)));
}

inline std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
    return std::gcd(std::gcd(a, b), c);
}

inline Factorization factorize(std::int64_t n) {
    if (n < 1) throw InputError("factorize: argument must be positive, got " + std::to_string(n));
    if (n > kFactorizeLimit)
        throw SizeGuardError("factorize: " + std::to_string(n) + " exceeds the trial-division bound 2^48");
    Factorization out;
    for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

/// Positive divisors in increasing order.
inline std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> out{1};
    for (const auto& [p, e] : factorize(n)) {
        const std::size_t existing = out.size();
        std::int64_t pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < existing; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (const auto& pp : factorize(n)) out.push_back(pp.prime);
    return out;
}

inline int moebius(std::int64_t n) {
    int sign = 1;
    for (const auto& pp : factorize(n)) {
        if (pp.exponent > 1) return 0;
        sign = -sign;
    }
    return sign;
}

inline bool is_squarefree(std::int64_t n) { return moebius(n) != 0; }

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    const auto f = factorize(n);
    return f.size() == 1 && f.front().exponent == 1;
}

/// Exponent of the prime p in n (n != 0).
inline int valuation(std::int64_t p, std::int64_t n) {
    if (p < 2) throw InputError("valuation: p must be a prime");
    if (n == 0) throw InputError("valuation: n must be nonzero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// ---------------------------------------------------------------------------
// Bernoulli numbers

namespace detail {

inline Integer binomial(int n, int k) {
    Integer c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

struct BernoulliTable {
    std::mutex lock;
    std::vector<Rational> values{Rational(1)};
};

inline BernoulliTable& bernoulli_table() {
    static BernoulliTable table;
    return table;
}

}  // namespace detail

/// B_n with B_1 = -1/2, via sum_{j=0}^{n} C(n+1, j) B_j = 0.
inline Rational bernoulli(int n) {
    if (n < 0) throw InputError("bernoulli: negative index");
    auto& table = detail::bernoulli_table();
    std::lock_guard guard(table.lock);
    auto& b = table.values;
    while (static_cast<int>(b.size()) <= n) {
        const int m = static_cast<int>(b.size());
        Rational acc = 0;
        if (m >= 3 && m % 2 == 1) {
            b.emplace_back(0);
            continue;
        }
        for (int j = 0; j < m; ++j)
            if (b[j] != 0) acc += Rational(detail::binomial(m + 1, j)) * b[j];
        b.push_back(-acc / (m + 1));
    }
    return b[n];
}

/// zeta(1 - k) for k >= 1.
inline Rational zeta_negative(int k) {
    if (k <= 0) throw InputError("zeta_negative: k must be positive");
    if (k == 1) return Rational(-1, 2);
    return -bernoulli(k) / k;
}

/// B_n(x) = sum_j C(n, j) B_j x^{n-j}.
inline Rational bernoulli_polynomial(int n, const Rational& x) {
    Rational acc = 0;
    Rational xp = 1;
    for (int j = n; j >= 0; --j) {
        acc += Rational(detail::binomial(n, j)) * bernoulli(j) * xp;
        xp *= x;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Quadratic characters and discriminants

/// Kronecker symbol (D / m) for any integer D and m >= 1.
inline int kronecker_symbol(std::int64_t D, std::int64_t m) {
    if (m < 1) throw InputError("kronecker_symbol: m must be positive");
    int result = 1;
    if (m % 2 == 0) {
        if (D % 2 == 0) return 0;
        int v = 0;
        while (m % 2 == 0) {
            m /= 2;
            ++v;
        }
        const std::int64_t d8 = floor_mod(D, 8);
        if (v % 2 == 1 && (d8 == 3 || d8 == 5)) result = -result;
    }
    // Jacobi symbol (a / m), m odd.
    std::int64_t a = floor_mod(D, m);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const std::int64_t m8 = m % 8;
            if (m8 == 3 || m8 == 5) result = -result;
        }
        std::swap(a, m);
        if (a % 4 == 3 && m % 4 == 3) result = -result;
        a %= m;
    }
    return m == 1 ? result : 0;
}

inline bool is_fundamental_discriminant(std::int64_t D) {
    if (D == 0) return false;
    if (D == 1) return true;
    const std::int64_t a = D < 0 ? -D : D;
    if (floor_mod(D, 4) == 1) return is_squarefree(a);
    if (floor_mod(D, 4) != 0) return false;
    const std::int64_t q = D / 4;
    const std::int64_t q4 = floor_mod(q, 4);
    return (q4 == 2 || q4 == 3) && is_squarefree(q < 0 ? -q : q);
}

/// Writes -delta = D f^2 with D fundamental.
inline FundamentalDecomposition decompose_discriminant(std::int64_t delta) {
    if (delta <= 0) throw InputError("decompose_discriminant: delta must be positive");
    if (delta % 4 == 1 || delta % 4 == 2)
        throw InputError("decompose_discriminant: delta must be 0 or 3 mod 4, got " + std::to_string(delta));
    std::int64_t core = 1;
    std::int64_t root = 1;
    for (const auto& [p, e] : factorize(delta)) {
        for (int i = 0; i < e / 2; ++i) root *= p;
        if (e % 2 == 1) core *= p;
    }
    if (core % 4 == 3) return {-core, root};
    // core is 1 or 2 mod 4 here, which forces root to be even
    return {-4 * core, root / 2};
}

// ---------------------------------------------------------------------------
// L-values of quadratic characters at non-positive integers

namespace detail {

struct LValueTable {
    std::mutex lock;
    std::map<std::pair<int, std::int64_t>, Rational> values;
};

inline LValueTable& generalized_bernoulli_table() {
    static LValueTable table;
    return table;
}

inline Rational generalized_bernoulli_uncached(int n, std::int64_t D) {
    const std::int64_t F = D < 0 ? -D : D;
    // B_{n,chi} = F^{n-1} sum_a chi(a) B_n(a/F)
    //           = F^{-1} sum_j C(n,j) B_j F^j sum_a chi(a) a^{n-j}
    std::vector<Integer> power_sums(n + 1, Integer(0));
    for (std::int64_t a = 1; a <= F; ++a) {
        const int chi = kronecker_symbol(D, a);
        if (chi == 0) continue;
        Integer ap = 1;
        for (int i = 0; i <= n; ++i) {
            if (chi > 0)
                power_sums[i] += ap;
            else
                power_sums[i] -= ap;
            ap *= a;
        }
    }
    Rational acc = 0;
    Integer Fj = 1;
    for (int j = 0; j <= n; ++j) {
        if (power_sums[n - j] != 0)
            acc += Rational(binomial(n, j)) * bernoulli(j) * Rational(Fj * power_sums[n - j]);
        Fj *= F;
    }
    return acc / F;
}

}  // namespace detail

/// Generalized Bernoulli number B_{n, chi_D}; D = 1 gives the trivial character.
inline Rational generalized_bernoulli(int n, std::int64_t D) {
    if (n < 1) throw InputError("generalized_bernoulli: n must be positive");
    if (!is_fundamental_discriminant(D))
        throw InputError("generalized_bernoulli: " + std::to_string(D) + " is not a fundamental discriminant");
    auto& table = detail::generalized_bernoulli_table();
    {
        std::lock_guard guard(table.lock);
        if (auto it = table.values.find({n, D}); it != table.values.end()) return it->second;
    }
    Rational value = detail::generalized_bernoulli_uncached(n, D);
    std::lock_guard guard(table.lock);
    table.values.emplace(std::pair{n, D}, value);
    return value;
}

/// L(1 - n, chi_D) = -B_{n, chi_D} / n.
inline Rational l_negative(int n, std::int64_t D) { return -generalized_bernoulli(n, D) / n; }

// ---------------------------------------------------------------------------
// Formatting

/// Always "num/den", including "/1" for integers.
inline std::string to_fraction_string(const Rational& q) {
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Rational parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(text));
        return Rational(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw InputError("parse_fraction: malformed rational '" + text + "'");
    }
}

inline bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

}  // namespace siegel
