#pragma once

/**
 * @file eisenstein.hpp
 * @brief Fourier coefficients of the degree 2 Siegel-Eisenstein series
 * E_{(N0,N1,N2)} of even weight k >= 4 and squarefree level N = N0 N1 N2
 * with trivial character, together with the Hecke operator actions on
 * Fourier coefficients that are used to cross-check them.
 *
 * The series E_{(N0,N1,N2)} is the member of the natural basis that takes
 * the value 1 at the 0-cusp where the cusp matrix has rank i modulo every
 * prime dividing N_i, and 0 at every other 0-cusp.
 */

#include "siegel/classnumbers.hpp"
#include "siegel/exactmath.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace siegel {

class InvalidSpecError : public InputError {
public:
    using InputError::InputError;
};

class InvalidMatrixError : public InputError {
public:
    using InputError::InputError;
};

/// 2x2 integer matrix ((a, b), (c, d)).
struct IntMatrix2 {
    std::int64_t a, b, c, d;
};

/**
 * Half-integral symmetric matrix T = ((m, r/2), (r/2, n)), stored as the
 * integer triple (m, r, n); half-integrality is structural.
 */
class HalfIntegralMatrix {
public:
    constexpr HalfIntegralMatrix() = default;
    constexpr HalfIntegralMatrix(std::int64_t m, std::int64_t r, std::int64_t n) : m_(m), r_(r), n_(n) {}

    constexpr std::int64_t m() const { return m_; }
    constexpr std::int64_t r() const { return r_; }
    constexpr std::int64_t n() const { return n_; }

    /// 4mn - r^2
    constexpr std::int64_t discriminant() const { return 4 * m_ * n_ - r_ * r_; }

    /// gcd(m, n, r); 0 for the zero matrix.
    std::int64_t content() const { return gcd3(m_, n_, r_); }

    constexpr bool is_zero() const { return m_ == 0 && r_ == 0 && n_ == 0; }
    constexpr bool is_positive_semidefinite() const { return m_ >= 0 && n_ >= 0 && discriminant() >= 0; }
    constexpr bool is_positive_definite() const { return m_ > 0 && discriminant() > 0; }
    /// |r| <= m <= n
    constexpr bool is_reduced() const { return (r_ < 0 ? -r_ : r_) <= m_ && m_ <= n_; }

    constexpr HalfIntegralMatrix scaled(std::int64_t c) const { return {c * m_, c * r_, c * n_}; }

    /// T[U] = tU T U.
    constexpr HalfIntegralMatrix transformed(const IntMatrix2& u) const {
        return {m_ * u.a * u.a + r_ * u.a * u.c + n_ * u.c * u.c,
                2 * m_ * u.a * u.b + r_ * (u.a * u.d + u.b * u.c) + 2 * n_ * u.c * u.d,
                m_ * u.b * u.b + r_ * u.b * u.d + n_ * u.d * u.d};
    }

    /// T / q when that is still half-integral.
    constexpr std::optional<HalfIntegralMatrix> divided(std::int64_t q) const {
        if (m_ % q != 0 || r_ % q != 0 || n_ % q != 0) return std::nullopt;
        return HalfIntegralMatrix{m_ / q, r_ / q, n_ / q};
    }

    friend constexpr auto operator<=>(const HalfIntegralMatrix&, const HalfIntegralMatrix&) = default;

    friend std::ostream& operator<<(std::ostream& os, const HalfIntegralMatrix& t) {
        return os << '(' << t.m_ << ',' << t.r_ << ',' << t.n_ << ')';
    }

private:
    std::int64_t m_ = 0;
    std::int64_t r_ = 0;
    std::int64_t n_ = 0;
};

/// Multiplicative partition (N0, N1, N2) of a squarefree level N.
class LevelPartition {
public:
    LevelPartition(std::int64_t n0, std::int64_t n1, std::int64_t n2) : parts_{n0, n1, n2} {
        if (n0 < 1 || n1 < 1 || n2 < 1) throw InvalidSpecError("partition entries must be positive");
        const std::int64_t level = n0 * n1 * n2;
        if (!is_squarefree(level))
            throw InvalidSpecError("partition product " + std::to_string(level) + " is not squarefree");
    }

    std::int64_t operator[](int rank) const { return parts_.at(static_cast<std::size_t>(rank)); }
    std::int64_t level() const { return parts_[0] * parts_[1] * parts_[2]; }

    /// Rank of the cusp matrix modulo p, i.e. the i with p | N_i.
    int rank_at(std::int64_t p) const {
        for (int i = 0; i < 3; ++i)
            if (parts_[i] % p == 0) return i;
        throw InputError("rank_at: " + std::to_string(p) + " does not divide the level");
    }

    /// The partition of level Np obtained by multiplying N_rank by p.
    LevelPartition extended(int rank, std::int64_t p) const {
        auto parts = parts_;
        parts.at(static_cast<std::size_t>(rank)) *= p;
        return {parts[0], parts[1], parts[2]};
    }

    /// True for (N, 1, 1), the series that is 1 at infinity.
    bool is_infinity_cusp() const { return parts_[1] == 1 && parts_[2] == 1; }

    friend auto operator<=>(const LevelPartition&, const LevelPartition&) = default;

    friend std::ostream& operator<<(std::ostream& os, const LevelPartition& p) {
        return os << '(' << p.parts_[0] << ',' << p.parts_[1] << ',' << p.parts_[2] << ')';
    }

private:
    std::array<std::int64_t, 3> parts_;
};

/// All 3^omega(N) partitions of a squarefree N, in increasing order.
inline std::vector<LevelPartition> level_partitions(std::int64_t N) {
    if (N < 1 || !is_squarefree(N)) throw InvalidSpecError("level must be a squarefree positive integer");
    std::vector<LevelPartition> out{LevelPartition(1, 1, 1)};
    for (const std::int64_t p : prime_divisors(N)) {
        std::vector<LevelPartition> next;
        for (const auto& part : out)
            for (int i = 0; i < 3; ++i) next.push_back(part.extended(i, p));
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Weight and cusp of one series in the natural basis.
class EisensteinSpec {
public:
    EisensteinSpec(int weight, LevelPartition partition) : weight_(weight), partition_(partition) {
        if (weight < 4 || weight % 2 != 0)
            throw InvalidSpecError("weight must be even and at least 4, got " + std::to_string(weight));
    }

    int weight() const { return weight_; }
    const LevelPartition& partition() const { return partition_; }
    std::int64_t level() const { return partition_.level(); }

    EisensteinSpec with_partition(LevelPartition p) const { return {weight_, p}; }

private:
    int weight_;
    LevelPartition partition_;
};

/// p-local data of a definite T: u = ord_p(e), v = ord_p(f), chi = chi_D(p).
struct LocalOrders {
    std::int64_t p;
    int u;
    int v;
    int chi;
};

// ---------------------------------------------------------------------------
// Local factors

/// upsilon_i(p, u) for singular nonzero T.
inline Rational upsilon_local(int rank, std::int64_t p, int u, int k) {
    if (rank < 0 || rank > 2) throw InputError("upsilon_local: rank index must be 0, 1 or 2");
    if (u < 0) throw InputError("upsilon_local: u must be non-negative");
    if (rank == 2) return 0;
    const Rational top = rpow(p, (u + 1) * (k - 1));
    const Rational rank1 = top * p / (rpow(p, k) - 1);
    if (rank == 1) return rank1;
    return (top - 1) / (rpow(p, k - 1) - 1) - rank1;
}

/// psi_i(p, u, v) for positive definite T.
inline Rational psi_local(int rank, const LocalOrders& o, int k) {
    if (rank < 0 || rank > 2) throw InputError("psi_local: rank index must be 0, 1 or 2");
    if (o.u < 0 || o.v < o.u) throw InputError("psi_local: need 0 <= u <= v");
    const std::int64_t p = o.p;
    auto P = [p](int e) { return rpow(p, e); };

    const Rational lead = P(2 * k - 3) - o.chi * P(k - 2);
    const Rational tail = o.chi * P(k - 2) - 1;
    const Rational pv = P(o.v * (2 * k - 3));
    const Rational pvu = P((o.v - o.u) * (2 * k - 3)) * P(o.u * (k - 1));
    const Rational pu = P(o.u * (k - 1));

    const Rational a = P(2 * k - 3) - 1;  // p^{2k-3} - 1
    const Rational b = P(2 * k - 2) - 1;
    const Rational c = P(k) - 1;
    const Rational d = P(k - 2) - 1;
    const Rational g = P(k - 1) - 1;

    switch (rank) {
        case 2:
            return lead * pv * P(k + 1) / (b * c);
        case 1:
            return lead * (pv * P(k - 1) * (P(2) - 1) / (b * c * d) - pvu * (g * p) / (a * c * d)) +
                   tail * pu * P(k) / (a * c);
        default:
            return lead * (pv * P(k - 2) * (p - 1) / (a * b * d) - pvu * (p - 1) / (a * c * d)) +
                   tail * (pu * P(k - 1) * (p - 1) / (a * c * g) - 1 / (a * g));
    }
}

// ---------------------------------------------------------------------------
// Fourier coefficients

inline Rational coefficient(const EisensteinSpec& spec, const HalfIntegralMatrix& T) {
    if (!T.is_positive_semidefinite()) {
        std::ostringstream msg;
        msg << "coefficient: T = " << T << " is not positive semidefinite";
        throw InvalidMatrixError(msg.str());
    }
    const auto& part = spec.partition();
    if (T.is_zero()) return part.is_infinity_cusp() ? 1 : 0;

    const int k = spec.weight();
    const std::int64_t N = part.level();
    const std::int64_t e = T.content();
    const std::int64_t delta = T.discriminant();

    if (delta == 0) {
        Rational local = 1;
        for (int i = 0; i < 3; ++i)
            for (const std::int64_t p : prime_divisors(part[i])) local *= upsilon_local(i, p, valuation(p, e), k);
        if (local == 0) return 0;
        Integer sum = 0;
        for (const std::int64_t d : divisors(e))
            if (std::gcd(d, N) == 1) sum += ipow(d, k - 1);
        return local * 2 / zeta_negative(k) * Rational(sum);
    }

    const auto [D, f] = decompose_discriminant(delta);
    Rational local = 1;
    for (int i = 0; i < 3; ++i)
        for (const std::int64_t p : prime_divisors(part[i]))
            local *= psi_local(i, {p, valuation(p, e), valuation(p, f), kronecker_symbol(D, p)}, k);
    if (local == 0) return 0;
    Rational sum = 0;
    for (const std::int64_t d : divisors(e))
        if (std::gcd(d, N) == 1) sum += Rational(ipow(d, k - 1)) * cohen_h_level(N, k, delta / (d * d));
    return local * 2 / (zeta_negative(k) * zeta_negative(2 * k - 2)) * sum;
}

/**
 * Given a(T), a(pT), a(p^2 T) for E_{(N0,N1,N2)} with p not dividing N,
 * returns the T-th coefficients of E_{(pN0,N1,N2)}, E_{(N0,pN1,N2)} and
 * E_{(N0,N1,pN2)}. This goes through the Hecke relations only, so it is an
 * independent route to the level Np coefficients.
 */
inline std::array<Rational, 3> lemma31_lift(const std::array<Rational, 3>& a, std::int64_t p, int k) {
    auto P = [p](int e) { return rpow(p, e); };
    const Rational den = (P(k) - 1) * (P(2 * k - 2) - 1);
    const Rational& aT = a[0];
    const Rational& apT = a[1];
    const Rational& ap2T = a[2];
    const Rational q = P(4 - k);
    return {
        ((P(3 * k - 2) + P(2 * k - 1) - P(2 * k - 2) + P(k + 1) - P(k) - p + 1) * aT -
         (P(2 * k - 1) + P(k + 1) + P(2) - p) * apT + P(2) * ap2T) /
            den,
        ((-P(2 * k - 1) - P(k + 1) - P(3) + p) * aT +
         (P(2 * k - 1) + P(k + 1) + P(3) + P(2) - p + q) * apT - (P(2) + q) * ap2T) /
            den,
        (P(3) * aT - (P(3) + q) * apT + q * ap2T) / den,
    };
}

// ---------------------------------------------------------------------------
// Hecke operators on Fourier coefficients

/// The p+1 matrices T[(1 0; alpha p)] (alpha mod p) and T[(p 0; 0 1)].
inline std::vector<HalfIntegralMatrix> hecke_transforms(const HalfIntegralMatrix& T, std::int64_t p) {
    std::vector<HalfIntegralMatrix> out;
    out.reserve(static_cast<std::size_t>(p + 1));
    for (std::int64_t alpha = 0; alpha < p; ++alpha) out.push_back(T.transformed({1, 0, alpha, p}));
    out.push_back(T.transformed({p, 0, 0, 1}));
    return out;
}

namespace detail {

inline void require_prime(std::int64_t p, const char* who) {
    if (!is_prime(p)) throw InputError(std::string(who) + ": p must be prime");
}

}  // namespace detail

/// a(T; E | T(p)) for p not dividing the level; non-half-integral terms count as 0.
inline Rational hecke_Tp(const EisensteinSpec& spec, std::int64_t p, const HalfIntegralMatrix& T) {
    detail::require_prime(p, "hecke_Tp");
    if (spec.level() % p == 0) throw InputError("hecke_Tp: p must not divide the level");
    Rational value = coefficient(spec, T.scaled(p));
    Rational middle = 0;
    for (const auto& t : hecke_transforms(T, p))
        if (const auto reduced = t.divided(p)) middle += coefficient(spec, *reduced);
    value += rpow(p, spec.weight() - 2) * middle;
    if (const auto reduced = T.divided(p)) value += rpow(p, 2 * spec.weight() - 3) * coefficient(spec, *reduced);
    return value;
}

/// a(T; E | U(p)) = a(pT; E) for p dividing the level.
inline Rational hecke_Up(const EisensteinSpec& spec, std::int64_t p, const HalfIntegralMatrix& T) {
    detail::require_prime(p, "hecke_Up");
    if (spec.level() % p != 0) throw InputError("hecke_Up: p must divide the level");
    return coefficient(spec, T.scaled(p));
}

/// a(T; E | U_1(p^2)) for p dividing the level.
inline Rational hecke_U1p2(const EisensteinSpec& spec, std::int64_t p, const HalfIntegralMatrix& T) {
    detail::require_prime(p, "hecke_U1p2");
    if (spec.level() % p != 0) throw InputError("hecke_U1p2: p must divide the level");
    Rational value = 0;
    for (const auto& t : hecke_transforms(T, p)) value += coefficient(spec, t);
    return value;
}

/// Eigenvalue of T(p) on every E_{(N0,N1,N2)} with p not dividing N.
inline Rational tp_eigenvalue(std::int64_t p, int k) {
    return rpow(p, 2 * k - 3) + rpow(p, k - 1) + rpow(p, k - 2) + 1;
}

/**
 * Action of U(p) on the level Np series E_{(pN0,N1,N2)}, E_{(N0,pN1,N2)},
 * E_{(N0,N1,pN2)}: row i holds the coefficients of E_i | U(p) in that basis.
 */
inline std::array<std::array<Rational, 3>, 3> up_action(std::int64_t p, int k) {
    const Rational inv = 1 - Rational(1, p);
    return {{
        {Rational(1), inv, inv},
        {Rational(0), rpow(p, k - 1), rpow(p, k - 1) - rpow(p, k - 3)},
        {Rational(0), Rational(0), rpow(p, 2 * k - 3)},
    }};
}

/// Same layout as up_action, for U_1(p^2).
inline std::array<std::array<Rational, 3>, 3> u1p2_action(std::int64_t p, int k) {
    return {{
        {Rational(p + 1), (rpow(p, k - 1) + 1) * (1 - Rational(1, p)), 1 - Rational(1, p * p)},
        {Rational(0), rpow(p, 2 * k - 2) + p, (rpow(p, k - 2) + 1) * (p - Rational(1, p))},
        {Rational(0), Rational(0), rpow(p, 2 * k - 2) + rpow(p, 2 * k - 3)},
    }};
}

// ---------------------------------------------------------------------------
// Enumeration of T

/// Reduced positive definite T (|r| <= m <= n) with discriminant at most max_delta.
inline std::vector<HalfIntegralMatrix> reduced_definite_forms(std::int64_t max_delta) {
    std::vector<HalfIntegralMatrix> out;
    for (std::int64_t m = 1; 3 * m * m <= max_delta; ++m)
        for (std::int64_t r = -m; r <= m; ++r)
            for (std::int64_t n = m; 4 * m * n - r * r <= max_delta; ++n) out.emplace_back(m, r, n);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return std::tuple(x.discriminant(), x) < std::tuple(y.discriminant(), y);
    });
    return out;
}

/// (e, 0, 0) for e = 1..max_content.
inline std::vector<HalfIntegralMatrix> singular_forms(std::int64_t max_content) {
    std::vector<HalfIntegralMatrix> out;
    for (std::int64_t e = 1; e <= max_content; ++e) out.emplace_back(e, 0, 0);
    return out;
}

}  // namespace siegel
