#pragma once

/**
 * @file lattice.hpp
 * @brief Even lattices given by Gram matrices: determinant, level,
 * character, local Hasse invariants, and the expansion of the genus theta
 * series in the natural Eisenstein basis.
 */

#include "siegel/eisenstein.hpp"
#include "siegel/exactmath.hpp"

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace siegel {

class InvalidGramError : public InputError {
public:
    using InputError::InputError;
};

/**
 * Symmetric positive definite integer matrix with even diagonal. Entries
 * are stored row-major.
 */
class GramMatrix {
public:
    GramMatrix(std::size_t size, std::vector<std::int64_t> entries) : size_(size), entries_(std::move(entries)) {
        if (size_ == 0) throw InvalidGramError("Gram matrix must be non-empty");
        if (entries_.size() != size_ * size_) throw InvalidGramError("Gram matrix entry count mismatch");
        for (std::size_t i = 0; i < size_; ++i) {
            if ((*this)(i, i) % 2 != 0) throw InvalidGramError("Gram matrix diagonal must be even");
            for (std::size_t j = 0; j < i; ++j)
                if ((*this)(i, j) != (*this)(j, i)) throw InvalidGramError("Gram matrix must be symmetric");
        }
        for (const auto& minor : leading_minors())
            if (minor <= 0) throw InvalidGramError("Gram matrix must be positive definite");
    }

    /// From (s11, s21, s22, s31, s32, s33, ...).
    static GramMatrix from_lower_triangular(std::span<const std::int64_t> v) {
        std::size_t size = 0;
        while (size * (size + 1) / 2 < v.size()) ++size;
        if (size * (size + 1) / 2 != v.size())
            throw InvalidGramError("lower-triangular data has " + std::to_string(v.size()) +
                                   " entries, not a triangular number");
        std::vector<std::int64_t> entries(size * size);
        std::size_t at = 0;
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                entries[i * size + j] = v[at];
                entries[j * size + i] = v[at];
                ++at;
            }
        return {size, std::move(entries)};
    }

    static GramMatrix diagonal(std::span<const std::int64_t> d) {
        std::vector<std::int64_t> entries(d.size() * d.size(), 0);
        for (std::size_t i = 0; i < d.size(); ++i) entries[i * d.size() + i] = d[i];
        return {d.size(), std::move(entries)};
    }

    std::size_t size() const { return size_; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * size_ + j]; }
    std::span<const std::int64_t> row(std::size_t i) const { return {entries_.data() + i * size_, size_}; }

    std::vector<std::int64_t> lower_triangular() const {
        std::vector<std::int64_t> out;
        for (std::size_t i = 0; i < size_; ++i)
            for (std::size_t j = 0; j <= i; ++j) out.push_back((*this)(i, j));
        return out;
    }

    /// x^t S y
    std::int64_t bilinear(std::span<const std::int64_t> x, std::span<const std::int64_t> y) const {
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < size_; ++i) {
            std::int64_t row_dot = 0;
            for (std::size_t j = 0; j < size_; ++j) row_dot += (*this)(i, j) * y[j];
            acc += x[i] * row_dot;
        }
        return acc;
    }

    /// Leading principal minors, computed by fraction-free elimination.
    std::vector<Integer> leading_minors() const {
        std::vector<std::vector<Integer>> a(size_, std::vector<Integer>(size_));
        for (std::size_t i = 0; i < size_; ++i)
            for (std::size_t j = 0; j < size_; ++j) a[i][j] = (*this)(i, j);
        std::vector<Integer> minors;
        Integer previous = 1;
        for (std::size_t k = 0; k < size_; ++k) {
            minors.push_back(a[k][k]);
            if (a[k][k] == 0) {
                minors.resize(size_, Integer(0));
                break;
            }
            for (std::size_t i = k + 1; i < size_; ++i)
                for (std::size_t j = k + 1; j < size_; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
            previous = a[k][k];
        }
        return minors;
    }

    Integer determinant() const { return leading_minors().back(); }

    std::vector<std::vector<Rational>> inverse() const {
        const std::size_t n = size_;
        std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) a[i][j] = (*this)(i, j);
            a[i][n + i] = 1;
        }
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = col;
            while (a[pivot][col] == 0) ++pivot;  // positive definite, so a pivot exists
            std::swap(a[pivot], a[col]);
            const Rational inv = 1 / a[col][col];
            for (auto& x : a[col]) x *= inv;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == col || a[i][col] == 0) continue;
                const Rational factor = a[i][col];
                for (std::size_t j = col; j < 2 * n; ++j) a[i][j] -= factor * a[col][j];
            }
        }
        std::vector<std::vector<Rational>> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i].assign(a[i].begin() + static_cast<std::ptrdiff_t>(n), a[i].end());
        return out;
    }

    friend bool operator==(const GramMatrix&, const GramMatrix&) = default;

private:
    std::size_t size_;
    std::vector<std::int64_t> entries_;
};

// ---------------------------------------------------------------------------
// Hilbert symbols and Hasse invariants

/// A place of Q: a prime, or infinity (stored as 0).
struct Place {
    std::int64_t prime = 0;
    static constexpr Place infinity() { return {}; }
    static Place at(std::int64_t p) {
        if (!is_prime(p)) throw InputError("Place: " + std::to_string(p) + " is not prime");
        return {p};
    }
    constexpr bool is_infinite() const { return prime == 0; }
};

namespace detail {

// Square class representative num * den of a nonzero rational.
inline Integer square_class(const Rational& q) {
    return boost::multiprecision::numerator(q) * boost::multiprecision::denominator(q);
}

inline int split_valuation(Integer& x, std::int64_t p) {
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

inline std::int64_t residue(const Integer& x, std::int64_t m) {
    Integer r = x % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

}  // namespace detail

/// Hilbert symbol (a, b)_v of nonzero rationals.
inline int hilbert_symbol(const Rational& a, const Rational& b, Place place) {
    if (a == 0 || b == 0) throw InputError("hilbert_symbol: arguments must be nonzero");
    if (place.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
    const std::int64_t p = place.prime;
    Integer u = detail::square_class(a);
    Integer w = detail::square_class(b);
    const int alpha = detail::split_valuation(u, p);
    const int beta = detail::split_valuation(w, p);
    if (p != 2) {
        int s = (alpha % 2 == 1 && beta % 2 == 1 && p % 4 == 3) ? -1 : 1;
        if (beta % 2 == 1) s *= kronecker_symbol(detail::residue(u, p), p);
        if (alpha % 2 == 1) s *= kronecker_symbol(detail::residue(w, p), p);
        return s;
    }
    const std::int64_t u8 = detail::residue(u, 8);
    const std::int64_t w8 = detail::residue(w, 8);
    auto eps = [](std::int64_t x) { return ((x - 1) / 2) % 2; };
    auto omega = [](std::int64_t x) { return ((x * x - 1) / 8) % 2; };
    const std::int64_t exponent = eps(u8) * eps(w8) + alpha * omega(w8) + beta * omega(u8);
    return exponent % 2 == 0 ? 1 : -1;
}

/// Diagonal entries of a rational diagonalization of S, eliminating in the given index order.
inline std::vector<Rational> diagonalize(const GramMatrix& S, std::span<const std::size_t> order) {
    const std::size_t n = S.size();
    if (order.size() != n) throw InputError("diagonalize: order must list every index once");
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = S(order[i], order[j]);
    std::vector<Rational> d;
    for (std::size_t k = 0; k < n; ++k) {
        const Rational pivot = a[k][k];  // nonzero: every principal minor of S is positive
        d.push_back(pivot);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            const Rational f = a[i][k] / pivot;
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return d;
}

inline std::vector<Rational> diagonalize(const GramMatrix& S) {
    std::vector<std::size_t> order(S.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return diagonalize(S, order);
}

/// prod_{i<j} (a_i, a_j)_p over a diagonalization (a_1, ..., a_n).
inline int hasse_invariant(const GramMatrix& S, std::int64_t p, std::span<const std::size_t> order) {
    const auto d = diagonalize(S, order);
    const Place place = Place::at(p);
    int s = 1;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) s *= hilbert_symbol(d[i], d[j], place);
    return s;
}

inline int hasse_invariant(const GramMatrix& S, std::int64_t p) {
    std::vector<std::size_t> order(S.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    return hasse_invariant(S, p, order);
}

// ---------------------------------------------------------------------------
// Lattice invariants

struct LatticeProfile {
    std::int64_t level = 1;
    Integer determinant;
    bool character_trivial = false;
    std::map<std::int64_t, int> hasse;           // p | level
    std::map<std::int64_t, Integer> d_powers;    // p | level -> p^{v_p(det)}
};

/// Smallest N with N S^{-1} even integral.
inline std::int64_t lattice_level(const GramMatrix& S) {
    const auto inv = S.inverse();
    Integer level = 1;
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = 0; j < S.size(); ++j) {
            const Rational entry = (i == j) ? inv[i][j] / 2 : inv[i][j];
            level = boost::multiprecision::lcm(level, boost::multiprecision::denominator(entry));
        }
    if (level > kFactorizeLimit) throw SizeGuardError("lattice_level: level too large");
    return static_cast<std::int64_t>(level);
}

inline bool is_perfect_square(const Integer& x) {
    if (x < 0) return false;
    const Integer r = boost::multiprecision::sqrt(x);
    return r * r == x;
}

inline LatticeProfile profile(const GramMatrix& S) {
    if (S.size() % 2 != 0) throw InvalidGramError("profile: Gram matrix must have even rank");
    LatticeProfile out;
    out.determinant = S.determinant();
    out.level = lattice_level(S);
    const Integer signed_det = (S.size() / 2) % 2 == 0 ? out.determinant : Integer(-out.determinant);
    out.character_trivial = is_perfect_square(signed_det);
    for (const std::int64_t p : prime_divisors(out.level)) {
        out.hasse[p] = hasse_invariant(S, p);
        Integer det = out.determinant;
        out.d_powers[p] = ipow(p, static_cast<unsigned>(detail::split_valuation(det, p)));
    }
    return out;
}

/// Coefficients c(N0, N1, N2) of the genus theta series in the natural basis.
inline std::map<LevelPartition, Rational> genus_coefficients(const GramMatrix& S) {
    const std::size_t rank = S.size();
    if (rank % 4 != 0 || rank < 8) throw InvalidGramError("genus_coefficients: rank must be 2k with k even, k >= 4");
    const LatticeProfile prof = profile(S);
    if (!is_squarefree(prof.level)) throw InvalidGramError("genus_coefficients: level is not squarefree");
    if (!prof.character_trivial) throw InvalidGramError("genus_coefficients: character is not trivial");

    // d_p^{-1/2} s_p and d_p^{-1} per prime
    std::map<std::int64_t, std::array<Rational, 3>> local;
    for (const auto& [p, dp] : prof.d_powers) {
        Integer det = prof.determinant;
        const int v = detail::split_valuation(det, p);
        if (v % 2 != 0) throw InvalidGramError("genus_coefficients: odd valuation of det at " + std::to_string(p));
        local[p] = {Rational(1), rpow(p, -v / 2) * prof.hasse.at(p), Rational(1) / Rational(dp)};
    }
    std::map<LevelPartition, Rational> out;
    for (const auto& part : level_partitions(prof.level)) {
        Rational c = 1;
        for (const auto& [p, factors] : local) c *= factors[static_cast<std::size_t>(part.rank_at(p))];
        out.emplace(part, c);
    }
    return out;
}

/// Genus-average representation number of T, from the Eisenstein expansion.
inline Rational genus_rep_number(const GramMatrix& S, const HalfIntegralMatrix& T) {
    const int k = static_cast<int>(S.size() / 2);
    Rational total = 0;
    for (const auto& [part, c] : genus_coefficients(S))
        if (c != 0) total += c * coefficient(EisensteinSpec(k, part), T);
    return total;
}

// ---------------------------------------------------------------------------
// Built-in lattices and the Gram file format

/// The five 8-dimensional single-class even lattices of squarefree level and trivial character.
inline const std::map<std::string, std::vector<std::int64_t>, std::less<>>& builtin_lattice_data() {
    static const std::map<std::string, std::vector<std::int64_t>, std::less<>> data{
        {"S1", {2, 1, 2, 1, 1, 2, 1, 0, 0, 2, 1, 1, 0, 0, 2, 1, 1, 0, 0, 1, 2, 1, 0, 1, 0, 0, 0, 2, 1, 1, 0, 1, 1, 1, 0, 2}},
        {"S2", {2, -1, 2, 0, -1, 2, 0, 0, -1, 2, 0, 0, 0, -1, 2, 0, 0, -1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 1, 2}},
        {"S3", {2, 1, 2, -1, -1, 2, 1, 1, 0, 2, 1, 1, 0, 1, 2, 1, 1, 0, 1, 1, 2, 1, 1, 0, 1, 1, 1, 2, 1, 1, 0, 1, 1, 1, 1, 2}},
        {"S4", {2, 0, 2, 0, 0, 2, 1, 1, 1, 2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 1, 1, 1, 2}},
        {"S5", {2, 0, 2, 0, 0, 2, 1, -1, 1, 4, 0, 0, 0, 1, 2, 0, 0, 0, -1, 0, 2, 0, 0, 0, -1, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 2}},
    };
    return data;
}

inline GramMatrix builtin_lattice(std::string_view name) {
    const auto& data = builtin_lattice_data();
    const auto it = data.find(name);
    if (it == data.end()) throw InputError("unknown lattice '" + std::string(name) + "' (expected S1..S5)");
    return GramMatrix::from_lower_triangular(it->second);
}

/**
 * Reads the plain-text Gram format: the first line holds the size n, then
 * n lines give the lower-triangular rows (row i has i integers).
 */
inline GramMatrix read_gram(std::istream& in) {
    std::string line;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw InvalidGramError("Gram file is empty");
    std::istringstream header(line);
    long long size = 0;
    if (!(header >> size) || size < 1) throw InvalidGramError("Gram file: first line must be a positive size");
    std::vector<std::int64_t> lower;
    for (long long i = 1; i <= size; ++i) {
        if (!next_line()) throw InvalidGramError("Gram file: missing row " + std::to_string(i));
        std::istringstream row(line);
        std::int64_t x = 0;
        long long count = 0;
        while (row >> x) {
            lower.push_back(x);
            ++count;
        }
        if (!row.eof() || count != i)
            throw InvalidGramError("Gram file: row " + std::to_string(i) + " must hold " + std::to_string(i) +
                                   " integers");
    }
    if (next_line()) throw InvalidGramError("Gram file: trailing data after the last row");
    return GramMatrix::from_lower_triangular(lower);
}

inline GramMatrix load_gram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open Gram file '" + path + "'");
    return read_gram(in);
}

inline void write_gram(std::ostream& out, const GramMatrix& S) {
    out << S.size() << '\n';
    for (std::size_t i = 0; i < S.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) out << (j ? " " : "") << S(i, j);
        out << '\n';
    }
}

}  // namespace siegel
