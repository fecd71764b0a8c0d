#pragma once

/**
 * @file theta.hpp
 * @brief Brute-force degree 1 and degree 2 representation numbers of a
 * positive definite even Gram matrix S.
 *
 * Conventions: rep_deg1(S, m) counts x with x^t S x = 2m, and
 * rep_deg2(S, T) counts X = (x, y) with X^t S X = 2T, i.e.
 * x^t S x = 2m, y^t S y = 2n, x^t S y = r for T = (m, r, n). These are the
 * Fourier coefficients of the theta series at the half-integral index T.
 *
 * Short vectors are enumerated with Fincke-Pohst bounds derived from an
 * exact LDL^t decomposition of S, scaled to integers so that every bound
 * test is exact; no vector of norm <= max_norm can be missed.
 */

#include "siegel/eisenstein.hpp"
#include "siegel/exactmath.hpp"
#include "siegel/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace siegel {

/// All nonzero vectors of one norm x^t S x.
struct VectorShell {
    std::int64_t norm = 0;
    std::size_t dimension = 0;
    std::vector<std::int32_t> coords;  // row-major, dimension entries per vector

    std::size_t size() const { return dimension == 0 ? 0 : coords.size() / dimension; }
    std::span<const std::int32_t> operator[](std::size_t i) const { return {coords.data() + i * dimension, dimension}; }
};

namespace detail {

__extension__ typedef __int128 int128;

inline int128 isqrt(int128 x) {
    if (x <= 0) return 0;
    // Newton iteration from an upper bound, all integer.
    int128 r = x;
    int128 next = (r + 1) / 2;
    while (next < r) {
        r = next;
        next = (r + x / r) / 2;
    }
    return r;
}

inline int128 floor_div(int128 a, int128 b) {
    int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline int128 ceil_div(int128 a, int128 b) { return -floor_div(-a, b); }

inline std::int64_t to_int64(const Integer& x, const char* what) {
    if (x > Integer(std::numeric_limits<std::int64_t>::max()) || x < Integer(std::numeric_limits<std::int64_t>::min()))
        throw SizeGuardError(std::string("theta: ") + what + " does not fit in 64 bits");
    return static_cast<std::int64_t>(x);
}

/**
 * Integer form of Q(x) = sum_j d_j (x_j + sum_{i>j} L_ij x_i)^2:
 *   Q(x) * scale = sum_j weight_j * Y_j^2,  Y_j = den * x_j + sum_{i>j} coupling_ij x_i.
 */
struct IntegerCholesky {
    std::size_t n = 0;
    std::int64_t den = 1;
    std::int64_t scale = 1;
    std::vector<std::int64_t> weight;
    std::vector<std::vector<std::int64_t>> coupling;  // coupling[i][j], i > j

    explicit IntegerCholesky(const GramMatrix& S) : n(S.size()), weight(n), coupling(n, std::vector<std::int64_t>(n, 0)) {
        std::vector<std::vector<Rational>> L(n, std::vector<Rational>(n, Rational(0)));
        std::vector<Rational> d(n);
        for (std::size_t j = 0; j < n; ++j) {
            Rational dj = S(j, j);
            for (std::size_t k = 0; k < j; ++k) dj -= L[j][k] * L[j][k] * d[k];
            d[j] = dj;
            L[j][j] = 1;
            for (std::size_t i = j + 1; i < n; ++i) {
                Rational lij = S(i, j);
                for (std::size_t k = 0; k < j; ++k) lij -= L[i][k] * L[j][k] * d[k];
                L[i][j] = lij / dj;
            }
        }
        Integer den_big = 1;
        Integer w_big = 1;
        for (std::size_t i = 0; i < n; ++i) {
            w_big = boost::multiprecision::lcm(w_big, boost::multiprecision::denominator(d[i]));
            for (std::size_t j = 0; j < i; ++j)
                den_big = boost::multiprecision::lcm(den_big, boost::multiprecision::denominator(L[i][j]));
        }
        den = to_int64(den_big, "Cholesky denominator");
        scale = to_int64(w_big * den_big * den_big, "Cholesky scale");
        for (std::size_t j = 0; j < n; ++j) {
            weight[j] = to_int64(boost::multiprecision::numerator(d[j] * Rational(w_big)), "Cholesky weight");
            for (std::size_t i = j + 1; i < n; ++i)
                coupling[i][j] = to_int64(boost::multiprecision::numerator(L[i][j] * Rational(den_big)), "Cholesky coupling");
        }
    }
};

}  // namespace detail

/// Every nonzero x with x^t S x <= max_norm, grouped into shells by norm.
inline std::vector<VectorShell> shells(const GramMatrix& S, std::int64_t max_norm) {
    if (max_norm <= 0) throw InputError("shells: max_norm must be positive");
    using detail::int128;
    const detail::IntegerCholesky chol(S);
    const std::size_t n = S.size();
    std::map<std::int64_t, VectorShell> found;
    std::vector<std::int64_t> x(n, 0);

    auto emit = [&]() {
        const std::int64_t norm = S.bilinear(x, x);
        if (norm == 0) return;
        auto& shell = found[norm];
        shell.norm = norm;
        shell.dimension = n;
        for (const auto xi : x) shell.coords.push_back(static_cast<std::int32_t>(xi));
    };

    auto recurse = [&](auto&& self, std::size_t level, int128 remaining) -> void {
        int128 center = 0;
        for (std::size_t i = level + 1; i < n; ++i) center += int128(chol.coupling[i][level]) * x[i];
        const int128 w = chol.weight[level];
        const int128 t = detail::isqrt(remaining / w);
        const int128 lo = detail::ceil_div(-t - center, chol.den);
        const int128 hi = detail::floor_div(t - center, chol.den);
        for (int128 xi = lo; xi <= hi; ++xi) {
            x[level] = static_cast<std::int64_t>(xi);
            const int128 y = int128(chol.den) * xi + center;
            const int128 left = remaining - w * y * y;
            if (left < 0) continue;
            if (level == 0)
                emit();
            else
                self(self, level - 1, left);
        }
        x[level] = 0;
    };
    recurse(recurse, n - 1, int128(max_norm) * chol.scale);

    std::vector<VectorShell> out;
    out.reserve(found.size());
    for (auto& [norm, shell] : found) out.push_back(std::move(shell));
    return out;
}

/**
 * Cached shells and pair statistics for one Gram matrix. Shells are
 * extended on demand, so counts are never truncated. Not safe for
 * concurrent use of one instance; the pair scan itself runs on `workers`
 * threads and its result does not depend on that number.
 */
class ThetaSeries {
public:
    explicit ThetaSeries(GramMatrix S, unsigned workers = 0) : gram_(std::move(S)), workers_(workers) {
        if (workers_ == 0) workers_ = std::max(1u, std::thread::hardware_concurrency());
    }

    const GramMatrix& gram() const { return gram_; }
    std::int64_t covered_norm() const { return covered_; }

    /// Makes every shell up to max_norm available.
    void ensure(std::int64_t max_norm) {
        if (max_norm <= covered_) return;
        const std::int64_t target = std::max(max_norm, covered_ + 2);
        // existing shells are kept as they are, so references handed out stay valid
        for (auto& shell : shells(gram_, target)) {
            const std::int64_t norm = shell.norm;
            shells_.try_emplace(norm, std::move(shell));
        }
        covered_ = target;
    }

    /// The shell of vectors with x^t S x = norm (empty if there are none).
    const VectorShell& shell(std::int64_t norm) {
        if (norm <= 0) throw InputError("ThetaSeries::shell: norm must be positive");
        ensure(norm);
        const auto it = shells_.find(norm);
        if (it != shells_.end()) return it->second;
        static const VectorShell empty{};
        return empty;
    }

    /// #{x : x^t S x = 2m}
    std::uint64_t rep_deg1(std::int64_t m) {
        if (m < 0) throw InputError("rep_deg1: m must be non-negative");
        if (m == 0) return 1;
        return shell(2 * m).size();
    }

    /// #{(x, y) : x^t S x = 2m, y^t S y = 2n, x^t S y = r}
    std::uint64_t rep_deg2(const HalfIntegralMatrix& T) {
        if (!T.is_positive_semidefinite()) throw InvalidMatrixError("rep_deg2: T must be positive semidefinite");
        if (T.is_zero()) return 1;
        if (T.m() == 0) return rep_deg1(T.n());
        if (T.n() == 0) return rep_deg1(T.m());
        const auto& histogram = cross_histogram(T.m(), T.n());
        const auto it = histogram.find(T.r());
        return it == histogram.end() ? 0 : it->second;
    }

    /// Distribution of x^t S y over pairs with x^t S x = 2m, y^t S y = 2n.
    const std::map<std::int64_t, std::uint64_t>& cross_histogram(std::int64_t m, std::int64_t n) {
        if (m <= 0 || n <= 0) throw InputError("cross_histogram: m and n must be positive");
        const auto key = std::minmax(m, n);
        if (const auto it = histograms_.find(key); it != histograms_.end()) return it->second;
        ensure(2 * std::max(m, n));
        auto histogram = scan_pairs(shell(2 * key.first), shell(2 * key.second));
        return histograms_.emplace(key, std::move(histogram)).first->second;
    }

private:
    std::map<std::int64_t, std::uint64_t> scan_pairs(const VectorShell& a, const VectorShell& b) const {
        std::map<std::int64_t, std::uint64_t> out;
        if (a.size() == 0 || b.size() == 0) return out;
        const std::size_t dim = gram_.size();
        // S-image of each vector in b, so that x^t S y is a plain dot product.
        std::vector<std::int64_t> images(b.size() * dim, 0);
        for (std::size_t v = 0; v < b.size(); ++v) {
            const auto y = b[v];
            for (std::size_t i = 0; i < dim; ++i) {
                std::int64_t acc = 0;
                for (std::size_t j = 0; j < dim; ++j) acc += gram_(i, j) * y[j];
                images[v * dim + i] = acc;
            }
        }
        // Cauchy-Schwarz: |x^t S y| <= sqrt(norm_a * norm_b)
        const std::int64_t bound = static_cast<std::int64_t>(detail::isqrt(detail::int128(a.norm) * b.norm));
        const std::size_t width = static_cast<std::size_t>(2 * bound + 1);
        const unsigned workers = std::min<unsigned>(workers_, static_cast<unsigned>(a.size()));
        std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(width, 0));
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    auto& counts = partial[w];
                    for (std::size_t u = w; u < a.size(); u += workers) {
                        const auto x = a[u];
                        for (std::size_t v = 0; v < b.size(); ++v) {
                            const std::int64_t* img = images.data() + v * dim;
                            std::int64_t dot = 0;
                            for (std::size_t i = 0; i < dim; ++i) dot += x[i] * img[i];
                            ++counts[static_cast<std::size_t>(dot + bound)];
                        }
                    }
                });
            }
        }
        for (std::size_t i = 0; i < width; ++i) {
            std::uint64_t total = 0;
            for (const auto& counts : partial) total += counts[i];
            if (total != 0) out[static_cast<std::int64_t>(i) - bound] = total;
        }
        return out;
    }

    GramMatrix gram_;
    unsigned workers_;
    std::int64_t covered_ = 0;
    std::map<std::int64_t, VectorShell> shells_;
    std::map<std::pair<std::int64_t, std::int64_t>, std::map<std::int64_t, std::uint64_t>> histograms_;
};

inline std::uint64_t rep_deg1(const GramMatrix& S, std::int64_t m) { return ThetaSeries(S).rep_deg1(m); }

inline std::uint64_t rep_deg2(const GramMatrix& S, const HalfIntegralMatrix& T, unsigned workers = 0) {
    return ThetaSeries(S, workers).rep_deg2(T);
}

}  // namespace siegel
