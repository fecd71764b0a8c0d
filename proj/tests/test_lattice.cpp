#include "oracles.hpp"
#include "siegel/lattice.hpp"
#include "siegel/verify.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace siegel;

namespace {

Rational q(long long num, long long den = 1) { return Rational(num, den); }

/// Squarefree part with sign, so that valuations are 0 or 1.
std::int64_t squarefree_part(std::int64_t x) {
    const std::int64_t sign = x < 0 ? -1 : 1;
    std::int64_t out = sign;
    for (const auto& [p, e] : factorize(sign * x))
        if (e % 2) out *= p;
    return out;
}

}  // namespace

TEST(Gram, BuiltinsAreEvenSymmetricDefinite) {
    const std::map<std::string, Integer> dets{{"S1", 1}, {"S2", 9}, {"S3", 4}, {"S4", 16}, {"S5", 64}};
    for (const auto& [name, det] : dets) {
        const GramMatrix S = builtin_lattice(name);
        ASSERT_EQ(S.size(), 8u);
        for (std::size_t i = 0; i < 8; ++i) {
            EXPECT_EQ(S(i, i) % 2, 0);
            for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(S(i, j), S(j, i));
        }
        EXPECT_EQ(S.determinant(), det) << name;
    }
    EXPECT_THROW(builtin_lattice("S6"), InputError);
}

TEST(Gram, Validation) {
    EXPECT_THROW(GramMatrix(2, {2, 1, 0, 2}), InvalidGramError);
    EXPECT_THROW(GramMatrix(2, {1, 0, 0, 2}), InvalidGramError);
    EXPECT_THROW(GramMatrix(2, {2, 3, 3, 2}), InvalidGramError);
    EXPECT_THROW(GramMatrix(2, {2, 0, 0}), InvalidGramError);
    EXPECT_THROW(GramMatrix(0, {}), InvalidGramError);
    const std::vector<std::int64_t> not_triangular{2, 1, 2, 0};
    EXPECT_THROW(GramMatrix::from_lower_triangular(not_triangular), InvalidGramError);
}

TEST(Gram, InverseTimesMatrixIsIdentity) {
    for (const auto& [name, data] : builtin_lattice_data()) {
        const GramMatrix S = builtin_lattice(name);
        const auto inv = S.inverse();
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) {
                Rational acc = 0;
                for (std::size_t t = 0; t < 8; ++t) acc += Rational(S(i, t)) * inv[t][j];
                EXPECT_EQ(acc, i == j ? 1 : 0);
            }
    }
}

TEST(Profile, Levels) {
    const std::map<std::string, std::int64_t> levels{{"S1", 1}, {"S2", 3}, {"S3", 2}, {"S4", 2}, {"S5", 2}};
    for (const auto& [name, level] : levels) {
        const auto prof = profile(builtin_lattice(name));
        EXPECT_EQ(prof.level, level) << name;
        EXPECT_TRUE(prof.character_trivial) << name;
    }
    const std::vector<std::int64_t> a2{2, -1, 2};
    EXPECT_EQ(profile(GramMatrix::from_lower_triangular(a2)).level, 3);
    EXPECT_FALSE(profile(GramMatrix::from_lower_triangular(a2)).character_trivial);
    const std::vector<std::int64_t> d{2, 2};
    EXPECT_EQ(profile(GramMatrix::diagonal(d)).level, 4);
}

TEST(Profile, LevelByDefinition) {
    // smallest N with N S^{-1} integral and even on the diagonal, by search
    for (const auto& [name, data] : builtin_lattice_data()) {
        const GramMatrix S = builtin_lattice(name);
        const auto inv = S.inverse();
        std::int64_t N = 1;
        for (;; ++N) {
            bool ok = true;
            for (std::size_t i = 0; i < 8 && ok; ++i)
                for (std::size_t j = 0; j < 8 && ok; ++j) {
                    const Rational x = N * inv[i][j];
                    ok = is_integer(x) && (i != j || is_integer(x / 2));
                }
            if (ok) break;
        }
        EXPECT_EQ(lattice_level(S), N) << name;
    }
}

TEST(Hilbert, Examples) {
    for (const std::int64_t b : {-7, -1, 2, 3, 5, 12})
        for (const std::int64_t p : {2, 3, 5, 7}) EXPECT_EQ(hilbert_symbol(1, b, Place::at(p)), 1);
    EXPECT_EQ(hilbert_symbol(-1, -1, Place::at(2)), -1);
    EXPECT_EQ(hilbert_symbol(2, 3, Place::at(3)), -1);
    EXPECT_EQ(hilbert_symbol(-1, -1, Place::infinity()), -1);
    EXPECT_EQ(hilbert_symbol(-1, 2, Place::infinity()), 1);
    EXPECT_EQ(hilbert_symbol(q(2, 9), q(3, 4), Place::at(3)), -1);
    EXPECT_THROW(hilbert_symbol(0, 1, Place::at(2)), InputError);
    EXPECT_THROW(Place::at(9), InputError);
}

TEST(Hilbert, MinusOneMinusOneModEight) {
    // x^2 + y^2 + z^2 = 0 with some coordinate odd is impossible mod 8: squares are 0, 1, 4.
    bool found = false;
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y)
            for (int z = 0; z < 8; ++z)
                if ((x % 2 || y % 2 || z % 2) && (x * x + y * y + z * z) % 8 == 0) found = true;
    EXPECT_FALSE(found);
    EXPECT_EQ(oracle::hilbert_by_search(-1, -1, 2), -1);
}

TEST(Hilbert, AgreesWithCongruenceSearch) {
    std::vector<std::int64_t> values;
    for (std::int64_t a = -30; a <= 30; ++a)
        if (a != 0 && squarefree_part(a) == a) values.push_back(a);
    for (const std::int64_t p : {2, 3, 5})
        for (const auto a : values)
            for (const auto b : values) {
                if (p == 5 && (std::abs(a) > 10 || std::abs(b) > 10)) continue;
                ASSERT_EQ(hilbert_symbol(a, b, Place::at(p)), oracle::hilbert_by_search(a, b, p)) << a << " " << b << " p=" << p;
            }
}

TEST(Hilbert, ProductFormulaAndSymmetry) {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::int64_t> dist(-2000, 2000);
    for (int trial = 0; trial < 100; ++trial) {
        std::int64_t a = 0, b = 0;
        while (a == 0) a = dist(rng);
        while (b == 0) b = dist(rng);
        int product = hilbert_symbol(a, b, Place::infinity());
        std::set<std::int64_t> primes{2};
        for (const auto p : prime_divisors(std::abs(a))) primes.insert(p);
        for (const auto p : prime_divisors(std::abs(b))) primes.insert(p);
        for (const auto p : primes) product *= hilbert_symbol(a, b, Place::at(p));
        EXPECT_EQ(product, 1) << a << " " << b;
        EXPECT_EQ(hilbert_symbol(a, b, Place::at(2)), hilbert_symbol(b, a, Place::at(2)));
        // bilinearity in the first argument at 2 and 3
        for (const std::int64_t p : {2, 3})
            EXPECT_EQ(hilbert_symbol(a * 3, b, Place::at(p)), hilbert_symbol(a, b, Place::at(p)) * hilbert_symbol(3, b, Place::at(p)));
    }
}

TEST(Hasse, ValuesAtLevelPrimes) {
    EXPECT_EQ(hasse_invariant(builtin_lattice("S2"), 3), 1);
    for (const char* name : {"S3", "S4", "S5"}) EXPECT_EQ(hasse_invariant(builtin_lattice(name), 2), 1) << name;
    const std::vector<std::int64_t> twos(8, 2);
    for (const std::int64_t p : {3, 5, 7}) EXPECT_EQ(hasse_invariant(GramMatrix::diagonal(twos), p), 1);
}

TEST(Hasse, IndependentOfDiagonalization) {
    std::vector<GramMatrix> sample;
    for (const auto& [name, data] : builtin_lattice_data()) sample.push_back(builtin_lattice(name));
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::int64_t> off(-2, 2), diag(1, 4);
    while (sample.size() < 25) {
        std::vector<std::int64_t> lower;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j <= i; ++j) lower.push_back(i == j ? 2 * diag(rng) : off(rng));
        try {
            sample.push_back(GramMatrix::from_lower_triangular(lower));
        } catch (const InvalidGramError&) {
        }
    }
    for (const auto& S : sample) {
        std::vector<std::size_t> order(S.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<std::vector<std::size_t>> orders{order};
        std::reverse(order.begin(), order.end());
        orders.push_back(order);
        std::shuffle(order.begin(), order.end(), rng);
        orders.push_back(order);
        for (const std::int64_t p : {2, 3, 5, 7}) {
            const int base = hasse_invariant(S, p);
            for (const auto& o : orders) EXPECT_EQ(hasse_invariant(S, p, o), base);
        }
    }
}

TEST(Hasse, DiagonalizationPreservesDeterminantClass) {
    for (const auto& [name, data] : builtin_lattice_data()) {
        const GramMatrix S = builtin_lattice(name);
        Rational product = 1;
        for (const auto& d : diagonalize(S)) product *= d;
        EXPECT_EQ(product, Rational(S.determinant())) << name;
    }
}

TEST(Genus, ReferenceTable) {
    for (const auto& row : expected_lattice_table()) {
        const GramMatrix S = builtin_lattice(row.lattice);
        EXPECT_EQ(profile(S).level, row.level) << row.lattice;
        EXPECT_EQ(genus_coefficients(S), row.coefficients) << row.lattice;
    }
}

TEST(Genus, CoefficientsSumToConstantTerm) {
    // only E_{(N,1,1)} has constant term 1, and the genus series has constant term 1
    for (const auto& [name, data] : builtin_lattice_data())
        EXPECT_EQ(genus_rep_number(builtin_lattice(name), {}), 1) << name;
}

TEST(Genus, Rejections) {
    const std::vector<std::int64_t> a2{2, -1, 2};
    EXPECT_THROW(genus_coefficients(GramMatrix::from_lower_triangular(a2)), InvalidGramError);
    const std::vector<std::int64_t> d4{2, 2, 2, 2};
    EXPECT_THROW(genus_coefficients(GramMatrix::diagonal(d4)), InvalidGramError);
    const std::vector<std::int64_t> d8(8, 2);
    // level 4 is not squarefree
    EXPECT_THROW(genus_coefficients(GramMatrix::diagonal(d8)), InvalidGramError);
    const std::vector<std::int64_t> odd{2, 1, 2, 0, 1, 2};
    EXPECT_THROW(profile(GramMatrix::from_lower_triangular(odd)), InvalidGramError);
}

TEST(GramFile, RoundTrip) {
    for (const auto& [name, data] : builtin_lattice_data()) {
        const GramMatrix S = builtin_lattice(name);
        std::stringstream buffer;
        write_gram(buffer, S);
        EXPECT_EQ(read_gram(buffer), S) << name;
    }
}

TEST(GramFile, ToleratesBlankLines) {
    std::istringstream in("\n2\n\n2\n-1 2\n\n");
    const GramMatrix S = read_gram(in);
    EXPECT_EQ(S.size(), 2u);
    EXPECT_EQ(S(0, 1), -1);
}

TEST(GramFile, ParseErrors) {
    for (const char* text : {"", "x\n", "0\n", "2\n2\n", "2\n2\n1 2 3\n", "2\n2\n1 x\n", "2\n2\n1 2\n5\n", "2\n3\n1 2\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(read_gram(in), InvalidGramError) << '"' << text << '"';
    }
    EXPECT_THROW(load_gram_file("/nonexistent/gram.txt"), InputError);
}
