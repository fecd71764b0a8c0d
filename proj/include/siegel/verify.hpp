#pragma once

/**
 * @file verify.hpp
 * @brief Self-check suites: the algebraic identities tying the coefficient
 * formulas together, the Hecke relations, and the comparison of the
 * Eisenstein formulas against brute-force theta series of the built-in
 * lattices.
 */

#include "siegel/classnumbers.hpp"
#include "siegel/eisenstein.hpp"
#include "siegel/exactmath.hpp"
#include "siegel/lattice.hpp"
#include "siegel/theta.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace siegel {

struct CheckTally {
    explicit CheckTally(std::string name) : property(std::move(name)) {}

    std::string property;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    std::vector<std::string> failures;  // first few only

    void record(bool ok, const std::function<std::string()>& describe) {
        if (ok) {
            ++passed;
            return;
        }
        ++failed;
        if (failures.size() < 5) failures.push_back(describe());
    }
    bool ok() const { return failed == 0; }
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckTally> checks;
    bool ok() const {
        for (const auto& c : checks)
            if (!c.ok()) return false;
        return true;
    }
};

struct VerifyBounds {
    std::int64_t delta_max = 50;
    std::int64_t singular_max = 12;
    std::int64_t level_max = 15;
    std::int64_t prime_max = 5;
    std::int64_t lattice_delta_max = 30;
    std::int64_t lattice_singular_max = 10;
    unsigned workers = 0;
};

/// T = 0, the singular (e, 0, 0) for e <= max_content, and reduced definite T with discriminant <= max_delta.
inline std::vector<HalfIntegralMatrix> test_forms(std::int64_t max_delta, std::int64_t max_content) {
    std::vector<HalfIntegralMatrix> out{HalfIntegralMatrix{}};
    for (const auto& t : singular_forms(max_content)) out.push_back(t);
    for (const auto& t : reduced_definite_forms(max_delta)) out.push_back(t);
    return out;
}

/// Thirty sample matrices: zero, a few singular ones (one not diagonal), and the smallest definite forms.
inline std::vector<HalfIntegralMatrix> hecke_sample_forms() {
    std::vector<HalfIntegralMatrix> out{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {1, 2, 1}, {2, 4, 2}};
    for (const auto& t : reduced_definite_forms(40)) {
        if (out.size() == 30) break;
        out.push_back(t);
    }
    return out;
}

inline std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p <= bound; ++p)
        if (is_prime(p)) out.push_back(p);
    return out;
}

inline std::vector<std::int64_t> squarefree_up_to(std::int64_t bound) {
    std::vector<std::int64_t> out;
    for (std::int64_t n = 1; n <= bound; ++n)
        if (is_squarefree(n)) out.push_back(n);
    return out;
}

namespace detail {

template <class T>
std::string describe(const T& value) {
    std::ostringstream os;
    os << value;
    return os.str();
}

}  // namespace detail

/// Level raising: direct level-Np coefficients against the Hecke-relation lift and the three-term decomposition.
inline std::vector<CheckTally> check_level_raising(const VerifyBounds& bounds) {
    CheckTally lift{"lemma31_lift equals direct level-Np coefficients"};
    CheckTally split{"level-N series is the sum of its three level-Np refinements"};
    const auto forms = test_forms(bounds.delta_max, bounds.singular_max);
    for (const std::int64_t N : squarefree_up_to(bounds.level_max))
        for (const std::int64_t p : primes_up_to(bounds.prime_max)) {
            if (N % p == 0) continue;
            for (const int k : {4, 6})
                for (const auto& part : level_partitions(N)) {
                    const EisensteinSpec spec(k, part);
                    for (const auto& T : forms) {
                        const std::array<Rational, 3> base{coefficient(spec, T), coefficient(spec, T.scaled(p)),
                                                           coefficient(spec, T.scaled(p * p))};
                        const auto lifted = lemma31_lift(base, p, k);
                        std::array<Rational, 3> direct;
                        for (int i = 0; i < 3; ++i)
                            direct[static_cast<std::size_t>(i)] = coefficient(spec.with_partition(part.extended(i, p)), T);
                        const auto where = [&] {
                            return "k=" + std::to_string(k) + " " + detail::describe(part) + " p=" + std::to_string(p) +
                                   " T=" + detail::describe(T);
                        };
                        lift.record(lifted == direct, where);
                        split.record(direct[0] + direct[1] + direct[2] == base[0], where);
                    }
                }
        }
    return {lift, split};
}

/// H_{Np} C_{p,D} = H_N and H_{Np}(p^2 M) = H_{Np}(M), N <= 30, p <= 7, M <= 500.
inline std::vector<CheckTally> check_class_number_relations() {
    CheckTally hlevel{"H_Np(M) C_{p,D}(ord_p f) = H_N(M)"};
    CheckTally hscale{"H_Np(p^2 M) = H_Np(M)"};
    for (const std::int64_t N : squarefree_up_to(30))
        for (const std::int64_t p : primes_up_to(7)) {
            if (N % p == 0) continue;
            for (const int k : {4, 6})
                for (std::int64_t M = 3; M <= 500; ++M) {
                    if (M % 4 == 1 || M % 4 == 2) continue;
                    const auto [D, f] = decompose_discriminant(M);
                    const auto where = [&] {
                        return "N=" + std::to_string(N) + " p=" + std::to_string(p) + " k=" + std::to_string(k) +
                               " M=" + std::to_string(M);
                    };
                    const Rational high = cohen_h_level(N * p, k, M);
                    hlevel.record(high * c_factor(p, D, valuation(p, f), k) == cohen_h_level(N, k, M), where);
                    hscale.record(cohen_h_level(N * p, k, p * p * M) == high, where);
                }
        }
    return {hlevel, hscale};
}

/// Sums of the local factors over the three cusp ranks, p <= 7, u, v <= 4, k in {4, 6, 8}.
inline std::vector<CheckTally> check_local_sums() {
    CheckTally psi_sum{"sum_i psi_i = sum_j p^{j(k-1)} C_{p,D}(v-j)"};
    CheckTally ups_sum{"sum_i upsilon_i = sum_j p^{j(k-1)}"};
    for (const std::int64_t p : primes_up_to(7))
        for (const int k : {4, 6, 8})
            for (int u = 0; u <= 4; ++u) {
                Rational geometric = 0;
                for (int j = 0; j <= u; ++j) geometric += rpow(p, j * (k - 1));
                const Rational ups = upsilon_local(0, p, u, k) + upsilon_local(1, p, u, k) + upsilon_local(2, p, u, k);
                ups_sum.record(ups == geometric, [&] { return "p=" + std::to_string(p) + " u=" + std::to_string(u); });
                for (int v = u; v <= 4; ++v)
                    for (const int chi : {-1, 0, 1}) {
                        // c_factor takes chi from D; pick a D with chi_D(p) = chi.
                        std::int64_t D = -3;
                        while (!is_fundamental_discriminant(D) || kronecker_symbol(D, p) != chi) --D;
                        Rational expected = 0;
                        for (int j = 0; j <= u; ++j) expected += rpow(p, j * (k - 1)) * c_factor(p, D, v - j, k);
                        const LocalOrders o{p, u, v, chi};
                        const Rational got = psi_local(0, o, k) + psi_local(1, o, k) + psi_local(2, o, k);
                        psi_sum.record(got == expected, [&] {
                            return "p=" + std::to_string(p) + " k=" + std::to_string(k) + " u=" + std::to_string(u) +
                                   " v=" + std::to_string(v) + " chi=" + std::to_string(chi);
                        });
                    }
            }
    return {psi_sum, ups_sum};
}

inline SuiteReport verify_identities(const VerifyBounds& bounds) {
    SuiteReport report{"identities", check_level_raising(bounds)};
    for (auto& c : check_class_number_relations()) report.checks.push_back(std::move(c));
    for (auto& c : check_local_sums()) report.checks.push_back(std::move(c));
    return report;
}

/// T(p) eigenvalues at levels 1, 3, 7 and the U(p), U_1(p^2) triangular actions at level Np.
inline SuiteReport verify_hecke(const VerifyBounds& = {}) {
    SuiteReport report{"hecke", {}};
    CheckTally tp{"T(p) eigenvalue p^{2k-3} + p^{k-1} + p^{k-2} + 1"};
    CheckTally up{"U(p) triangular action on level-Np series"};
    CheckTally u1{"U_1(p^2) triangular action on level-Np series"};
    const auto forms = hecke_sample_forms();
    for (const std::int64_t N : {1, 3, 7})
        for (const std::int64_t p : {2, 3, 5}) {
            if (N % p == 0) continue;
            for (const int k : {4, 6}) {
                const auto up_rows = up_action(p, k);
                const auto u1_rows = u1p2_action(p, k);
                for (const auto& part : level_partitions(N)) {
                    const EisensteinSpec spec(k, part);
                    std::array<EisensteinSpec, 3> refined{spec.with_partition(part.extended(0, p)),
                                                          spec.with_partition(part.extended(1, p)),
                                                          spec.with_partition(part.extended(2, p))};
                    for (const auto& T : forms) {
                        const auto where = [&] {
                            return "k=" + std::to_string(k) + " " + detail::describe(part) + " p=" + std::to_string(p) +
                                   " T=" + detail::describe(T);
                        };
                        tp.record(hecke_Tp(spec, p, T) == tp_eigenvalue(p, k) * coefficient(spec, T), where);
                        std::array<Rational, 3> a;
                        for (std::size_t i = 0; i < 3; ++i) a[i] = coefficient(refined[i], T);
                        for (std::size_t i = 0; i < 3; ++i) {
                            Rational want_up = 0;
                            Rational want_u1 = 0;
                            for (std::size_t j = 0; j < 3; ++j) {
                                want_up += up_rows[i][j] * a[j];
                                want_u1 += u1_rows[i][j] * a[j];
                            }
                            up.record(hecke_Up(refined[i], p, T) == want_up, where);
                            u1.record(hecke_U1p2(refined[i], p, T) == want_u1, where);
                        }
                    }
                }
            }
        }
    report.checks = {tp, up, u1};
    return report;
}

struct TableRow {
    std::string lattice;
    std::int64_t level;
    std::map<LevelPartition, Rational> coefficients;
};

/// Known levels and genus coefficients of the five built-in lattices.
inline std::vector<TableRow> expected_lattice_table() {
    return {
        {"S1", 1, {{LevelPartition(1, 1, 1), Rational(1)}}},
        {"S2", 3, {{LevelPartition(3, 1, 1), Rational(1)}, {LevelPartition(1, 3, 1), Rational(1, 3)}, {LevelPartition(1, 1, 3), Rational(1, 9)}}},
        {"S3", 2, {{LevelPartition(2, 1, 1), Rational(1)}, {LevelPartition(1, 2, 1), Rational(1, 2)}, {LevelPartition(1, 1, 2), Rational(1, 4)}}},
        {"S4", 2, {{LevelPartition(2, 1, 1), Rational(1)}, {LevelPartition(1, 2, 1), Rational(1, 4)}, {LevelPartition(1, 1, 2), Rational(1, 16)}}},
        {"S5", 2, {{LevelPartition(2, 1, 1), Rational(1)}, {LevelPartition(1, 2, 1), Rational(1, 8)}, {LevelPartition(1, 1, 2), Rational(1, 64)}}},
    };
}

inline SuiteReport verify_lattices(const VerifyBounds& bounds) {
    SuiteReport report{"lattices", {}};
    CheckTally table{"level and genus coefficients match the reference table"};
    CheckTally oracle{"genus_rep_number equals the brute-force count"};
    CheckTally integral{"genus_rep_number is a non-negative integer"};
    const auto forms = test_forms(bounds.lattice_delta_max, bounds.lattice_singular_max);
    for (const auto& row : expected_lattice_table()) {
        const GramMatrix S = builtin_lattice(row.lattice);
        const auto prof = profile(S);
        table.record(prof.level == row.level && prof.character_trivial && genus_coefficients(S) == row.coefficients,
                     [&] { return row.lattice; });
        ThetaSeries theta(S, bounds.workers);
        for (const auto& T : forms) {
            const Rational formula = genus_rep_number(S, T);
            const auto where = [&] { return row.lattice + " T=" + detail::describe(T) + " formula=" + to_fraction_string(formula); };
            integral.record(is_integer(formula) && formula >= 0, where);
            oracle.record(formula == Rational(Integer(theta.rep_deg2(T))), where);
        }
    }
    report.checks = {table, oracle, integral};
    return report;
}

}  // namespace siegel
