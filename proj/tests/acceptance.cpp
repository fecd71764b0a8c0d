// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "siegel/verify.hpp"

#include <chrono>
#include <iomanip>
#include <iostream>

using namespace siegel;

namespace {

struct Gate {
    int failures = 0;

    void report(int number, const std::string& title, const std::vector<CheckTally>& checks, double seconds) {
        std::uint64_t passed = 0, failed = 0;
        for (const auto& c : checks) {
            passed += c.passed;
            failed += c.failed;
        }
        const bool ok = failed == 0 && passed > 0;
        if (!ok) ++failures;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " [" << passed << " checks, "
                  << failed << " failed, " << std::fixed << std::setprecision(1) << seconds << "s]" << std::endl;
        for (const auto& c : checks)
            for (const auto& f : c.failures) std::cout << "    " << c.property << ": " << f << '\n';
    }
};

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

int main() {
    Gate gate;
    Stopwatch clock;

    // The T set shared by criteria 1, 2 and 8: reduced T with 0 < delta <= 30, T = 0, and (m,0,0) with m <= 10.
    const auto forms = test_forms(30, 10);
    std::map<std::string, std::vector<std::uint64_t>> counts;
    std::map<std::string, std::vector<Rational>> formulas;
    for (const auto& row : expected_lattice_table()) {
        const GramMatrix S = builtin_lattice(row.lattice);
        ThetaSeries theta(S);
        for (const auto& T : forms) {
            counts[row.lattice].push_back(theta.rep_deg2(T));
            formulas[row.lattice].push_back(genus_rep_number(S, T));
        }
    }
    const double theta_seconds = clock.lap();

    {
        CheckTally oracle{"rep_deg2 = genus_rep_number"};
        for (const auto& [name, values] : counts)
            for (std::size_t i = 0; i < forms.size(); ++i)
                oracle.record(formulas[name][i] == Rational(Integer(values[i])), [&] {
                    return name + " T=" + detail::describe(forms[i]) + " count=" + std::to_string(values[i]) +
                           " formula=" + to_fraction_string(formulas[name][i]);
                });
        gate.report(1, "five-lattice oracle equality", {oracle}, theta_seconds + clock.lap());
    }

    {
        CheckTally level1{"level 1 coefficient = E8 count"};
        const EisensteinSpec E(4, LevelPartition(1, 1, 1));
        for (std::size_t i = 0; i < forms.size(); ++i)
            level1.record(coefficient(E, forms[i]) == Rational(Integer(counts["S1"][i])),
                          [&] { return "T=" + detail::describe(forms[i]); });
        CheckTally spots{"spot values"};
        spots.record(coefficient(E, {1, 0, 0}) == 240, [] { return "a(1,0,0) != 240"; });
        spots.record(coefficient(E, {1, 1, 1}) == 13440, [] { return "a(1,1,1) != 13440"; });
        gate.report(2, "level 1 base case", {level1, spots}, clock.lap());
    }

    {
        VerifyBounds bounds;
        bounds.delta_max = 50;
        bounds.singular_max = 12;
        bounds.level_max = 15;
        bounds.prime_max = 5;
        const auto checks = check_level_raising(bounds);
        gate.report(3, "level raising lift and decomposition", checks, clock.lap());
    }
    {
        const auto checks = check_class_number_relations();
        gate.report(4, "class number relations", checks, clock.lap());
    }
    {
        const auto checks = verify_hecke().checks;
        gate.report(5, "Hecke relations", checks, clock.lap());
    }
    {
        const auto checks = check_local_sums();
        gate.report(6, "local factor sums", checks, clock.lap());
    }

    {
        CheckTally table{"genus coefficient table"};
        for (const auto& row : expected_lattice_table()) {
            const GramMatrix S = builtin_lattice(row.lattice);
            const auto prof = profile(S);
            table.record(prof.level == row.level && prof.character_trivial && genus_coefficients(S) == row.coefficients,
                         [&] { return row.lattice; });
        }
        gate.report(7, "genus coefficient table", {table}, clock.lap());
    }

    {
        CheckTally integral{"genus_rep_number is a non-negative integer"};
        for (const auto& [name, values] : formulas)
            for (std::size_t i = 0; i < forms.size(); ++i)
                integral.record(is_integer(values[i]) && values[i] >= 0,
                                [&] { return name + " T=" + detail::describe(forms[i]); });
        gate.report(8, "integrality", {integral}, clock.lap());
    }

    std::cout << (gate.failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << std::endl;
    return gate.failures == 0 ? 0 : 1;
}
