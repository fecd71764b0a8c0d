#pragma once

// Command-line front end: coeff | rep | verify | basis.
//
// Exit codes: 0 success, 1 verification failure or formula/enumeration
// mismatch, 2 usage error or invalid series spec, 3 invalid matrix T.

#include "siegel/eisenstein.hpp"
#include "siegel/exactmath.hpp"
#include "siegel/lattice.hpp"
#include "siegel/theta.hpp"
#include "siegel/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace siegel::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kInvalidMatrix = 3 };

inline std::vector<std::int64_t> parse_triple(const std::string& text, const char* what) {
    std::vector<std::int64_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stoll(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError(std::string(what) + ": '" + text + "' is not a comma-separated integer triple");
        }
    }
    if (values.size() != 3) throw InputError(std::string(what) + ": expected three integers, got '" + text + "'");
    return values;
}

inline HalfIntegralMatrix parse_matrix(const std::string& text) {
    try {
        const auto v = parse_triple(text, "T");
        HalfIntegralMatrix T(v[0], v[1], v[2]);
        if (!T.is_positive_semidefinite()) throw InvalidMatrixError("T = " + text + " is not positive semidefinite");
        return T;
    } catch (const InvalidMatrixError&) {
        throw;
    } catch (const InputError& e) {
        throw InvalidMatrixError(e.what());
    }
}

inline LevelPartition parse_partition(const std::string& text) {
    try {
        const auto v = parse_triple(text, "partition");
        return {v[0], v[1], v[2]};
    } catch (const InvalidSpecError&) {
        throw;
    } catch (const InputError& e) {
        throw InvalidSpecError(e.what());
    }
}

/// Δ, e, and (D, f) when T is definite.
inline nlohmann::ordered_json matrix_data(const HalfIntegralMatrix& T) {
    nlohmann::ordered_json j;
    j["delta"] = T.discriminant();
    j["e"] = T.content();
    if (T.discriminant() > 0) {
        const auto [D, f] = decompose_discriminant(T.discriminant());
        j["D"] = D;
        j["f"] = f;
    } else {
        j["D"] = nullptr;
        j["f"] = nullptr;
    }
    return j;
}

class RecordWriter {
public:
    RecordWriter(std::ostream& out, std::string format) : out_(out), format_(std::move(format)) {}

    void write(const nlohmann::ordered_json& record) {
        if (format_ == "json") {
            out_ << record.dump() << '\n';
            return;
        }
        if (!header_written_) {
            bool first = true;
            for (const auto& item : flatten(record)) {
                out_ << (first ? "" : ",") << item.first;
                first = false;
            }
            out_ << '\n';
            header_written_ = true;
        }
        bool first = true;
        for (const auto& item : flatten(record)) {
            out_ << (first ? "" : ",") << item.second;
            first = false;
        }
        out_ << '\n';
    }

private:
    // Arrays become name_0, name_1, ...; strings are written bare (rationals contain no commas).
    static std::vector<std::pair<std::string, std::string>> flatten(const nlohmann::ordered_json& record) {
        std::vector<std::pair<std::string, std::string>> cells;
        auto text = [](const nlohmann::ordered_json& v) { return v.is_string() ? v.get<std::string>() : v.is_null() ? std::string() : v.dump(); };
        for (const auto& [key, value] : record.items()) {
            if (value.is_array()) {
                for (std::size_t i = 0; i < value.size(); ++i) cells.emplace_back(key + "_" + std::to_string(i), text(value[i]));
            } else {
                cells.emplace_back(key, text(value));
            }
        }
        return cells;
    }

    std::ostream& out_;
    std::string format_;
    bool header_written_ = false;
};

struct CoeffOptions {
    int k = 0;
    std::string partition;
    std::string matrix;
    std::int64_t delta_max = -1;
    std::int64_t singular_max = 0;
    bool all_forms = false;
    std::string format = "json";
};

inline std::vector<HalfIntegralMatrix> all_forms_in_box(std::int64_t bound) {
    std::vector<HalfIntegralMatrix> out;
    for (std::int64_t m = 0; m <= bound; ++m)
        for (std::int64_t n = 0; n <= bound; ++n)
            for (std::int64_t r = -2 * bound; r <= 2 * bound; ++r) {
                const HalfIntegralMatrix T(m, r, n);
                if (T.discriminant() > 0 && T.discriminant() <= bound && m > 0) out.push_back(T);
            }
    return out;
}

inline int run_coeff(const CoeffOptions& opt, std::ostream& out) {
    const EisensteinSpec spec(opt.k, parse_partition(opt.partition));
    std::vector<HalfIntegralMatrix> forms;
    if (!opt.matrix.empty()) {
        forms.push_back(parse_matrix(opt.matrix));
    } else {
        if (opt.delta_max < 0) throw InputError("coeff: give either -T or --delta-max");
        forms.emplace_back(0, 0, 0);
        for (const auto& t : singular_forms(opt.singular_max)) forms.push_back(t);
        for (const auto& t : opt.all_forms ? all_forms_in_box(opt.delta_max) : reduced_definite_forms(opt.delta_max))
            forms.push_back(t);
    }
    RecordWriter writer(out, opt.format);
    const auto& part = spec.partition();
    for (const auto& T : forms) {
        nlohmann::ordered_json record;
        record["k"] = spec.weight();
        record["partition"] = {part[0], part[1], part[2]};
        record["T"] = {T.m(), T.r(), T.n()};
        record["value"] = to_fraction_string(coefficient(spec, T));
        record.update(matrix_data(T));
        writer.write(record);
    }
    return kOk;
}

struct RepOptions {
    std::string lattice;
    std::string gram_file;
    std::string matrix;
    std::string mode = "formula";
    std::string format = "json";
    unsigned workers = 0;
};

inline int run_rep(const RepOptions& opt, std::ostream& out) {
    if (opt.lattice.empty() == opt.gram_file.empty()) throw InputError("rep: give exactly one of --lattice or --gram");
    const GramMatrix S = opt.lattice.empty() ? load_gram_file(opt.gram_file) : builtin_lattice(opt.lattice);
    const HalfIntegralMatrix T = parse_matrix(opt.matrix);

    nlohmann::ordered_json record;
    record["lattice"] = opt.lattice.empty() ? opt.gram_file : opt.lattice;
    record["T"] = {T.m(), T.r(), T.n()};
    record["mode"] = opt.mode;
    std::optional<Rational> formula;
    std::optional<Rational> count;
    if (opt.mode == "formula" || opt.mode == "both") {
        const auto prof = profile(S);
        record["level"] = prof.level;
        formula = genus_rep_number(S, T);
        record["formula"] = to_fraction_string(*formula);
    }
    if (opt.mode == "enumerate" || opt.mode == "both") {
        count = Rational(Integer(ThetaSeries(S, opt.workers).rep_deg2(T)));
        record["count"] = to_fraction_string(*count);
    }
    record["value"] = to_fraction_string(formula ? *formula : *count);
    const bool match = !(formula && count) || *formula == *count;
    if (formula && count) record["match"] = match;
    record.update(matrix_data(T));
    RecordWriter(out, opt.format).write(record);
    return match ? kOk : kVerificationFailed;
}

inline int run_verify(const std::string& suite, const VerifyBounds& bounds, std::ostream& out) {
    std::vector<SuiteReport> reports;
    if (suite == "identities" || suite == "all") reports.push_back(verify_identities(bounds));
    if (suite == "hecke" || suite == "all") reports.push_back(verify_hecke(bounds));
    if (suite == "lattices" || suite == "all") reports.push_back(verify_lattices(bounds));
    bool ok = true;
    for (const auto& report : reports) {
        for (const auto& check : report.checks) {
            out << (check.ok() ? "PASS " : "FAIL ") << report.suite << ": " << check.property << " (" << check.passed
                << " passed, " << check.failed << " failed)\n";
            for (const auto& f : check.failures) out << "    " << f << '\n';
        }
        ok = ok && report.ok();
    }
    out << (ok ? "all checks passed" : "verification FAILED") << '\n';
    return ok ? kOk : kVerificationFailed;
}

inline int run_basis(std::int64_t level, std::ostream& out) {
    for (const auto& part : level_partitions(level)) {
        nlohmann::ordered_json record;
        record["N"] = level;
        record["partition"] = {part[0], part[1], part[2]};
        nlohmann::ordered_json ranks = nlohmann::ordered_json::object();
        for (const std::int64_t p : prime_divisors(level)) ranks[std::to_string(p)] = part.rank_at(p);
        record["cusp_ranks"] = ranks;
        record["constant_term"] = part.is_infinity_cusp() ? "1/1" : "0/1";
        out << record.dump() << '\n';
    }
    return kOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fourier coefficients of degree 2 Siegel-Eisenstein series of squarefree level"};
    app.require_subcommand(1);

    CoeffOptions coeff;
    auto* coeff_cmd = app.add_subcommand("coeff", "Fourier coefficients a(T; E_{(N0,N1,N2)})");
    coeff_cmd->add_option("-k,--weight", coeff.k, "even weight >= 4")->required();
    coeff_cmd->add_option("-p,--partition", coeff.partition, "N0,N1,N2")->required();
    coeff_cmd->add_option("-T,--matrix", coeff.matrix, "m,r,n for T = (m r/2; r/2 n)");
    coeff_cmd->add_option("--delta-max", coeff.delta_max, "emit every reduced T with 4mn - r^2 <= bound");
    coeff_cmd->add_option("--singular-max", coeff.singular_max, "also emit (e,0,0) for e <= bound in range mode");
    coeff_cmd->add_flag("--all-forms", coeff.all_forms, "range mode: every (m,r,n) in the box, not only reduced ones");
    coeff_cmd->add_option("--format", coeff.format)->check(CLI::IsMember({"json", "csv"}));

    RepOptions rep;
    auto* rep_cmd = app.add_subcommand("rep", "degree 2 representation numbers of a lattice");
    auto* lattice_opt = rep_cmd->add_option("--lattice", rep.lattice, "built-in lattice S1..S5");
    rep_cmd->add_option("--gram", rep.gram_file, "Gram matrix file")->excludes(lattice_opt);
    rep_cmd->add_option("-T,--matrix", rep.matrix, "m,r,n")->required();
    rep_cmd->add_option("--mode", rep.mode)->check(CLI::IsMember({"formula", "enumerate", "both"}));
    rep_cmd->add_option("--workers", rep.workers, "threads for the pair scan (0 = all cores)");
    rep_cmd->add_option("--format", rep.format)->check(CLI::IsMember({"json", "csv"}));

    std::string suite;
    VerifyBounds bounds;
    auto* verify_cmd = app.add_subcommand("verify", "run the self-check suites");
    verify_cmd->add_option("suite", suite)->required()->check(CLI::IsMember({"identities", "hecke", "lattices", "all"}));
    verify_cmd->add_option("--delta-max", bounds.delta_max, "identities: discriminant bound");
    verify_cmd->add_option("--singular-max", bounds.singular_max, "identities: content bound for singular T");
    verify_cmd->add_option("--level-max", bounds.level_max, "identities: largest base level");
    verify_cmd->add_option("--lattice-delta-max", bounds.lattice_delta_max);
    verify_cmd->add_option("--lattice-singular-max", bounds.lattice_singular_max);
    verify_cmd->add_option("--workers", bounds.workers);

    std::int64_t basis_level = 1;
    auto* basis_cmd = app.add_subcommand("basis", "list the natural basis of Eisenstein series of level N");
    basis_cmd->add_option("-N,--level", basis_level)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*coeff_cmd) return run_coeff(coeff, out);
        if (*rep_cmd) return run_rep(rep, out);
        if (*verify_cmd) return run_verify(suite, bounds, out);
        if (*basis_cmd) return run_basis(basis_level, out);
    } catch (const InvalidMatrixError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidMatrix;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const SizeGuardError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace siegel::cli
