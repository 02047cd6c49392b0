#pragma once

// Command-line front end. Every report is JSON with "schema": "oit/1" unless
// CSV is requested; integers wider than 64 bits are written as decimal strings.
// Exit status: 0 ok, 1 domain error, 2 usage error, 3 falsification finding.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oit/cache.hpp"
#include "oit/characters.hpp"
#include "oit/curve/curve.hpp"
#include "oit/error.hpp"
#include "oit/langtrotter.hpp"
#include "oit/verify.hpp"

namespace oit::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2, kViolation = 3 };

inline constexpr const char* kSchema = "oit/1";

inline Json big(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

inline std::string sci(const BigFloat& v, int digits = 12) { return v.str(digits, std::ios::scientific); }

inline Json header(const std::string& command) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = command;
    return j;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline BigInt parse_int(const std::string& s, const char* flag) {
    static const std::regex re("-?[0-9]+");
    if (!std::regex_match(s, re)) throw UsageError(std::string(flag) + " expects an integer, got \"" + s + "\"");
    return BigInt(s);
}

inline Json curve_json(const Curve& e) {
    Json j;
    j["a"] = big(e.a());
    j["b"] = big(e.b());
    return j;
}

inline Json reduction_json(const ReductionData& r) {
    Json j;
    Json fac = Json::array();
    for (const auto& [p, k] : r.disc_factorization) fac.push_back(Json{{"p", big(p)}, {"k", k}});
    j["disc_factorization"] = fac;
    j["reduced_model"] = Json{{"a", big(r.reduced_a)}, {"b", big(r.reduced_b)}};
    Json bad = Json::array();
    for (const auto& p : r.bad_primes) bad.push_back(big(p));
    j["bad_primes"] = bad;
    j["N"] = big(r.N);
    j["omega"] = r.omega;
    j["N_note"] =
        "N is a conservative multiple of the product of the primes of bad reduction: 2 is always included, and 3 whenever it "
        "divides the reduced 4a^3+27b^2";
    return j;
}

inline Json cache_json(const ApCache& c) {
    return Json{{"path", c.path().string()}, {"computed", c.computed()}};
}

struct CurveArgs {
    std::string a, b;
    Curve curve() const { return Curve(parse_int(a, "--a"), parse_int(b, "--b")); }
};

inline void add_curve(CLI::App* sub, CurveArgs& c) {
    sub->add_option("--a", c.a, "coefficient a of y^2 = x^3 + a x + b")->required();
    sub->add_option("--b", c.b, "coefficient b")->required();
}

inline Json analyze(const Curve& e) {
    Json j = header("analyze");
    j["curve"] = curve_json(e);
    const auto d = curve_data(e);
    j["disc_core"] = big(d.disc_core);
    const PreparedCurve pc(e);
    const Json red = reduction_json(pc.reduction());
    for (const auto& [k, v] : red.items()) j[k] = v;
    j["j"] = d.j_string();
    j["height"] = d.height_j;
    j["cm_j_invariant"] = is_cm_j(d);
    return j;
}

/// Whether every non-trivial character takes -1 at some step prime.
inline bool bound_coverage(const ExceptionalModulusReport& r) {
    CharSpace space(r.reduction.N);
    for (std::uint64_t mask = 1; mask <= space.full_mask(); ++mask) {
        bool hit = false;
        for (const auto& s : r.steps) hit = hit || space.eval(QuadChar{mask}, s.p) == -1;
        if (!hit) return false;
    }
    return true;
}

inline Json bound_json(const ExceptionalModulusReport& r) {
    Json j = header("bound");
    j["curve"] = curve_json(r.curve);
    j["N"] = big(r.reduction.N);
    j["omega"] = r.reduction.omega;
    j["N0"] = big(CharSpace(r.reduction.N).N0());
    Json steps = Json::array();
    for (const auto& s : r.steps)
        steps.push_back(Json{{"character", s.alpha_name}, {"mask", s.alpha.mask}, {"p", s.p}, {"a_p", s.ap},
                             {"dim_before", s.dim_before}});
    j["steps"] = steps;
    j["M"] = big(r.M);
    j["m24"] = big(r.m24);
    j["kraus_bound"] = static_cast<double>(r.kraus_bound);
    j["loglog_clamped"] = r.loglog_clamped;
    j["coverage"] = bound_coverage(r);
    j["m_bound"] = sci(r.m_bound);
    const auto ib = index_bounds(r);
    j["index_bounds"] = Json{{"m24", big(ib.m24)},
                             {"m24_label", ib.m24_label},
                             {"closed_form", sci(ib.closed_form)},
                             {"excluded_modulus", ib.excluded_modulus},
                             {"coprime_statement", ib.coprime_statement}};
    j["reduction"] = reduction_json(r.reduction);
    return j;
}

inline std::string bound_csv(const ExceptionalModulusReport& r) {
    std::string out = "step,character,mask,p,a_p,dim_before\n";
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const auto& s = r.steps[i];
        out += std::to_string(i + 1) + "," + s.alpha_name + "," + std::to_string(s.alpha.mask) + "," +
               std::to_string(s.p) + "," + std::to_string(s.ap) + "," + std::to_string(s.dim_before) + "\n";
    }
    return out;
}

inline Json surjectivity_json(const Curve& e, const SurjectivityVerdict& v, std::uint64_t x) {
    Json j = header("surjectivity");
    j["curve"] = curve_json(e);
    j["ell"] = v.ell;
    j["x"] = x;
    j["status"] = v.status();
    j["surjective"] = v.surjective;
    Json w = Json::array();
    for (const auto& s : v.witnesses) w.push_back(Json{{"class", to_string(s.cls)}, {"p", s.p}, {"a_p", s.ap}});
    j["witnesses"] = w;
    j["primes_scanned"] = v.primes_scanned;
    return j;
}

inline Json lt_constant_json(const LTConstant& c) {
    Json j = header("lt-constant");
    j["r"] = c.r;
    j["cutoff"] = c.cutoff;
    j["value"] = static_cast<double>(c.value);
    j["value_decimal"] = c.value.str(25);
    j["tail_bound"] = c.tail_bound;
    j["note"] = "truncated Euler product over primes <= cutoff, computed by this artifact";
    return j;
}

inline Json average_json(const AverageReport& r) {
    Json j = header("average");
    j["A"] = r.A;
    j["B"] = r.B;
    j["r"] = r.r;
    j["x"] = r.x;
    j["sample_size"] = r.sample_size;
    j["seed"] = r.seed;
    j["empirical_mean"] = r.empirical_mean;
    j["c_r"] = r.c_r;
    j["c_r_cutoff"] = kAverageCutoff;
    j["reference"] = r.reference;
    j["ratio"] = r.ratio;
    Json s = Json::array();
    for (const auto& x : r.samples) s.push_back(Json::array({x.a, x.b, x.count}));
    j["samples"] = s;
    return j;
}

inline Json verify_json(const std::vector<verify::SuiteResult>& suites, const verify::GroupTheoryOptions& opt) {
    Json j = header("verify");
    j["suite"] = "group-theory";
    j["ell"] = opt.ell;
    j["level"] = opt.level;
    j["seed"] = opt.seed;
    bool all = true;
    Json arr = Json::array();
    for (const auto& s : suites) {
        Json checks = Json::array();
        for (const auto& c : s.checks) {
            Json cj{{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}};
            if (!c.passed) cj["counterexample"] = c.detail;
            checks.push_back(cj);
        }
        arr.push_back(Json{{"name", s.name}, {"passed", s.passed()}, {"cases", s.cases()}, {"checks", checks}});
        all = all && s.passed();
    }
    j["suites"] = arr;
    j["passed"] = all;
    return j;
}

inline int exit_code_for(const Error& e) { return e.is_violation() ? kViolation : kDomainError; }

inline Json error_json(const std::string& command, const Error& e) {
    Json j = header(command);
    j["error"] = Json{{"code", std::string(errc_name(e.code()))}, {"message", e.what()}};
    return j;
}

/// Parse argv and run one command, writing the report to out.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Open image and Lang-Trotter toolkit for elliptic curves y^2 = x^3 + ax + b", "oit"};
    app.require_subcommand(1);
    app.allow_extras(false);

    CurveArgs analyze_c, bound_c, surj_c, count_c;
    std::string cache_dir = "ap-cache";
    auto cache_flag = [&](CLI::App* s) {
        s->add_option("--cache-dir", cache_dir, "directory of per-curve a_p cache files")->capture_default_str();
    };

    auto* a_cmd = app.add_subcommand("analyze", "discriminant, bad primes, N, j-invariant and height");
    add_curve(a_cmd, analyze_c);

    auto* b_cmd = app.add_subcommand("bound", "greedy exceptional modulus M and the index bounds");
    add_curve(b_cmd, bound_c);
    bool as_json = false, as_csv = false;
    std::uint64_t search_limit = 0;
    auto* jf = b_cmd->add_flag("--json", as_json, "JSON report (default)");
    auto* cf = b_cmd->add_flag("--csv", as_csv, "CSV table of the greedy steps");
    jf->excludes(cf);
    b_cmd->add_option("--search-limit", search_limit, "stop witness searches at this prime (0: the Kraus bound)");
    cache_flag(b_cmd);

    auto* s_cmd = app.add_subcommand("surjectivity", "sufficient test for surjectivity mod ell");
    add_curve(s_cmd, surj_c);
    std::uint64_t ell = 0, x_surj = 0;
    s_cmd->add_option("--ell", ell, "prime >= 5")->required();
    s_cmd->add_option("--x", x_surj, "scan good primes up to x")->required();
    cache_flag(s_cmd);

    auto* c_cmd = app.add_subcommand("lt-constant", "truncated Euler product for C_r");
    std::int64_t r_const = 0;
    std::uint64_t cutoff = 0;
    c_cmd->add_option("--r", r_const, "trace value r")->required();
    c_cmd->add_option("--cutoff", cutoff, "prime cutoff T >= 3")->required();

    auto* n_cmd = app.add_subcommand("lt-count", "pi_{E,r}(x) = #{good p <= x : a_p = r}");
    add_curve(n_cmd, count_c);
    std::int64_t r_count = 0;
    std::uint64_t x_count = 0;
    n_cmd->add_option("--r", r_count, "trace value r")->required();
    n_cmd->add_option("--x", x_count, "prime bound x")->required();
    cache_flag(n_cmd);

    auto* v_cmd = app.add_subcommand("average", "mean of pi_{E,r}(x) over a seeded sample of the box F(A, B)");
    std::int64_t A = 0, B = 0, r_avg = 0;
    std::uint64_t x_avg = 0, sample = 0, seed = 0;
    unsigned threads = 0;
    v_cmd->add_option("--A", A, "half-width for a")->required();
    v_cmd->add_option("--B", B, "half-width for b")->required();
    v_cmd->add_option("--r", r_avg, "trace value r")->required();
    v_cmd->add_option("--x", x_avg, "prime bound x")->required();
    v_cmd->add_option("--sample", sample, "sample size")->required();
    v_cmd->add_option("--seed", seed, "RNG seed")->required();
    v_cmd->add_option("--threads", threads, "worker threads (0: hardware); output does not depend on it");

    auto* y_cmd = app.add_subcommand("verify", "finite verification suites");
    y_cmd->require_subcommand(1);
    auto* g_cmd = y_cmd->add_subcommand("group-theory", "matgroup and Lang-Trotter invariant suites");
    verify::GroupTheoryOptions vopt;
    g_cmd->add_option("--ell", vopt.ell, "odd prime")->capture_default_str();
    g_cmd->add_option("--level", vopt.level, "exponent n of the level ell^n")->capture_default_str();
    g_cmd->add_option("--seed", vopt.seed, "seed of the randomized checks")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsageError;
    }

    std::string command = app.get_subcommands().front()->get_name();
    auto emit = [&](const Json& j) { out << j.dump(2) << '\n'; };
    try {
        if (*a_cmd) {
            emit(analyze(analyze_c.curve()));
        } else if (*b_cmd) {
            PreparedCurve pc(bound_c.curve());
            ApCache cache(cache_dir, pc);
            WitnessOptions wo;
            wo.search_limit = search_limit;
            auto rep = exceptional_modulus(pc, cache.source(), wo);
            cache.flush();
            if (as_csv) {
                out << bound_csv(rep);
            } else {
                Json j = bound_json(rep);
                j["cache"] = cache_json(cache);
                emit(j);
            }
        } else if (*s_cmd) {
            PreparedCurve pc(surj_c.curve());
            ApCache cache(cache_dir, pc);
            auto v = surjectivity_test(pc, ell, x_surj, cache.source());
            cache.flush();
            Json j = surjectivity_json(pc.curve(), v, x_surj);
            j["cache"] = cache_json(cache);
            emit(j);
        } else if (*c_cmd) {
            emit(lt_constant_json(lt_constant(r_const, cutoff)));
        } else if (*n_cmd) {
            PreparedCurve pc(count_c.curve());
            ApCache cache(cache_dir, pc);
            auto recs = pc.ap_range(x_count, cache.source());
            cache.flush();
            Json j = header("lt-count");
            j["curve"] = curve_json(pc.curve());
            j["r"] = r_count;
            j["x"] = x_count;
            Json primes = Json::array();
            for (const auto& rec : recs)
                if (rec.ap == r_count) primes.push_back(rec.p);
            j["count"] = primes.size();
            j["primes"] = primes;
            j["good_primes_scanned"] = recs.size();
            j["cache"] = cache_json(cache);
            emit(j);
        } else if (*v_cmd) {
            if (A < 2 || B < 2 || x_avg < 10 || sample < 1)
                fail(Errc::InvalidArgument, "average needs A, B >= 2, x >= 10 and sample >= 1");
            emit(average_json(average_experiment(A, B, r_avg, x_avg, sample, seed, threads)));
        } else if (*y_cmd) {
            command = "verify";
            auto suites = verify::group_theory(vopt);
            Json j = verify_json(suites, vopt);
            emit(j);
            for (const auto& s : suites)
                if (const auto* f = s.first_failure()) {
                    err << "TheoremViolation in " << s.name << ": " << f->name << ": " << f->detail << '\n';
                    return kViolation;
                }
        }
    } catch (const UsageError& e) {
        err << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        emit(error_json(command, e));
        err << e.what() << '\n';
        return exit_code_for(e);
    }
    return kOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<const char*> argv{"oit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace oit::cli
