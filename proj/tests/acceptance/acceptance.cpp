// Acceptance run: one line per criterion, exit status 1 if any gating
// criterion fails. Criterion 10 is reported but never gates.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oit/characters.hpp"
#include "oit/curve/curve.hpp"
#include "oit/langtrotter.hpp"
#include "oit/verify.hpp"

using namespace oit;
using u64 = std::uint64_t;

namespace {

constexpr u64 kSeed = 20240601;

struct Outcome {
    bool passed = true;
    std::string detail;
};

Outcome from_checks(const std::vector<verify::CheckResult>& checks) {
    Outcome o;
    u64 cases = 0;
    for (const auto& c : checks) {
        cases += c.cases;
        if (!c.passed && o.passed) {
            o.passed = false;
            o.detail = c.name + ": " + c.detail;
        }
    }
    if (o.passed) o.detail = std::to_string(checks.size()) + " checks, " + std::to_string(cases) + " cases";
    return o;
}

int failures = 0;

void criterion(int id, const char* title, double limit_s, bool gating, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && s > limit_s && o.passed) o = {false, "over the time limit; " + o.detail};
    const char* verdict = o.passed ? "PASS" : gating ? "FAIL" : "FLAG";
    if (!o.passed && gating) ++failures;
    std::printf("criterion %2d %s  %-40s %8.2fs", id, verdict, title, s);
    if (limit_s > 0) std::printf(" (limit %.0fs)", limit_s);
    std::printf("  %s\n", o.detail.c_str());
    std::fflush(stdout);
}

// a_p = p - #{(x, y) mod p : y^2 = x^3 + ax + b}, straight from the definition
std::int64_t ap_by_count(std::int64_t a, std::int64_t b, std::int64_t p) {
    std::int64_t affine = 0;
    for (std::int64_t x = 0; x < p; ++x)
        for (std::int64_t y = 0; y < p; ++y)
            if (((y * y - x * x % p * x - a * x - b) % p + 2 * p) % p == 0) ++affine;
    return p - affine;
}

// Legendre symbol by Euler's criterion
int legendre_euler(u64 a, u64 p) {
    u64 r = 1, base = a % p, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return r == 1 ? 1 : r == 0 ? 0 : -1;
}

}  // namespace

int main() {
    std::printf("acceptance run, seed %llu\n", static_cast<unsigned long long>(kSeed));

    criterion(1, "Euler-factor census", 30, true, [] {
        return from_checks({verify::euler_census({3, 5, 7, 11, 13})});
    });

    criterion(2, "Cartan suite", 120, true, [] {
        std::vector<verify::CheckResult> checks{verify::cartan_orders({3, 5, 7}, 3)};
        for (unsigned n = 1; n <= 2; ++n)
            for (auto& c : verify::centralizer_lemma(Level(3, n))) checks.push_back(std::move(c));
        verify::CentralizerOptions sampled{false, 1000, kSeed};
        for (u64 l : {5, 7})
            for (auto& c : verify::centralizer_lemma(Level(l, 2), sampled)) checks.push_back(std::move(c));
        checks.push_back(verify::pgl2_order_lemma({3, 5, 7, 11}));
        for (const auto& c : checks)
            if (c.name.rfind("(", 0) == 0 && c.name.find("sampled") != std::string::npos && c.cases < 1000)
                return Outcome{false, c.name + ": only " + std::to_string(c.cases) + " cases"};
        return from_checks(checks);
    });

    criterion(3, "Representation suite", 60, true, [] {
        return from_checks(verify::representation({5, 7, 11, 13}, kSeed));
    });

    criterion(4, "Filtration suite", 0, true, [] {
        auto o = from_checks({verify::filtration_structured(Level(3, 4)), verify::filtration_random(Level(3, 4), 100, kSeed)});
        return o;
    });

    criterion(5, "Dichotomy", 300, true, [] {
        return from_checks({verify::dichotomy_named(), verify::dichotomy_random({5, 7, 11, 13}, 100, kSeed)});
    });

    criterion(6, "a_p oracle equivalence (BSGS vs naive)", 120, true, [] {
        std::mt19937_64 rng(kSeed);
        u64 records = 0, fallbacks = 0;
        for (int k = 0; k < 200;) {
            std::int64_t a = uniform_int(rng, -1000, 1000), b = uniform_int(rng, -1000, 1000);
            if (4 * a * a * a + 27 * b * b == 0) continue;
            ++k;
            PreparedCurve e(Curve(a, b));
            const auto& red = e.reduction();
            for (u64 p : arith::primes_up_to(1000)) {
                if (red.is_bad(p)) continue;
                auto res = [&](const BigInt& v) { return static_cast<u64>(((v % p) + p) % p); };
                const u64 ra = res(red.reduced_a), rb = res(red.reduced_b);
                pc::BsgsStats st;
                const auto fast = pc::ap_bsgs(ra, rb, p, &st);
                const auto slow = pc::ap_naive(ra, rb, p);
                fallbacks += st.fallbacks;
                ++records;
                if (fast != slow)
                    return Outcome{false, "E=(" + std::to_string(a) + "," + std::to_string(b) + ") p=" + std::to_string(p) +
                                              ": bsgs " + std::to_string(fast) + ", naive " + std::to_string(slow)};
                if (static_cast<std::int64_t>(slow * slow) > static_cast<std::int64_t>(4 * p))
                    return Outcome{false, "Hasse fails at p=" + std::to_string(p)};
            }
        }
        return Outcome{true, "200 curves, " + std::to_string(records) + " records, " + std::to_string(fallbacks) +
                                 " exact-count fallbacks"};
    });

    criterion(7, "Bound pipeline on E=(1,1)", 10, true, [] {
        auto rep = exceptional_modulus(Curve(1, 1));
        const std::int64_t a7 = ap_by_count(1, 1, 7), a11 = ap_by_count(1, 1, 11);
        if (rep.steps.size() != 2 || rep.steps[0].alpha_name != "chi4" || rep.steps[0].p != 7 || rep.steps[0].ap != a7 ||
            rep.steps[1].alpha_name != "chi31" || rep.steps[1].p != 11 || rep.steps[1].ap != a11)
            return Outcome{false, "unexpected transcript"};
        if (rep.M != std::abs(a7 * a11)) return Outcome{false, "M = " + rep.M.str()};
        const double kraus = 1152.0 * 62 * 62 * (1 + std::log(std::log(62.0)));
        for (const auto& s : rep.steps)
            if (static_cast<double>(s.p) >= kraus) return Outcome{false, "step prime above the Kraus bound"};
        // characters mod 124: chi4^e1 chi31^e2, chi4(p) = (-1)^((p-1)/2)
        for (int e1 = 0; e1 < 2; ++e1)
            for (int e2 = 0; e2 < 2; ++e2) {
                if (e1 == 0 && e2 == 0) continue;
                bool hit = false;
                for (u64 p : {7, 11}) {
                    int v = (e1 ? ((p - 1) / 2 % 2 ? -1 : 1) : 1) * (e2 ? legendre_euler(p, 31) : 1);
                    hit = hit || v == -1;
                }
                if (!hit) return Outcome{false, "character (" + std::to_string(e1) + "," + std::to_string(e2) + ") not covered"};
            }
        char buf[200];
        std::snprintf(buf, sizeof buf, "(chi4,7,%lld),(chi31,11,%lld), M=%s, Kraus %.4g, coverage mod 124 ok",
                      static_cast<long long>(a7), static_cast<long long>(a11), rep.M.str().c_str(), kraus);
        return Outcome{true, buf};
    });

    criterion(8, "Trace-ratio inequality on subgroups", 120, true, [] {
        return from_checks({verify::lt_inequality_gl2f3(), verify::lt_inequality_random(5, 100, kSeed)});
    });

    criterion(9, "Supersingular count pi_{E,0}(50), E=(1,0)", 1, true, [] {
        const auto n = pi_e_r(Curve(1, 0), 0, 50);
        return Outcome{n == 8, "count " + std::to_string(n)};
    });

    criterion(10, "Stochastic smoke (non-gating)", 0, false, [] {
        const u64 seed = 1;
        auto rep = average_experiment(1000000, 1000000, 1, 10000, 300, seed);
        char buf[200];
        std::snprintf(buf, sizeof buf, "seed %llu: mean %.6f, reference %.6f, ratio %.6f (band [0.5, 2.0])",
                      static_cast<unsigned long long>(seed), rep.empirical_mean, rep.reference, rep.ratio);
        return Outcome{rep.ratio >= 0.5 && rep.ratio <= 2.0, buf};
    });

    std::printf("%s: %d gating failure(s)\n", failures ? "FAILED" : "ALL GATING CRITERIA PASSED", failures);
    return failures ? 1 : 0;
}
