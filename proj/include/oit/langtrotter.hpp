#pragma once

// Lang-Trotter constants: Euler factors of C_r, the truncated product, finite
// level trace ratios and the averaging experiment over a box of curves.

#include <cstdint>
#include <future>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "oit/arith.hpp"
#include "oit/curve/curve.hpp"
#include "oit/error.hpp"
#include "oit/matgroup/closure.hpp"
#include "oit/matgroup/mat_group.hpp"
#include "oit/matgroup/mod_matrix.hpp"

namespace oit {

using Rational = boost::rational<BigInt>;

struct LocalFactor {
    std::uint64_t ell;
    std::uint64_t r_class;
    Rational value;
};

/// l^2/(l^2-1) when l | r, l(l^2-l-1)/((l-1)(l^2-1)) otherwise.
inline LocalFactor local_factor(std::uint64_t ell, std::int64_t r) {
    if (!arith::is_prime(ell)) fail(Errc::InvalidArgument, std::to_string(ell) + " is not prime");
    const std::uint64_t cls = arith::reduce(r, ell);
    const BigInt l = ell;
    if (cls == 0) return {ell, cls, Rational(l * l, l * l - 1)};
    return {ell, cls, Rational(l * (l * l - l - 1), (l - 1) * (l * l - 1))};
}

/// #{A in GL2(F_l) : tr A = t}: l^2(l-1) for t = 0, l(l^2-l-1) otherwise.
inline std::uint64_t gl2_prime_trace_count(std::uint64_t ell, std::uint64_t t) {
    return t % ell == 0 ? ell * ell * (ell - 1) : ell * (ell * ell - ell - 1);
}

/// #{A in GL2(Z/m) : tr A = r mod m}. Each lift from level l to l^n fixes the
/// trace in one of l^{n-1} equally sized classes; CRT multiplies the primes.
inline BigInt gl2_trace_count(std::uint64_t m, std::int64_t r) {
    BigInt count = 1;
    for (auto [p, k] : factorize(BigInt(m))) {
        const auto ell = static_cast<std::uint64_t>(p);
        count *= BigInt(gl2_prime_trace_count(ell, arith::reduce(r, ell))) * boost::multiprecision::pow(BigInt(ell), 3 * (k - 1));
    }
    return count;
}

/// |GL2(Z/m)| = prod over l^k || m of (l^2-1)(l^2-l) l^{4(k-1)}.
inline BigInt gl2_order(std::uint64_t m) {
    BigInt order = 1;
    for (auto [p, k] : factorize(BigInt(m))) order *= (p * p - 1) * (p * p - p) * boost::multiprecision::pow(p, 4 * (k - 1));
    return order;
}

struct LTConstant {
    std::int64_t r;
    std::uint64_t cutoff;
    BigFloat value;
    double tail_bound;  // bound on |log(C_r / value)|
};

/// sum_{n > T} 2/n^2.
inline double lt_tail_bound(std::uint64_t cutoff) {
    return 2 * boost::math::trigamma(static_cast<double>(cutoff) + 1);
}

/// (2/pi) prod_{l <= T} local_factor(l, r).
inline LTConstant lt_constant(std::int64_t r, std::uint64_t cutoff) {
    if (cutoff < 3) fail(Errc::InvalidArgument, "cutoff must be >= 3");
    BigFloat v = 2 / boost::math::constants::pi<BigFloat>();
    for (std::uint64_t ell : arith::primes_up_to(cutoff)) {
        const auto f = local_factor(ell, r).value;
        v *= BigFloat(f.numerator()) / BigFloat(f.denominator());
    }
    return {r, cutoff, v, lt_tail_bound(cutoff)};
}

struct TraceRatio {
    std::uint64_t modulus;
    std::uint64_t order;
    std::uint64_t trace_count;
    Rational ratio;  // m * trace_count / |G|
};

enum class ClosureCheck { Exhaustive, Sampled, Trusted };

namespace detail {

/// NotAGroup unless `elems` is a set of invertible matrices mod m closed under products.
inline void check_group(std::span<const ModMatrix> elems, ClosureCheck how) {
    if (elems.empty()) fail(Errc::NotAGroup, "empty element set");
    if (how == ClosureCheck::Trusted) return;
    const auto m = elems[0].modulus();
    std::vector<std::uint64_t> keys;
    keys.reserve(elems.size());
    for (const auto& x : elems) {
        if (x.modulus() != m) fail(Errc::LevelMismatch, "elements have different moduli");
        if (!x.is_invertible()) fail(Errc::NotAGroup, x.to_string() + " is not invertible");
        keys.push_back(x.key());
    }
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) fail(Errc::NotAGroup, "repeated element");
    auto has = [&](const ModMatrix& x) { return std::binary_search(keys.begin(), keys.end(), x.key()); };
    auto check = [&](const ModMatrix& x, const ModMatrix& y) {
        if (!has(x * y)) fail(Errc::NotAGroup, "product " + x.to_string() + " * " + y.to_string() + " is missing");
    };
    const std::size_t n = elems.size();
    if (how == ClosureCheck::Exhaustive || n * n <= (std::size_t{1} << 20)) {
        for (const auto& x : elems)
            for (const auto& y : elems) check(x, y);
        return;
    }
    std::mt19937_64 rng(n);
    for (int i = 0; i < 4096; ++i) check(elems[rng() % n], elems[rng() % n]);
}

}  // namespace detail

/// Residue counts of the trace, indexed by tr mod m.
inline std::vector<std::uint64_t> trace_census(std::span<const ModMatrix> elems) {
    if (elems.empty()) return {};
    std::vector<std::uint64_t> census(elems[0].modulus(), 0);
    for (const auto& x : elems) ++census[x.trace()];
    return census;
}

inline TraceRatio trace_count_ratio(std::span<const ModMatrix> elems, std::int64_t r,
                                    ClosureCheck how = ClosureCheck::Sampled) {
    detail::check_group(elems, how);
    const auto m = elems[0].modulus();
    const auto t = arith::reduce(r, m);
    std::uint64_t count = 0;
    for (const auto& x : elems) count += x.trace() == t;
    return {m, elems.size(), count, Rational(BigInt(m) * count, BigInt(elems.size()))};
}

inline TraceRatio trace_count_ratio(const MatGroup& g, std::int64_t r) {
    auto elems = g.materialize().elements();
    return trace_count_ratio(elems, r, ClosureCheck::Trusted);
}

/// ratio(G, r) <= [GL2(Z/m) : G] * ratio(GL2(Z/m), r).
inline bool lt_inequality_check(std::span<const ModMatrix> elems, std::int64_t r,
                                ClosureCheck how = ClosureCheck::Sampled) {
    const auto tr = trace_count_ratio(elems, r, how);
    const BigInt full = gl2_order(tr.modulus);
    const Rational index(full, BigInt(tr.order));
    const Rational full_ratio(BigInt(tr.modulus) * gl2_trace_count(tr.modulus, r), full);
    return tr.ratio <= index * full_ratio;
}

inline bool lt_inequality_check(const MatGroup& g, std::int64_t r) {
    auto elems = g.materialize().elements();
    return lt_inequality_check(elems, r, ClosureCheck::Trusted);
}

/// Uniform integer in [lo, hi] by rejection; independent of the standard
/// library's distribution implementation so runs are reproducible everywhere.
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    for (;;) {
        std::uint64_t v = rng();
        if (v < limit) return lo + static_cast<std::int64_t>(v % span);
    }
}

struct AverageSample {
    std::int64_t a, b;
    std::uint64_t count;
};

struct AverageReport {
    std::int64_t A, B, r;
    std::uint64_t x, sample_size, seed;
    std::vector<AverageSample> samples;
    double empirical_mean;
    double c_r;        // at cutoff 10^4
    double reference;  // C_r sqrt(x) / log x
    double ratio;
};

inline constexpr std::uint64_t kAverageCutoff = 10000;

/// Mean of pi_{E(a,b),r}(x) over a seeded uniform sample of F(A, B).
inline AverageReport average_experiment(std::int64_t A, std::int64_t B, std::int64_t r, std::uint64_t x,
                                        std::uint64_t sample_size, std::uint64_t seed, unsigned threads = 0) {
    if (A < 1 || B < 1 || sample_size < 1) fail(Errc::InvalidArgument, "need A, B >= 1 and sample size >= 1");
    AverageReport rep{A, B, r, x, sample_size, seed, {}, 0, 0, 0, 0};
    std::mt19937_64 rng(seed);
    while (rep.samples.size() < sample_size) {
        std::int64_t a = uniform_int(rng, -A, A), b = uniform_int(rng, -B, B);
        if (4 * BigInt(a) * a * a + 27 * BigInt(b) * b == 0) continue;
        rep.samples.push_back({a, b, 0});
    }
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(sample_size));
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < threads; ++w) {
        jobs.push_back(std::async(std::launch::async, [&rep, w, threads, r, x] {
            for (std::size_t i = w; i < rep.samples.size(); i += threads) {
                auto& s = rep.samples[i];
                s.count = PreparedCurve(Curve(s.a, s.b)).pi_e_r(r, x);
            }
        }));
    }
    for (auto& j : jobs) j.get();
    std::uint64_t total = 0;
    for (const auto& s : rep.samples) total += s.count;
    rep.empirical_mean = static_cast<double>(total) / static_cast<double>(sample_size);
    rep.c_r = static_cast<double>(lt_constant(r, kAverageCutoff).value);
    rep.reference = x >= 2 ? rep.c_r * std::sqrt(static_cast<double>(x)) / std::log(static_cast<double>(x)) : 0.0;
    rep.ratio = rep.reference > 0 ? rep.empirical_mean / rep.reference : 0.0;
    return rep;
}

}  // namespace oit
