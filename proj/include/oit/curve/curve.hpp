#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "oit/arith.hpp"
#include "oit/curve/factor.hpp"
#include "oit/curve/point_count.hpp"
#include "oit/error.hpp"

namespace oit {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

/// y^2 = x^3 + a x + b over Q.
class Curve {
public:
    Curve(BigInt a, BigInt b) : a_(std::move(a)), b_(std::move(b)) {
        if (disc_core() == 0)
            fail(Errc::SingularCurve, "4a^3 + 27b^2 = 0 for a=" + a_.str() + ", b=" + b_.str());
    }
    Curve(long long a, long long b) : Curve(BigInt(a), BigInt(b)) {}

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }

    BigInt disc_core() const { return 4 * a_ * a_ * a_ + 27 * b_ * b_; }

    /// Canonical encoding used for cache keys: "a=<a>,b=<b>".
    std::string key() const { return "a=" + a_.str() + ",b=" + b_.str(); }

    friend bool operator==(const Curve&, const Curve&) = default;

private:
    BigInt a_, b_;
};

struct CurveData {
    BigInt disc_core;
    BigInt j_num, j_den;
    double height_j;

    std::string j_string() const { return j_num.str() + "/" + j_den.str(); }
};

/// log |x| for a nonzero integer of any size.
inline double log_abs(const BigInt& x) {
    BigFloat f(x < 0 ? BigInt(-x) : x);
    return static_cast<double>(boost::multiprecision::log(f));
}

/// j = c4^3 / Delta = 6912 a^3 / (4a^3 + 27b^2) in lowest terms; h(j) = log max(|num|, den).
inline CurveData curve_data(const Curve& e) {
    CurveData d;
    d.disc_core = e.disc_core();
    BigInt num = 6912 * e.a() * e.a() * e.a();
    BigInt den = d.disc_core;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g == 0) g = 1;
    d.j_num = num / g;
    d.j_den = den / g;
    BigInt absnum = d.j_num < 0 ? BigInt(-d.j_num) : d.j_num;
    d.height_j = log_abs(absnum > d.j_den ? absnum : d.j_den);
    return d;
}

/// Conservative bad-reduction data of the model after removing p^4 | a, p^6 | b
/// for p >= 5. 2 is always present; 3 whenever it divides the reduced 4a^3+27b^2.
struct ReductionData {
    BigInt reduced_a, reduced_b;
    BigInt reduced_disc_core;
    Factorization disc_factorization;  // of the original 4a^3 + 27b^2
    std::vector<BigInt> bad_primes;
    BigInt N;
    unsigned omega = 0;

    bool is_bad(std::uint64_t p) const {
        for (const auto& q : bad_primes)
            if (q == p) return true;
        return false;
    }
};

inline ReductionData bad_primes(const Curve& e, const FactorOptions& opt = {}) {
    ReductionData r;
    r.disc_factorization = factorize(e.disc_core(), opt);
    r.reduced_a = e.a();
    r.reduced_b = e.b();
    r.reduced_disc_core = e.disc_core();
    for (const auto& [p, k] : r.disc_factorization) {
        if (p < 5) continue;
        BigInt p4 = p * p * p * p, p6 = p4 * p * p;
        while (r.reduced_a % p4 == 0 && r.reduced_b % p6 == 0) {
            r.reduced_a /= p4;
            r.reduced_b /= p6;
            r.reduced_disc_core /= p6 * p6;
        }
    }
    r.bad_primes.push_back(2);
    for (const auto& [p, k] : r.disc_factorization) {
        if (p == 2) continue;
        if (r.reduced_disc_core % p == 0) r.bad_primes.push_back(p);
    }
    r.N = 1;
    for (const auto& p : r.bad_primes) r.N *= p;
    r.omega = static_cast<unsigned>(r.bad_primes.size());
    return r;
}

struct ApRecord {
    std::uint64_t p;
    std::int64_t ap;
    friend bool operator==(const ApRecord&, const ApRecord&) = default;
};

/// A curve together with its reduction data, so repeated a_p queries do not
/// refactor the discriminant.
class PreparedCurve {
public:
    explicit PreparedCurve(Curve e, const FactorOptions& opt = {}) : e_(std::move(e)), red_(bad_primes(e_, opt)) {}

    const Curve& curve() const { return e_; }
    const ReductionData& reduction() const { return red_; }

    std::int64_t ap(std::uint64_t p, pc::BsgsStats* stats = nullptr) const {
        if (p < 2 || !arith::is_prime(p)) fail(Errc::InvalidArgument, std::to_string(p) + " is not prime");
        if (red_.is_bad(p)) fail(Errc::BadReduction, std::to_string(p) + " is a bad prime of " + e_.key());
        std::uint64_t a = residue(red_.reduced_a, p), b = residue(red_.reduced_b, p);
        if (p == 3) return pc::ap_naive(a, b, p);
        return pc::ap_mod_p(a, b, p, stats);
    }

    /// Good primes p <= x with their a_p, ascending. When lookup is given it
    /// supplies each value (e.g. from a cache).
    std::vector<ApRecord> ap_range(std::uint64_t x,
                                   const std::function<std::int64_t(std::uint64_t)>& lookup = {}) const {
        std::vector<ApRecord> out;
        for (std::uint64_t p : arith::primes_up_to(x)) {
            if (red_.is_bad(p)) continue;
            out.push_back({p, lookup ? lookup(p) : ap(p)});
        }
        return out;
    }

    std::uint64_t pi_e_r(std::int64_t r, std::uint64_t x) const {
        std::uint64_t count = 0;
        for (const auto& rec : ap_range(x)) count += rec.ap == r;
        return count;
    }

private:
    static std::uint64_t residue(const BigInt& v, std::uint64_t p) {
        BigInt r = v % p;
        if (r < 0) r += p;
        return static_cast<std::uint64_t>(r);
    }

    Curve e_;
    ReductionData red_;
};

inline std::int64_t ap(const Curve& e, std::uint64_t p) { return PreparedCurve(e).ap(p); }

inline std::vector<ApRecord> ap_range(const Curve& e, std::uint64_t x) { return PreparedCurve(e).ap_range(x); }

inline std::uint64_t pi_e_r(const Curve& e, std::int64_t r, std::uint64_t x) { return PreparedCurve(e).pi_e_r(r, x); }

}  // namespace oit
