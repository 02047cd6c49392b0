#pragma once

// Quadratic Dirichlet characters mod N0, witness primes, the greedy
// exceptional modulus and the index bounds built on it.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "oit/arith.hpp"
#include "oit/curve/curve.hpp"
#include "oit/error.hpp"

namespace oit {

/// Jacobi symbol (a | n) for odd positive n.
inline int jacobi(BigInt a, BigInt n) {
    if (n <= 0 || n % 2 == 0) fail(Errc::InvalidArgument, "jacobi symbol needs odd positive n");
    a %= n;
    if (a < 0) a += n;
    int s = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            unsigned r = static_cast<unsigned>(n % 8);
            if (r == 3 || r == 5) s = -s;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) s = -s;
        a %= n;
    }
    return n == 1 ? s : 0;
}

/// One basis character: the mod-4 character (prime == 2) or the Legendre
/// symbol mod an odd prime.
struct BasisChar {
    BigInt prime;

    std::string name() const { return prime == 2 ? "chi4" : "chi" + prime.str(); }

    int eval(std::uint64_t p) const {
        if (prime == 2) return p % 4 == 1 ? 1 : -1;
        if (prime <= std::numeric_limits<std::uint64_t>::max()) {
            return arith::legendre(p, static_cast<std::uint64_t>(prime));
        }
        return jacobi(BigInt(p), prime);
    }
};

/// A quadratic character as an F2 exponent vector over the basis (bit k is
/// the k-th basis character).
struct QuadChar {
    std::uint64_t mask = 0;

    bool trivial() const { return mask == 0; }
    friend bool operator==(const QuadChar&, const QuadChar&) = default;
};

class CharSpace {
public:
    explicit CharSpace(const BigInt& N) : N_(N) {
        if (N < 2) fail(Errc::InvalidArgument, "character space needs N >= 2");
        for (const auto& [p, k] : factorize(N)) {
            if (k > 1) fail(Errc::NotSquarefree, N.str() + " is divisible by " + p.str() + "^2");
            basis_.push_back({p});
        }
        if (basis_.size() > 64) fail(Errc::InvalidArgument, "more than 64 prime factors");
        N0_ = N % 2 == 0 ? BigInt(2 * N) : N;
    }

    const BigInt& N() const { return N_; }
    const BigInt& N0() const { return N0_; }
    unsigned dim() const { return static_cast<unsigned>(basis_.size()); }
    const std::vector<BasisChar>& basis() const { return basis_; }

    QuadChar basis_char(unsigned k) const { return {std::uint64_t{1} << k}; }

    std::uint64_t full_mask() const { return dim() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dim()) - 1; }

    /// Bit k set when the k-th basis character is -1 at p.
    std::uint64_t sign_vector(std::uint64_t p) const {
        if (N0_ % p == 0) fail(Errc::Ramified, std::to_string(p) + " divides " + N0_.str());
        std::uint64_t s = 0;
        for (unsigned k = 0; k < dim(); ++k)
            if (basis_[k].eval(p) == -1) s |= std::uint64_t{1} << k;
        return s;
    }

    int eval(QuadChar chi, std::uint64_t p) const {
        return std::popcount(chi.mask & sign_vector(p)) % 2 ? -1 : 1;
    }

    std::string name(QuadChar chi) const {
        if (chi.trivial()) return "1";
        std::string out;
        for (unsigned k = 0; k < dim(); ++k) {
            if (!(chi.mask >> k & 1)) continue;
            if (!out.empty()) out += "*";
            out += basis_[k].name();
        }
        return out;
    }

private:
    BigInt N_, N0_;
    std::vector<BasisChar> basis_;
};

inline CharSpace char_space(const BigInt& N) { return CharSpace(N); }

inline int char_eval(const CharSpace& space, QuadChar chi, std::uint64_t p) { return space.eval(chi, p); }

/// A subspace of F2^dim kept as an echelon basis with distinct leading bits.
class F2Subspace {
public:
    static F2Subspace full(unsigned dim) {
        F2Subspace s;
        for (unsigned k = dim; k-- > 0;) s.basis_.push_back(std::uint64_t{1} << k);
        return s;
    }

    unsigned dim() const { return static_cast<unsigned>(basis_.size()); }
    const std::vector<std::uint64_t>& basis() const { return basis_; }

    /// Kernel of v -> parity(v & s).
    F2Subspace kernel(std::uint64_t s) const {
        F2Subspace out;
        std::optional<std::uint64_t> pivot;
        for (auto v : basis_) {
            if (std::popcount(v & s) % 2 == 0) {
                out.basis_.push_back(v);
            } else if (!pivot) {
                pivot = v;
            } else {
                out.basis_.push_back(v ^ *pivot);
            }
        }
        out.echelonize();
        return out;
    }

    /// Smallest nonzero element as an integer: with distinct leading bits,
    /// it is the basis vector with the lowest leading bit.
    std::optional<std::uint64_t> smallest_nonzero() const {
        if (basis_.empty()) return std::nullopt;
        return basis_.back();
    }

    bool contains(std::uint64_t v) const {
        for (auto b : basis_)
            if (std::bit_width(v) == std::bit_width(b)) v ^= b;
        return v == 0;
    }

private:
    // Sorted by descending leading bit; each leading bit is cleared from the others.
    void echelonize() {
        std::vector<std::uint64_t> rows;
        for (auto v : basis_) {
            for (auto r : rows)
                if (v >> (std::bit_width(r) - 1) & 1) v ^= r;
            if (!v) continue;
            for (auto& r : rows)
                if (r >> (std::bit_width(v) - 1) & 1) r ^= v;
            rows.push_back(v);
        }
        std::sort(rows.begin(), rows.end(), std::greater<>());
        basis_ = std::move(rows);
    }

    std::vector<std::uint64_t> basis_;
};

/// 1 + log log N, clamped to at least 1 (it is below 1 for N = 2).
inline BigFloat loglog_factor(const BigInt& N) {
    using boost::multiprecision::log;
    BigFloat f = 1 + log(log(BigFloat(N)));
    return f < 1 ? BigFloat(1) : f;
}

/// 1152 N^2 (1 + log log N).
inline BigFloat kraus_bound(const BigInt& N) { return BigFloat(1152) * BigFloat(N) * BigFloat(N) * loglog_factor(N); }

/// 68 N (1 + log log N)^{1/2}.
inline BigFloat kraus_ell_bound(const BigInt& N) {
    return BigFloat(68) * BigFloat(N) * boost::multiprecision::sqrt(loglog_factor(N));
}

/// j-invariants of the CM curves over Q.
inline bool is_cm_j(const CurveData& d) {
    static const char* const kCm[] = {"0",        "1728",       "-3375",         "8000",           "-32768",
                                      "54000",    "287496",     "-884736",       "-12288000",      "16581375",
                                      "-884736000", "-147197952000", "-262537412640768000"};
    if (d.j_den != 1) return false;
    for (const char* s : kCm)
        if (d.j_num == BigInt(s)) return true;
    return false;
}

/// Source of a_p values; PreparedCurve::ap when empty.
using ApSource = std::function<std::int64_t(std::uint64_t)>;

struct WitnessOptions {
    /// Stop the search here even if the Kraus bound is larger (0: no limit).
    std::uint64_t search_limit = 0;
};

struct Witness {
    std::uint64_t p;
    std::int64_t ap;
};

namespace detail {

inline std::uint64_t bound_as_u64(const BigFloat& b) {
    if (b >= BigFloat(std::numeric_limits<std::uint64_t>::max() / 2)) return std::numeric_limits<std::uint64_t>::max() / 2;
    return static_cast<std::uint64_t>(boost::multiprecision::floor(b));
}

}  // namespace detail

/// Smallest prime p not dividing N with chi(p) = -1 and a_p != 0.
inline Witness witness_prime(const PreparedCurve& e, const CharSpace& space, QuadChar chi, const ApSource& source = {},
                             const WitnessOptions& opt = {}) {
    if (chi.trivial()) fail(Errc::InvalidArgument, "witness search needs a non-trivial character");
    const BigFloat bound = kraus_bound(space.N());
    const std::uint64_t kraus = detail::bound_as_u64(bound);
    const std::uint64_t limit = opt.search_limit ? std::min(opt.search_limit, kraus) : kraus;
    arith::PrimeStream primes;
    for (std::uint64_t p = primes.next(); p <= limit; p = primes.next()) {
        if (space.N0() % p == 0 || e.reduction().is_bad(p)) continue;
        if (space.eval(chi, p) != -1) continue;
        std::int64_t a = source ? source(p) : e.ap(p);
        if (a != 0) return {p, a};
    }
    const std::string what = "no prime p <= " + std::to_string(limit) + " with " + space.name(chi) +
                             "(p) = -1 and a_p != 0 for " + e.curve().key();
    if (is_cm_j(curve_data(e.curve())))
        fail(Errc::NoWitnessWithinBound, what + " (likely CM: j is a CM j-invariant)");
    if (limit < kraus) fail(Errc::NoWitnessWithinBound, what + " (search limit below the Kraus bound)");
    fail(Errc::BoundViolation, what + "; the Kraus bound " + bound.str(12) + " was exhausted for a non-CM curve");
}

struct GreedyStep {
    QuadChar alpha;
    std::string alpha_name;
    std::uint64_t p;
    std::int64_t ap;
    unsigned dim_before;
};

struct ExceptionalModulusReport {
    Curve curve;
    ReductionData reduction;
    std::vector<GreedyStep> steps;
    BigInt M;
    BigFloat kraus_bound;
    BigInt m24;
    BigFloat closed_form_bound;  // (68 N (1 + log log N)^{1/2})^{24 omega}
    BigFloat m_bound;            // (68 N (1 + log log N)^{1/2})^{omega}, the bound M obeys
    bool loglog_clamped = false;
};

inline BigInt pow24(const BigInt& m) { return boost::multiprecision::pow(m, 24); }

inline BigFloat closed_form_bound(const BigInt& N, unsigned omega) {
    return boost::multiprecision::pow(kraus_ell_bound(N), 24 * static_cast<int>(omega));
}

inline ExceptionalModulusReport exceptional_modulus(const PreparedCurve& e, const ApSource& source = {},
                                                    const WitnessOptions& opt = {}) {
    const auto& red = e.reduction();
    CharSpace space(red.N);
    ExceptionalModulusReport r{e.curve(), red, {}, 1, kraus_bound(red.N), 1, 0, 0, false};
    r.loglog_clamped = 1 + boost::multiprecision::log(boost::multiprecision::log(BigFloat(red.N))) < 1;
    F2Subspace v = F2Subspace::full(space.dim());
    while (auto alpha = v.smallest_nonzero()) {
        QuadChar chi{*alpha};
        Witness w = witness_prime(e, space, chi, source, opt);
        r.steps.push_back({chi, space.name(chi), w.p, w.ap, v.dim()});
        r.M *= w.ap < 0 ? -w.ap : w.ap;
        v = v.kernel(space.sign_vector(w.p));
    }
    r.m24 = pow24(r.M);
    r.closed_form_bound = closed_form_bound(red.N, red.omega);
    r.m_bound = boost::multiprecision::pow(kraus_ell_bound(red.N), static_cast<int>(red.omega));
    return r;
}

inline ExceptionalModulusReport exceptional_modulus(const Curve& e) { return exceptional_modulus(PreparedCurve(e)); }

/// 37 * prod_{l <= 17} l.
inline constexpr std::uint64_t kExcludedModulus = 37ULL * 2 * 3 * 5 * 7 * 11 * 13 * 17;

struct IndexBounds {
    BigInt m24;
    std::string m24_label;
    BigFloat closed_form;
    std::uint64_t excluded_modulus;
    std::string coprime_statement;
};

inline IndexBounds index_bounds(const ExceptionalModulusReport& r) {
    IndexBounds b;
    b.m24 = r.m24;
    b.m24_label = "index bound up to the absolute constant C: [GL2(Zhat) : image] <= C * M^24";
    b.closed_form = r.closed_form_bound;
    b.excluded_modulus = kExcludedModulus;
    b.coprime_statement = "for every m coprime to " + std::to_string(kExcludedModulus) +
                          ", [GL2(Z/mZ) : image mod m] <= (68 N (1+loglog N)^(1/2))^(24 omega(N))";
    return b;
}

enum class WitnessClass { A, B, C };

inline const char* to_string(WitnessClass c) {
    switch (c) {
        case WitnessClass::A: return "a";
        case WitnessClass::B: return "b";
        case WitnessClass::C: return "c";
    }
    return "?";
}

struct SurjectivityWitness {
    WitnessClass cls;
    std::uint64_t p;
    std::int64_t ap;
};

struct SurjectivityVerdict {
    std::uint64_t ell;
    bool surjective = false;
    std::vector<SurjectivityWitness> witnesses;
    std::uint64_t primes_scanned = 0;

    std::string status() const { return surjective ? "Surjective" : "Undecided"; }
};

/// Classes a, b, c an individual (a_p, p) falls into mod ell.
inline std::vector<WitnessClass> witness_classes(std::int64_t ap, std::uint64_t p, std::uint64_t ell) {
    using namespace arith;
    std::vector<WitnessClass> out;
    const u64 t = reduce(ap, ell), q = p % ell;
    const u64 disc = submod(mulmod(t, t, ell), mulmod(4, q, ell), ell);
    if (t != 0) {
        if (disc != 0 && legendre(disc, ell) == -1) out.push_back(WitnessClass::A);
        if (disc != 0 && legendre(disc, ell) == 1) out.push_back(WitnessClass::B);
    }
    if (q != 0) {
        const u64 u = mulmod(mulmod(t, t, ell), *invmod(q, ell), ell);
        const u64 quad = addmod(submod(mulmod(u, u, ell), mulmod(3, u, ell), ell), 1, ell);
        if (u != 0 && u != 1 && u != 2 && u != 4 && quad != 0) out.push_back(WitnessClass::C);
    }
    return out;
}

/// Sufficient test for surjectivity mod ell from a_p data at good p <= x.
inline SurjectivityVerdict surjectivity_test(const PreparedCurve& e, std::uint64_t ell, std::uint64_t x,
                                             const ApSource& source = {}) {
    if (ell < 5 || !arith::is_prime(ell)) fail(Errc::InvalidArgument, "ell must be a prime >= 5");
    if (e.reduction().N % ell == 0) fail(Errc::BadPrime, std::to_string(ell) + " divides N");
    SurjectivityVerdict v{ell, false, {}, 0};
    bool seen[3] = {false, false, false};
    for (std::uint64_t p : arith::primes_up_to(x)) {
        if (p == ell || e.reduction().is_bad(p)) continue;
        ++v.primes_scanned;
        std::int64_t a = source ? source(p) : e.ap(p);
        for (auto c : witness_classes(a, p, ell)) {
            auto k = static_cast<unsigned>(c);
            if (seen[k]) continue;
            seen[k] = true;
            v.witnesses.push_back({c, p, a});
        }
        if (seen[0] && seen[1] && seen[2]) break;
    }
    v.surjective = seen[0] && seen[1] && seen[2];
    return v;
}

}  // namespace oit
