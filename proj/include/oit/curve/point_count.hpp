#pragma once

// Traces of Frobenius for y^2 = x^3 + a x + b over F_p.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "oit/arith.hpp"
#include "oit/curve/factor.hpp"
#include "oit/error.hpp"

namespace oit::pc {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Primes below this use the character-sum count.
inline constexpr u64 kNaiveLimit = 1024;

/// a_p = -sum_x (x^3 + a x + b | p), the exact point count.
inline i64 ap_naive(u64 a, u64 b, u64 p) {
    a %= p;
    b %= p;
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    if (p <= (u64{1} << 26)) {
        for (u64 y = 1; y < p; ++y) chi[arith::mulmod(y, y, p)] = 1;
    } else {
        fail(Errc::InvalidArgument, "naive point count is limited to p < 2^26");
    }
    i64 s = 0;
    for (u64 x = 0; x < p; ++x) {
        u64 f = arith::addmod(arith::mulmod(arith::addmod(arith::mulmod(x, x, p), a, p), x, p), b, p);
        s += chi[f];
    }
    return -s;
}

/// Affine points on y^2 = x^3 + a x + b over F_p.
class CurveFp {
public:
    struct Point {
        u64 x = 0, y = 0;
        bool inf = true;
        friend bool operator==(const Point&, const Point&) = default;
    };

    CurveFp(u64 a, u64 b, u64 p) : a_(a % p), b_(b % p), p_(p) {}

    u64 p() const { return p_; }

    Point neg(const Point& q) const { return q.inf ? q : Point{q.x, q.y == 0 ? 0 : p_ - q.y, false}; }

    Point add(const Point& q, const Point& r) const {
        using namespace arith;
        if (q.inf) return r;
        if (r.inf) return q;
        u64 lam;
        if (q.x == r.x) {
            if (addmod(q.y, r.y, p_) == 0) return Point{};
            u64 num = addmod(mulmod(3, mulmod(q.x, q.x, p_), p_), a_, p_);
            lam = mulmod(num, *invmod(mulmod(2, q.y, p_), p_), p_);
        } else {
            lam = mulmod(submod(r.y, q.y, p_), *invmod(submod(r.x, q.x, p_), p_), p_);
        }
        u64 x3 = submod(submod(mulmod(lam, lam, p_), q.x, p_), r.x, p_);
        u64 y3 = submod(mulmod(lam, submod(q.x, x3, p_), p_), q.y, p_);
        return Point{x3, y3, false};
    }

    Point mul(u64 k, Point q) const {
        Point r;
        while (k) {
            if (k & 1) r = add(r, q);
            q = add(q, q);
            k >>= 1;
        }
        return r;
    }

    Point random_point(std::mt19937_64& rng) const {
        for (;;) {
            u64 x = rng() % p_;
            u64 f = rhs(x);
            if (f == 0) return Point{x, 0, false};
            auto y = arith::sqrt_mod_prime(f, p_);
            if (y) return Point{x, (rng() & 1) ? *y : p_ - *y, false};
        }
    }

    u64 rhs(u64 x) const {
        using namespace arith;
        return addmod(mulmod(addmod(mulmod(x, x, p_), a_, p_), x, p_), b_, p_);
    }

    /// Exact order of q, given that its order divides some N in [lo, hi].
    u64 order_in_interval(const Point& q, u64 lo, u64 hi) const {
        const u64 width = hi - lo;
        const u64 m = static_cast<u64>(std::sqrt(static_cast<double>(width))) + 1;
        std::unordered_map<u64, u64> baby;  // x-coordinate -> j, 1 <= j <= m
        Point jp = q;
        for (u64 j = 1; j <= m; ++j) {
            if (jp.inf) return j;  // order <= m, found exactly
            baby.emplace(jp.x, j);
            jp = add(jp, q);
        }
        // search k in [0, width] with (lo + k) q = O, k = i m +- j
        const Point step = neg(mul(m, q));
        Point g = neg(mul(lo, q));
        for (u64 i = 0; i * m <= width + m; ++i) {
            std::optional<u64> k;
            if (g.inf) {
                k = i * m;
            } else if (auto it = baby.find(g.x); it != baby.end()) {
                u64 j = it->second;
                Point jq = mul(j, q);
                if (jq == g) k = i * m + j;
                else if (i * m >= j) k = i * m - j;
            }
            if (k && *k <= width) return reduce_order(q, lo + *k);
            g = add(g, step);
        }
        fail(Errc::InvalidArgument, "no multiple of the point order in the Hasse interval");
    }

private:
    u64 reduce_order(const Point& q, u64 n) const {
        for (u64 f : prime_factors_u64(n)) {
            while (n % f == 0 && mul(n / f, q).inf) n /= f;
        }
        return n;
    }

    u64 a_, b_, p_;
};

struct BsgsStats {
    u64 points = 0;
    u64 fallbacks = 0;
};

/// a_p by baby-step giant-step: the lcm of point orders on E and on its
/// quadratic twist narrows #E in the Hasse interval until one value remains
/// (#E + #E' = 2p + 2). Falls back to exact counting when points stay
/// inconclusive, which cannot happen for p > 229.
inline i64 ap_bsgs(u64 a, u64 b, u64 p, BsgsStats* stats = nullptr, unsigned max_points = 64) {
    using namespace arith;
    if (p < 5) return ap_naive(a, b, p);
    const u64 d = smallest_nonresidue(p);
    const CurveFp e(a, b, p);
    const CurveFp et(mulmod(a % p, mulmod(d, d, p), p), mulmod(b % p, mulmod(d, mulmod(d, d, p), p), p), p);
    const u64 s = static_cast<u64>(std::sqrt(static_cast<long double>(4 * static_cast<long double>(p))));
    u64 w = s;
    while (static_cast<unsigned __int128>(w + 1) * (w + 1) <= static_cast<unsigned __int128>(4) * p) ++w;
    while (static_cast<unsigned __int128>(w) * w > static_cast<unsigned __int128>(4) * p) --w;
    const u64 lo = p + 1 - w, hi = p + 1 + w;
    std::mt19937_64 rng(p * 0x9e3779b97f4a7c15ULL ^ (a % p) * 0xc2b2ae3d27d4eb4fULL ^ (b % p));
    u64 l_e = 1, l_t = 1;
    for (unsigned attempt = 0; attempt < max_points; ++attempt) {
        bool twist = attempt % 2 == 1;
        const CurveFp& c = twist ? et : e;
        auto q = c.random_point(rng);
        u64 ord = c.order_in_interval(q, lo, hi);
        if (stats) ++stats->points;
        if (twist) l_t = std::lcm(l_t, ord);
        else l_e = std::lcm(l_e, ord);
        std::optional<u64> found;
        unsigned count = 0;
        for (u64 n = (lo + l_e - 1) / l_e * l_e; n <= hi; n += l_e) {
            if ((2 * p + 2 - n) % l_t == 0) {
                found = n;
                if (++count > 1) break;
            }
        }
        if (count == 1) return static_cast<i64>(p + 1) - static_cast<i64>(*found);
    }
    if (stats) ++stats->fallbacks;
    return ap_naive(a, b, p);
}

/// a_p by the documented strategy: exact counting for p < 1024, BSGS above.
inline i64 ap_mod_p(u64 a, u64 b, u64 p, BsgsStats* stats = nullptr) {
    if (p < kNaiveLimit) return ap_naive(a, b, p);
    return ap_bsgs(a, b, p, stats);
}

}  // namespace oit::pc
