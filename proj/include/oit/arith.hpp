#pragma once

// 64-bit modular arithmetic and small-prime utilities shared by every module.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "oit/error.hpp"

namespace oit::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

constexpr u64 mulmod(u64 a, u64 b, u64 m) {
    if (m <= (u64{1} << 32)) return (a * b) % m;
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 addmod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    return (s >= m || s < a) ? s - m : s;
}

constexpr u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

/// Residue of a signed value in [0, m).
constexpr u64 reduce(i64 x, u64 m) {
    if (x >= 0) return static_cast<u64>(x) % m;
    u64 r = static_cast<u64>(-(x + 1)) % m;  // avoids overflow at INT64_MIN
    return m - 1 - r;
}

constexpr u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
constexpr std::optional<u64> invmod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = static_cast<i64>(m), nr = static_cast<i64>(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        i64 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) return std::nullopt;
    return reduce(t, m);
}

constexpr u64 ipow(u64 base, unsigned exp) {
    u64 r = 1;
    while (exp--) r *= base;
    return r;
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
constexpr bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2u, 325u, 9375u, 28178u, 450775u, 9780504u, 1795265022u}) {
        u64 x = powmod(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<u64> primes_up_to(u64 x) {
    std::vector<u64> out;
    if (x < 2) return out;
    std::vector<bool> composite(x + 1, false);
    for (u64 i = 2; i <= x; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= x; j += i) composite[j] = true;
    }
    return out;
}

/// Legendre symbol (a | p) for an odd prime p, in {-1, 0, 1}.
constexpr int legendre(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    u64 r = powmod(a, (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

/// Square root of a quadratic residue a modulo an odd prime p (Tonelli-Shanks).
inline std::optional<u64> sqrt_mod_prime(u64 a, u64 p) {
    a %= p;
    if (a == 0) return u64{0};
    if (legendre(a, p) != 1) return std::nullopt;
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (legendre(z, p) != -1) ++z;
    u64 m = s;
    u64 c = powmod(z, q, p);
    u64 t = powmod(a, q, p);
    u64 r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

/// Square root of a unit a modulo p^n (p odd), lifted by Hensel's lemma.
inline std::optional<u64> sqrt_mod_prime_power(u64 a, u64 p, unsigned n) {
    auto r0 = sqrt_mod_prime(a % p, p);
    if (!r0 || *r0 == 0) return std::nullopt;
    u64 r = *r0;
    u64 mod = p;
    for (unsigned k = 1; k < n; ++k) {
        mod *= p;
        // r <- r - (r^2 - a) / (2r)
        u64 f = submod(mulmod(r, r, mod), a % mod, mod);
        u64 inv = *invmod(mulmod(2, r, mod), mod);
        r = submod(r, mulmod(f, inv, mod), mod);
    }
    return r;
}

/// Distinct prime factors of n by trial division; n is small here.
inline std::vector<u64> distinct_prime_factors_small(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

/// Multiplicative order of a unit a modulo m, given the group exponent
/// (any multiple of the order) and its prime factors.
inline u64 unit_order(u64 a, u64 m, u64 exponent, const std::vector<u64>& exp_primes) {
    u64 ord = exponent;
    for (u64 q : exp_primes) {
        while (ord % q == 0 && powmod(a, ord / q, m) == 1) ord /= q;
    }
    return ord;
}

/// A generator of the cyclic group (Z/p^n)^x for an odd prime p.
inline u64 primitive_root_prime_power(u64 p, unsigned n) {
    auto qs = distinct_prime_factors_small(p - 1);
    u64 g = 2;
    for (;; ++g) {
        bool ok = true;
        for (u64 q : qs) {
            if (powmod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) break;
    }
    if (n >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
    return g;
}

/// Smallest quadratic non-residue modulo an odd prime p.
inline u64 smallest_nonresidue(u64 p) {
    for (u64 e = 2;; ++e) {
        if (legendre(e, p) == -1) return e;
    }
}

/// Primes in increasing order from 2, sieved one segment at a time.
class PrimeStream {
public:
    explicit PrimeStream(u64 segment = u64{1} << 16) : seg_(segment) {}

    u64 next() {
        while (idx_ >= cur_.size()) fill();
        return cur_[idx_++];
    }

private:
    void fill() {
        const u64 lo = hi_, hi = hi_ + seg_;
        while (base_top_ * base_top_ < hi) extend_base();
        std::vector<bool> composite(seg_, false);
        for (u64 q : base_) {
            if (q * q >= hi) break;
            u64 start = std::max(q * q, (lo + q - 1) / q * q);
            for (u64 j = start; j < hi; j += q) composite[j - lo] = true;
        }
        cur_.clear();
        idx_ = 0;
        for (u64 v = std::max<u64>(lo, 2); v < hi; ++v)
            if (!composite[v - lo]) cur_.push_back(v);
        hi_ = hi;
    }

    void extend_base() {
        base_top_ = base_top_ * 2 + 64;
        base_ = primes_up_to(base_top_);
    }

    u64 seg_;
    u64 hi_ = 0;
    u64 base_top_ = 0;
    std::vector<u64> base_;
    std::vector<u64> cur_;
    std::size_t idx_ = 0;
};

}  // namespace oit::arith
