#pragma once

// Integer factorization: trial division, then Pollard rho (Brent's variant)
// with an iteration budget. Cofactors that resist the budget are an error.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "oit/arith.hpp"
#include "oit/error.hpp"

namespace oit {

using BigInt = boost::multiprecision::cpp_int;

struct FactorOptions {
    std::uint64_t trial_limit = 1'000'000;
    /// Pollard rho iterations allowed per composite cofactor.
    std::uint64_t rho_budget = std::uint64_t{1} << 24;
};

/// Prime factorization as ascending (prime, exponent) pairs.
using Factorization = std::vector<std::pair<BigInt, unsigned>>;

inline bool is_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    if (n <= std::numeric_limits<std::uint64_t>::max()) return arith::is_prime(static_cast<std::uint64_t>(n));
    return boost::multiprecision::miller_rabin_test(n, 40);
}

namespace detail {

inline std::uint64_t rho_u64(std::uint64_t n, std::uint64_t budget) {
    using arith::mulmod;
    if (n % 2 == 0) return 2;
    for (std::uint64_t c = 1; c < 64; ++c) {
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2, spent = 0;
        std::uint64_t r = 1;
        const std::uint64_t m = 128;
        auto f = [&](std::uint64_t v) { return arith::addmod(mulmod(v, v, n), c, n); };
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            for (std::uint64_t k = 0; k < r && g == 1; k += m) {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                spent += m;
            }
            r *= 2;
            if (spent > budget) return 0;
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
    return 0;
}

inline BigInt rho_big(const BigInt& n, std::uint64_t budget) {
    for (unsigned c = 1; c < 16; ++c) {
        BigInt x = 2, y = 2, d = 1, q = 1;
        std::uint64_t spent = 0;
        auto f = [&](const BigInt& v) { return (v * v + c) % n; };
        while (d == 1) {
            for (int i = 0; i < 64; ++i) {
                x = f(x);
                y = f(f(y));
                q = (q * (x > y ? x - y : y - x)) % n;
            }
            spent += 64;
            d = boost::multiprecision::gcd(q, n);
            if (spent > budget) return 0;
        }
        if (d != n) return d;
    }
    return 0;
}

inline void split(const BigInt& n, const FactorOptions& opt, std::map<BigInt, unsigned>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++out[n];
        return;
    }
    BigInt d;
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        d = rho_u64(static_cast<std::uint64_t>(n), opt.rho_budget);
    } else {
        d = rho_big(n, opt.rho_budget);
    }
    if (d == 0 || d == 1 || d == n)
        fail(Errc::FactorizationTimeout, "could not split " + n.str() + " within the rho budget");
    split(d, opt, out);
    split(n / d, opt, out);
}

}  // namespace detail

/// Distinct prime factors of a 64-bit n: trial division by small primes, then rho.
inline std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p < 1000 && p * p <= n; ++p) {
        if (n % p) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    std::vector<std::uint64_t> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        std::uint64_t x = stack.back();
        stack.pop_back();
        if (arith::is_prime(x)) {
            out.push_back(x);
            continue;
        }
        std::uint64_t d = detail::rho_u64(x, std::numeric_limits<std::uint64_t>::max() / 2);
        if (d == 0) fail(Errc::FactorizationTimeout, "could not split " + std::to_string(x));
        stack.push_back(d);
        stack.push_back(x / d);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Factorization of |n| for n != 0.
inline Factorization factorize(BigInt n, const FactorOptions& opt = {}) {
    if (n < 0) n = -n;
    if (n == 0) fail(Errc::InvalidArgument, "cannot factor 0");
    std::map<BigInt, unsigned> found;
    std::uint64_t p = 2;
    while (p <= opt.trial_limit && n > std::numeric_limits<std::uint64_t>::max()) {
        while (n % p == 0) {
            ++found[BigInt(p)];
            n /= p;
        }
        p += (p == 2 ? 1 : 2);
    }
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        auto v = static_cast<std::uint64_t>(n);
        for (; p <= opt.trial_limit && p * p <= v; p += (p == 2 ? 1 : 2)) {
            while (v % p == 0) {
                ++found[BigInt(p)];
                v /= p;
            }
        }
        n = v;
    }
    if (n > 1) detail::split(n, opt, found);
    return Factorization(found.begin(), found.end());
}

}  // namespace oit
