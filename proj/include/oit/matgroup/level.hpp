#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "oit/arith.hpp"
#include "oit/error.hpp"

namespace oit {

/// The ring Z/ell^n Z for an odd prime ell.
class Level {
public:
    Level(std::uint64_t ell, unsigned n) : ell_(ell), n_(n) {
        if (ell == 2) fail(Errc::InvalidArgument, "ell = 2 is not supported; ell must be an odd prime");
        if (!arith::is_prime(ell)) fail(Errc::InvalidArgument, "ell = " + std::to_string(ell) + " is not prime");
        if (n == 0) fail(Errc::InvalidArgument, "exponent n must be >= 1");
        std::uint64_t m = 1;
        for (unsigned i = 0; i < n; ++i) {
            if (m > (std::uint64_t{1} << 62) / ell)
                fail(Errc::InvalidArgument, "ell^n does not fit in 62 bits");
            m *= ell;
        }
        modulus_ = m;
    }

    /// The level whose modulus is m; m must be a power of an odd prime.
    static Level from_modulus(std::uint64_t m) {
        if (m < 3) fail(Errc::InvalidArgument, "modulus " + std::to_string(m) + " is not an odd prime power");
        std::uint64_t p = 2;
        while (p * p <= m && m % p != 0) ++p;
        if (m % p != 0) p = m;
        unsigned n = 0;
        std::uint64_t r = m;
        while (r % p == 0) {
            r /= p;
            ++n;
        }
        if (r != 1) fail(Errc::InvalidArgument, "modulus " + std::to_string(m) + " is not a prime power");
        return Level(p, n);
    }

    std::uint64_t ell() const { return ell_; }
    unsigned n() const { return n_; }
    std::uint64_t modulus() const { return modulus_; }

    /// ell^k for k <= n.
    std::uint64_t power(unsigned k) const { return arith::ipow(ell_, k); }

    Level with_exponent(unsigned k) const { return Level(ell_, k); }

    /// Order of (Z/ell^n)^x.
    std::uint64_t unit_count() const { return modulus_ / ell_ * (ell_ - 1); }

    /// |GL_2(Z/ell^n)| = (ell^2-1)(ell^2-ell) ell^{4(n-1)}.
    std::uint64_t gl2_order() const {
        return (ell_ * ell_ - 1) * (ell_ * ell_ - ell_) * arith::ipow(ell_, 4 * (n_ - 1));
    }

    bool is_unit(std::uint64_t x) const { return x % ell_ != 0; }

    std::string to_string() const {
        return "(" + std::to_string(ell_) + "," + std::to_string(n_) + ")";
    }

    friend bool operator==(const Level& a, const Level& b) { return a.ell_ == b.ell_ && a.n_ == b.n_; }

private:
    std::uint64_t ell_;
    unsigned n_;
    std::uint64_t modulus_;
};

inline void require_same_level(const Level& a, const Level& b) {
    if (!(a == b)) fail(Errc::LevelMismatch, "levels " + a.to_string() + " and " + b.to_string() + " differ");
}

}  // namespace oit
