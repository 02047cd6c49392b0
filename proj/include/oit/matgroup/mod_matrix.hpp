#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

#include "oit/arith.hpp"
#include "oit/error.hpp"

namespace oit {

/// A 2x2 matrix over Z/mZ stored row-major: (a b; c d).
///
/// The modulus is carried by value so the same type serves the prime-power
/// levels of the group code and the composite moduli of trace censuses.
class ModMatrix {
public:
    using u64 = std::uint64_t;

    /// Largest modulus whose entries fit the 16-bit packed key.
    static constexpr u64 kMaxKeyModulus = u64{1} << 16;

    ModMatrix() = default;

    ModMatrix(u64 modulus, u64 a, u64 b, u64 c, u64 d)
        : m_(modulus), e_{a % modulus, b % modulus, c % modulus, d % modulus} {}

    static ModMatrix from_signed(u64 modulus, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
        return ModMatrix(modulus, arith::reduce(a, modulus), arith::reduce(b, modulus), arith::reduce(c, modulus),
                         arith::reduce(d, modulus));
    }

    static ModMatrix identity(u64 modulus) { return ModMatrix(modulus, 1, 0, 0, 1); }
    static ModMatrix scalar(u64 modulus, u64 s) { return ModMatrix(modulus, s, 0, 0, s); }
    static ModMatrix zero(u64 modulus) { return ModMatrix(modulus, 0, 0, 0, 0); }

    u64 modulus() const { return m_; }
    u64 a() const { return e_[0]; }
    u64 b() const { return e_[1]; }
    u64 c() const { return e_[2]; }
    u64 d() const { return e_[3]; }
    u64 operator[](int i) const { return e_[i]; }
    const std::array<u64, 4>& entries() const { return e_; }

    u64 trace() const { return arith::addmod(e_[0], e_[3], m_); }

    u64 det() const { return arith::submod(arith::mulmod(e_[0], e_[3], m_), arith::mulmod(e_[1], e_[2], m_), m_); }

    /// tr^2 - 4 det.
    u64 discriminant() const {
        u64 t = trace();
        return arith::submod(arith::mulmod(t, t, m_), arith::mulmod(4 % m_, det(), m_), m_);
    }

    bool is_invertible() const { return std::gcd(det(), m_) == 1; }

    ModMatrix operator*(const ModMatrix& o) const {
        using arith::addmod;
        using arith::mulmod;
        if (m_ <= kMaxKeyModulus) {
            // entries < 2^16, so sums of two products stay below 2^33
            return ModMatrix(m_, (e_[0] * o.e_[0] + e_[1] * o.e_[2]) % m_, (e_[0] * o.e_[1] + e_[1] * o.e_[3]) % m_,
                             (e_[2] * o.e_[0] + e_[3] * o.e_[2]) % m_, (e_[2] * o.e_[1] + e_[3] * o.e_[3]) % m_,
                             Raw{});
        }
        return ModMatrix(m_, addmod(mulmod(e_[0], o.e_[0], m_), mulmod(e_[1], o.e_[2], m_), m_),
                         addmod(mulmod(e_[0], o.e_[1], m_), mulmod(e_[1], o.e_[3], m_), m_),
                         addmod(mulmod(e_[2], o.e_[0], m_), mulmod(e_[3], o.e_[2], m_), m_),
                         addmod(mulmod(e_[2], o.e_[1], m_), mulmod(e_[3], o.e_[3], m_), m_), Raw{});
    }

    ModMatrix& operator*=(const ModMatrix& o) { return *this = *this * o; }

    ModMatrix operator+(const ModMatrix& o) const {
        return ModMatrix(m_, arith::addmod(e_[0], o.e_[0], m_), arith::addmod(e_[1], o.e_[1], m_),
                         arith::addmod(e_[2], o.e_[2], m_), arith::addmod(e_[3], o.e_[3], m_), Raw{});
    }

    ModMatrix operator-(const ModMatrix& o) const {
        return ModMatrix(m_, arith::submod(e_[0], o.e_[0], m_), arith::submod(e_[1], o.e_[1], m_),
                         arith::submod(e_[2], o.e_[2], m_), arith::submod(e_[3], o.e_[3], m_), Raw{});
    }

    ModMatrix scaled(u64 s) const {
        s %= m_;
        return ModMatrix(m_, arith::mulmod(e_[0], s, m_), arith::mulmod(e_[1], s, m_), arith::mulmod(e_[2], s, m_),
                         arith::mulmod(e_[3], s, m_), Raw{});
    }

    ModMatrix inverse() const {
        auto inv = arith::invmod(det(), m_);
        if (!inv) fail(Errc::NonUnitDet, "matrix " + to_string() + " is not invertible");
        u64 s = *inv;
        return ModMatrix(m_, arith::mulmod(e_[3], s, m_), arith::mulmod(arith::submod(0, e_[1], m_), s, m_),
                         arith::mulmod(arith::submod(0, e_[2], m_), s, m_), arith::mulmod(e_[0], s, m_), Raw{});
    }

    ModMatrix pow(u64 k) const {
        ModMatrix r = identity(m_), base = *this;
        while (k) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }

    /// g * this * g^{-1}
    ModMatrix conjugated_by(const ModMatrix& g) const { return g * (*this) * g.inverse(); }

    /// Entrywise reduction to a modulus dividing the current one.
    ModMatrix reduced(u64 modulus) const { return ModMatrix(modulus, e_[0], e_[1], e_[2], e_[3]); }

    /// Same residues read as integers in [0, m) and placed at a larger modulus.
    ModMatrix lifted(u64 modulus) const { return ModMatrix(modulus, e_[0], e_[1], e_[2], e_[3]); }

    bool is_identity() const { return e_[0] == 1 % m_ && e_[1] == 0 && e_[2] == 0 && e_[3] == 1 % m_; }
    bool is_scalar() const { return e_[1] == 0 && e_[2] == 0 && e_[0] == e_[3]; }

    /// Four residues packed little-endian, 16 bits each.
    u64 key() const { return e_[0] | (e_[1] << 16) | (e_[2] << 32) | (e_[3] << 48); }

    static ModMatrix from_key(u64 modulus, u64 key) {
        return ModMatrix(modulus, key & 0xffff, (key >> 16) & 0xffff, (key >> 32) & 0xffff, key >> 48, Raw{});
    }

    std::string to_string() const {
        return "[[" + std::to_string(e_[0]) + "," + std::to_string(e_[1]) + "],[" + std::to_string(e_[2]) + "," +
               std::to_string(e_[3]) + "]] mod " + std::to_string(m_);
    }

    friend bool operator==(const ModMatrix& x, const ModMatrix& y) { return x.m_ == y.m_ && x.e_ == y.e_; }

    friend std::ostream& operator<<(std::ostream& os, const ModMatrix& x) { return os << x.to_string(); }

private:
    struct Raw {};
    ModMatrix(u64 m, u64 a, u64 b, u64 c, u64 d, Raw) : m_(m), e_{a, b, c, d} {}

    u64 m_ = 1;
    std::array<u64, 4> e_{0, 0, 0, 0};
};

/// [A, B] = AB - BA
inline ModMatrix bracket(const ModMatrix& x, const ModMatrix& y) { return x * y - y * x; }

/// x y x^{-1} y^{-1}
inline ModMatrix group_commutator(const ModMatrix& x, const ModMatrix& y) {
    return x * y * x.inverse() * y.inverse();
}

}  // namespace oit
