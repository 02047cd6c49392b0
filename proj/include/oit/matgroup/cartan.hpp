#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oit/arith.hpp"
#include "oit/error.hpp"
#include "oit/matgroup/level.hpp"
#include "oit/matgroup/mod_matrix.hpp"

namespace oit {

enum class CartanKind { Split, Nonsplit };

enum class CartanPosition { InCartan, InNormalizerOnly, Outside };

inline const char* to_string(CartanKind k) { return k == CartanKind::Split ? "split" : "nonsplit"; }

inline const char* to_string(CartanPosition p) {
    switch (p) {
        case CartanPosition::InCartan: return "InCartan";
        case CartanPosition::InNormalizerOnly: return "InNormalizerOnly";
        case CartanPosition::Outside: return "Outside";
    }
    return "?";
}

/// A Cartan subgroup C(ell^n) of GL_2(Z/ell^n), stored as g * C_std * g^{-1}
/// where C_std is the diagonal torus (split) or {(a, eps b; b, a)} (nonsplit).
/// Membership in C and in its normalizer C+ is decided by conjugating back to
/// the standard form, never by enumeration.
class CartanSubgroup {
public:
    using u64 = std::uint64_t;

    CartanSubgroup(Level level, CartanKind kind, ModMatrix conjugator, u64 epsilon)
        : level_(level), kind_(kind), conj_(conjugator), conj_inv_(conjugator.inverse()), eps_(epsilon) {
        if (conjugator.modulus() != level.modulus())
            fail(Errc::LevelMismatch, "conjugator modulus differs from the level");
        if (kind == CartanKind::Nonsplit) {
            if (arith::legendre(epsilon % level.ell(), level.ell()) != -1)
                fail(Errc::BadEpsilon, std::to_string(epsilon) + " is not a non-square unit mod " +
                                           std::to_string(level.ell()));
            eps_ = epsilon % level.modulus();
        } else {
            eps_ = 0;
        }
    }

    const Level& level() const { return level_; }
    CartanKind kind() const { return kind_; }
    const ModMatrix& conjugator() const { return conj_; }
    u64 epsilon() const { return eps_; }
    u64 modulus() const { return level_.modulus(); }

    /// (ell-1)^2 ell^{2(n-1)} or (ell^2-1) ell^{2(n-1)}
    u64 order() const {
        u64 l = level_.ell();
        u64 tail = arith::ipow(l, 2 * (level_.n() - 1));
        return (kind_ == CartanKind::Split ? (l - 1) * (l - 1) : l * l - 1) * tail;
    }

    u64 normalizer_order() const { return 2 * order(); }

    /// The same Cartan conjugated by h: h C h^{-1}.
    CartanSubgroup conjugated(const ModMatrix& h) const { return CartanSubgroup(level_, kind_, h * conj_, eps_); }

    /// Image at level ell^k, k <= n.
    CartanSubgroup reduced(unsigned k) const {
        Level lv = level_.with_exponent(k);
        return CartanSubgroup(lv, kind_, conj_.reduced(lv.modulus()), eps_ % lv.modulus());
    }

    CartanPosition position(const ModMatrix& x) const {
        if (x.modulus() != modulus()) fail(Errc::LevelMismatch, "matrix modulus differs from the Cartan level");
        if (!x.is_invertible()) return CartanPosition::Outside;
        ModMatrix s = conj_inv_ * x * conj_;
        u64 m = modulus();
        if (kind_ == CartanKind::Split) {
            if (s.b() == 0 && s.c() == 0) return CartanPosition::InCartan;
            if (s.a() == 0 && s.d() == 0) return CartanPosition::InNormalizerOnly;
            return CartanPosition::Outside;
        }
        u64 eps_c = arith::mulmod(eps_, s.c(), m);
        if (s.d() == s.a() && s.b() == eps_c) return CartanPosition::InCartan;
        if (s.d() == arith::submod(0, s.a(), m) && s.b() == arith::submod(0, eps_c, m))
            return CartanPosition::InNormalizerOnly;
        return CartanPosition::Outside;
    }

    bool contains(const ModMatrix& x) const { return position(x) == CartanPosition::InCartan; }
    bool normalizer_contains(const ModMatrix& x) const { return position(x) != CartanPosition::Outside; }

    /// Element of the standard form with parameters (a, b), conjugated into place.
    /// Split: diag(a, b). Nonsplit: (a, eps b; b, a).
    ModMatrix element(u64 a, u64 b) const {
        u64 m = modulus();
        ModMatrix s = kind_ == CartanKind::Split ? ModMatrix(m, a, 0, 0, b)
                                                 : ModMatrix(m, a, arith::mulmod(eps_, b % m, m), b, a);
        return conj_ * s * conj_inv_;
    }

    /// Representative of the non-identity coset of C+ / C: the conjugated
    /// antidiagonal involution (split) or diag(1, -1) (nonsplit).
    ModMatrix normalizer_representative() const {
        u64 m = modulus();
        ModMatrix s = kind_ == CartanKind::Split ? ModMatrix(m, 0, 1, 1, 0) : ModMatrix(m, 1, 0, 0, m - 1);
        return conj_ * s * conj_inv_;
    }

    /// Trace-zero generator of the algebra R/ell^n R.
    ModMatrix traceless_generator() const {
        u64 m = modulus();
        ModMatrix s = kind_ == CartanKind::Split ? ModMatrix(m, 1, 0, 0, m - 1) : ModMatrix(m, 0, eps_, 1, 0);
        return conj_ * s * conj_inv_;
    }

    /// Canonical identifier of the subgroup (independent of conjugator and eps):
    /// the traceless generator scaled so its first unit entry is 1.
    std::array<u64, 3> algebra_key() const {
        ModMatrix t = traceless_generator();
        u64 m = modulus();
        u64 pivot = level_.is_unit(t.a()) ? t.a() : level_.is_unit(t.b()) ? t.b() : t.c();
        u64 inv = *arith::invmod(pivot, m);
        return {arith::mulmod(t.a(), inv, m), arith::mulmod(t.b(), inv, m), arith::mulmod(t.c(), inv, m)};
    }

    bool same_subgroup(const CartanSubgroup& o) const {
        return level_ == o.level_ && kind_ == o.kind_ && algebra_key() == o.algebra_key();
    }

    /// A generating set of C.
    std::vector<ModMatrix> generators() const {
        u64 l = level_.ell();
        std::vector<ModMatrix> out;
        if (kind_ == CartanKind::Split) {
            u64 r = arith::primitive_root_prime_power(l, level_.n());
            out.push_back(element(r, 1));
            out.push_back(element(1, r));
            return out;
        }
        // zeta reduces to a generator of F_{ell^2}^x; 1+ell and 1+ell*j generate
        // the pro-ell part 1 + ell R.
        auto [za, zb] = nonsplit_generator_params();
        out.push_back(element(za, zb));
        if (level_.n() >= 2) {
            out.push_back(element(1 + l, 0));
            out.push_back(element(1, l));
        }
        return out;
    }

    std::vector<ModMatrix> normalizer_generators() const {
        auto out = generators();
        out.push_back(normalizer_representative());
        return out;
    }

    /// All elements of C by direct parameter enumeration.
    std::vector<ModMatrix> elements() const {
        u64 m = modulus();
        u64 l = level_.ell();
        std::vector<ModMatrix> out;
        out.reserve(order());
        for (u64 a = 0; a < m; ++a) {
            for (u64 b = 0; b < m; ++b) {
                bool unit = kind_ == CartanKind::Split ? (a % l != 0 && b % l != 0) : (a % l != 0 || b % l != 0);
                if (unit) out.push_back(element(a, b));
            }
        }
        return out;
    }

    std::vector<ModMatrix> normalizer_elements() const {
        auto out = elements();
        ModMatrix w = normalizer_representative();
        std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * w);
        return out;
    }

    std::string describe() const {
        std::string s = std::string(to_string(kind_)) + " Cartan at " + level_.to_string();
        if (kind_ == CartanKind::Nonsplit) s += " eps=" + std::to_string(eps_);
        s += " conjugator=" + conj_.to_string();
        return s;
    }

private:
    std::pair<u64, u64> nonsplit_generator_params() const {
        u64 l = level_.ell();
        u64 group = l * l - 1;
        auto qs = arith::distinct_prime_factors_small(group);
        u64 e = eps_ % l;
        for (u64 a = 0; a < l; ++a) {
            for (u64 b = 1; b < l; ++b) {
                ModMatrix z(l, a, arith::mulmod(e, b, l), b, a);
                bool gen = true;
                for (u64 q : qs) {
                    if (z.pow(group / q).is_identity()) {
                        gen = false;
                        break;
                    }
                }
                if (gen) return {a, b};
            }
        }
        fail(Errc::InvalidArgument, "no generator of F_{ell^2}^x found");
    }

    Level level_;
    CartanKind kind_;
    ModMatrix conj_;
    ModMatrix conj_inv_;
    u64 eps_;
};

/// Standard split (diagonal) or nonsplit ({(a, eps b; b, a)}) Cartan with conjugator I.
inline CartanSubgroup cartan_standard(const Level& level, CartanKind kind,
                                      std::optional<std::uint64_t> epsilon = std::nullopt) {
    std::uint64_t eps = 0;
    if (kind == CartanKind::Nonsplit) eps = epsilon ? *epsilon : arith::smallest_nonresidue(level.ell());
    return CartanSubgroup(level, kind, ModMatrix::identity(level.modulus()), eps);
}

/// The unique Cartan containing alpha, i.e. its centralizer (R/ell^n R)^x with
/// R generated by alpha. Requires tr^2 - 4 det to be a unit.
inline CartanSubgroup cartan_centralizer(const Level& level, const ModMatrix& alpha) {
    using namespace arith;
    const u64 m = level.modulus();
    const u64 l = level.ell();
    if (alpha.modulus() != m) fail(Errc::LevelMismatch, "alpha modulus differs from the level");
    const u64 disc = alpha.discriminant();
    if (disc % l == 0)
        fail(Errc::NotRegularSemisimple, "tr^2 - 4 det of " + alpha.to_string() + " is not a unit");
    const u64 inv2 = *invmod(2, m);
    const u64 t = alpha.trace();

    if (legendre(disc, l) == 1) {
        u64 s = *sqrt_mod_prime_power(disc, l, level.n());
        u64 lam1 = mulmod(addmod(t, s, m), inv2, m);
        u64 lam2 = mulmod(submod(t, s, m), inv2, m);
        // columns of (alpha - lam2) span the lam1-eigenline and vice versa
        auto eigen_column = [&](u64 lam) {
            ModMatrix n = alpha - ModMatrix::scalar(m, lam);
            if (n.a() % l != 0 || n.c() % l != 0) return std::pair{n.a(), n.c()};
            return std::pair{n.b(), n.d()};
        };
        auto [x1, y1] = eigen_column(lam2);
        auto [x2, y2] = eigen_column(lam1);
        ModMatrix g(m, x1, x2, y1, y2);
        return CartanSubgroup(level, CartanKind::Split, g, 0);
    }

    // beta = alpha - t/2 is traceless with beta^2 = (disc/4) I; in the basis
    // (e1, beta e1 / b) it becomes (0, eps b; b, 0) with eps b^2 = disc/4.
    const u64 eps = smallest_nonresidue(l);
    ModMatrix beta = alpha - ModMatrix::scalar(m, mulmod(t, inv2, m));
    u64 delta = mulmod(disc, mulmod(inv2, inv2, m), m);
    u64 ratio = mulmod(delta, *invmod(eps, m), m);
    u64 b = *sqrt_mod_prime_power(ratio, l, level.n());
    u64 binv = *invmod(b, m);
    ModMatrix g(m, 1, mulmod(beta.a(), binv, m), 0, mulmod(beta.c(), binv, m));
    return CartanSubgroup(level, CartanKind::Nonsplit, g, eps);
}

}  // namespace oit
