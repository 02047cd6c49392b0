#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "oit/arith.hpp"
#include "oit/error.hpp"
#include "oit/matgroup/cartan.hpp"
#include "oit/matgroup/closure.hpp"
#include "oit/matgroup/level.hpp"
#include "oit/matgroup/mod_matrix.hpp"

namespace oit {

/// A subgroup of GL_2(Z/ell^n) in one of three forms:
///  - Materialized: generators plus the full sorted key set;
///  - BallPreimage: the full preimage at level n of a materialized group at level k <= n;
///  - CartanSub: a Cartan C or its normalizer C+, kept algebraically.
class MatGroup {
public:
    using u64 = std::uint64_t;

    struct Materialized {
        std::vector<ModMatrix> generators;
        std::vector<u64> keys;  // sorted
    };
    struct BallPreimage {
        Level base_level;
        std::shared_ptr<const Materialized> base;
    };
    struct CartanSub {
        CartanSubgroup cartan;
        bool normalizer;
    };

    /// Smallest subgroup containing gens; CapExceeded past cap elements.
    static MatGroup closure(const Level& level, std::span<const ModMatrix> gens, u64 cap = kDefaultClosureCap) {
        auto keys = closure_keys(gens, level.modulus(), cap);
        std::sort(keys.begin(), keys.end());
        auto m = std::make_shared<Materialized>();
        m->generators.assign(gens.begin(), gens.end());
        m->keys = std::move(keys);
        return MatGroup(level, std::move(m));
    }

    /// The full preimage at level n of the materialized group base (level k <= n).
    static MatGroup ball_preimage(const MatGroup& base, unsigned n) {
        if (!base.is_materialized()) fail(Errc::InvalidArgument, "ball preimage base must be materialized");
        if (n < base.level().n()) fail(Errc::LevelMismatch, "preimage level is below the base level");
        if (n == base.level().n()) return base;
        return MatGroup(base.level().with_exponent(n), BallPreimage{base.level(), base.mat_});
    }

    static MatGroup cartan(const CartanSubgroup& c, bool normalizer = true) {
        return MatGroup(c.level(), CartanSub{c, normalizer});
    }

    static MatGroup full_gl2(const Level& level, u64 cap = kDefaultClosureCap) {
        auto gens = gl2_generators(level);
        return closure(level, gens, cap);
    }

    /// Generators of GL_2(Z/ell^n): the two elementary unipotents generate SL_2,
    /// and diag(r, 1) with r a primitive root covers the determinant.
    static std::vector<ModMatrix> gl2_generators(const Level& level) {
        u64 m = level.modulus();
        u64 r = arith::primitive_root_prime_power(level.ell(), level.n());
        return {ModMatrix(m, 1, 1, 0, 1), ModMatrix(m, 1, 0, 1, 1), ModMatrix(m, r, 0, 0, 1)};
    }

    const Level& level() const { return level_; }
    u64 modulus() const { return level_.modulus(); }

    bool is_materialized() const { return mat_ != nullptr && std::holds_alternative<Mat>(rep_); }
    bool is_ball_preimage() const { return std::holds_alternative<BallPreimage>(rep_); }
    bool is_cartan() const { return std::holds_alternative<CartanSub>(rep_); }

    const BallPreimage& as_ball_preimage() const { return std::get<BallPreimage>(rep_); }
    const CartanSub& as_cartan() const { return std::get<CartanSub>(rep_); }

    const char* representation_name() const {
        if (is_materialized()) return "materialized";
        if (is_ball_preimage()) return "ball-preimage";
        return "cartan";
    }

    /// The base group of a ball preimage as a MatGroup.
    MatGroup ball_base() const {
        const auto& bp = as_ball_preimage();
        return MatGroup(bp.base_level, bp.base);
    }

    u64 order() const {
        if (is_materialized()) return mat_->keys.size();
        if (is_ball_preimage()) {
            const auto& bp = as_ball_preimage();
            return bp.base->keys.size() * arith::ipow(level_.ell(), 4 * (level_.n() - bp.base_level.n()));
        }
        const auto& cs = as_cartan();
        return cs.normalizer ? cs.cartan.normalizer_order() : cs.cartan.order();
    }

    bool contains(const ModMatrix& x) const {
        if (x.modulus() != modulus()) fail(Errc::LevelMismatch, "matrix modulus differs from the group level");
        if (is_materialized()) return std::binary_search(mat_->keys.begin(), mat_->keys.end(), x.key());
        if (is_ball_preimage()) {
            const auto& bp = as_ball_preimage();
            u64 k = x.reduced(bp.base_level.modulus()).key();
            return std::binary_search(bp.base->keys.begin(), bp.base->keys.end(), k);
        }
        const auto& cs = as_cartan();
        return cs.normalizer ? cs.cartan.normalizer_contains(x) : cs.cartan.contains(x);
    }

    std::vector<ModMatrix> generators() const {
        if (is_materialized()) return mat_->generators;
        if (is_ball_preimage()) {
            const auto& bp = as_ball_preimage();
            std::vector<ModMatrix> out;
            for (const auto& g : bp.base->generators) out.push_back(g.lifted(modulus()));
            // I + ell^k E_ij generate the kernel of reduction to level k
            u64 lk = bp.base_level.modulus();
            u64 m = modulus();
            out.emplace_back(m, 1 + lk, 0, 0, 1);
            out.emplace_back(m, 1, lk, 0, 1);
            out.emplace_back(m, 1, 0, lk, 1);
            out.emplace_back(m, 1, 0, 0, 1 + lk);
            return out;
        }
        const auto& cs = as_cartan();
        return cs.normalizer ? cs.cartan.normalizer_generators() : cs.cartan.generators();
    }

    /// Sorted packed keys of a materialized group.
    const std::vector<u64>& keys() const {
        if (!is_materialized()) fail(Errc::InvalidArgument, "group is not materialized");
        return mat_->keys;
    }

    std::vector<ModMatrix> elements() const {
        const auto& ks = keys();
        std::vector<ModMatrix> out;
        out.reserve(ks.size());
        for (auto k : ks) out.push_back(ModMatrix::from_key(modulus(), k));
        return out;
    }

    /// Image under reduction to level ell^k.
    MatGroup reduce(unsigned k) const {
        if (k == 0 || k > level_.n()) fail(Errc::InvalidArgument, "reduction exponent out of range");
        if (k == level_.n()) return *this;
        Level lv = level_.with_exponent(k);
        u64 mk = lv.modulus();
        if (is_materialized()) {
            auto out = std::make_shared<Materialized>();
            for (const auto& g : mat_->generators) out->generators.push_back(g.reduced(mk));
            out->keys.reserve(mat_->keys.size());
            for (auto key : mat_->keys) out->keys.push_back(ModMatrix::from_key(modulus(), key).reduced(mk).key());
            std::sort(out->keys.begin(), out->keys.end());
            out->keys.erase(std::unique(out->keys.begin(), out->keys.end()), out->keys.end());
            return MatGroup(lv, std::move(out));
        }
        if (is_ball_preimage()) {
            const auto& bp = as_ball_preimage();
            MatGroup base = ball_base();
            if (k <= bp.base_level.n()) return base.reduce(k);
            return ball_preimage(base, k);
        }
        const auto& cs = as_cartan();
        return cartan(cs.cartan.reduced(k), cs.normalizer);
    }

    /// Explicit element set; CapExceeded if the group has more than cap elements.
    MatGroup materialize(u64 cap = kDefaultClosureCap) const {
        if (is_materialized()) return *this;
        if (order() > cap)
            fail(Errc::CapExceeded, "group of order " + std::to_string(order()) + " exceeds cap " + std::to_string(cap));
        auto gens = generators();
        return closure(level_, gens, cap);
    }

    /// The determinant image is all of (Z/ell^n)^x. The unit group is cyclic,
    /// so it suffices that the generator determinants have orders with lcm phi(ell^n).
    bool det_surjective() const {
        u64 m = modulus();
        u64 phi = level_.unit_count();
        auto qs = arith::distinct_prime_factors_small(phi);
        u64 l = 1;
        for (const auto& g : generators()) {
            u64 o = arith::unit_order(g.det(), m, phi, qs);
            l = std::lcm(l, o);
        }
        return l == phi;
    }

    std::string describe() const {
        std::string s = std::string(representation_name()) + " group at " + level_.to_string() +
                        " of order " + std::to_string(order());
        if (is_ball_preimage()) s += " (preimage of level " + as_ball_preimage().base_level.to_string() + ")";
        if (is_cartan()) s += as_cartan().normalizer ? " (normalizer of " : " (";
        if (is_cartan()) s += as_cartan().cartan.describe() + ")";
        return s;
    }

private:
    struct Mat {};
    using Rep = std::variant<Mat, BallPreimage, CartanSub>;

    MatGroup(Level level, std::shared_ptr<const Materialized> m) : level_(level), rep_(Mat{}), mat_(std::move(m)) {}
    MatGroup(Level level, Rep rep) : level_(level), rep_(std::move(rep)) {}

    Level level_;
    Rep rep_;
    std::shared_ptr<const Materialized> mat_;
};

/// Smallest subgroup containing gens. The level is read off the generators' modulus.
inline MatGroup group_closure(std::span<const ModMatrix> gens, std::uint64_t cap = kDefaultClosureCap) {
    if (gens.empty()) fail(Errc::InvalidArgument, "group_closure needs at least one generator to fix the level");
    return MatGroup::closure(Level::from_modulus(gens.front().modulus()), gens, cap);
}

inline MatGroup group_closure(const Level& level, std::span<const ModMatrix> gens,
                              std::uint64_t cap = kDefaultClosureCap) {
    return MatGroup::closure(level, gens, cap);
}

}  // namespace oit
