#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oit/arith.hpp"
#include "oit/error.hpp"
#include "oit/matgroup/cartan.hpp"
#include "oit/matgroup/lie.hpp"
#include "oit/matgroup/mat_group.hpp"

namespace oit {

/// Upper bound on the number of Cartans tried by the exhaustive fallback.
inline constexpr std::uint64_t kCartanEnumerationCap = std::uint64_t{1} << 21;

/// Result of a Cartan-normalizer search with the evidence that produced it.
struct NormalizerSearch {
    std::optional<CartanSubgroup> cartan;
    std::optional<ModMatrix> witness;  // regular semisimple element used, if any
    std::string method;
};

/// Order of the image of g in PGL_2: least k >= 1 with g^k scalar.
inline std::uint64_t pgl2_order(const ModMatrix& g) {
    ModMatrix x = g;
    for (std::uint64_t k = 1;; ++k) {
        if (x.is_scalar()) return k;
        x *= g;
    }
}

inline bool all_in_normalizer(const CartanSubgroup& c, const std::vector<ModMatrix>& gens) {
    for (const auto& g : gens)
        if (!c.normalizer_contains(g)) return false;
    return true;
}

namespace detail {

/// Every Cartan at the level, one per subgroup: C is the unit group of
/// Z/ell^n[beta] for a traceless beta of unit determinant, taken up to unit scaling.
inline std::vector<CartanSubgroup> all_cartans(const Level& level) {
    using arith::u64;
    const u64 m = level.modulus();
    std::vector<CartanSubgroup> out;
    // normalize the first unit coordinate of (x, y, z) to 1
    for (int lead = 0; lead < 3; ++lead) {
        for (u64 p = 0; p < m; ++p) {
            for (u64 q = 0; q < m; ++q) {
                std::array<u64, 3> v{};
                v[lead] = 1;
                // coordinates before the lead are non-units
                std::array<u64, 2> rest{p, q};
                int r = 0;
                bool ok = true;
                for (int i = 0; i < 3; ++i) {
                    if (i == lead) continue;
                    v[i] = rest[r++];
                    if (i < lead && level.is_unit(v[i])) ok = false;
                }
                if (!ok) continue;
                ModMatrix beta(m, v[0], v[1], v[2], arith::submod(0, v[0], m));
                if (!level.is_unit(beta.det())) continue;
                out.push_back(cartan_centralizer(level, beta));
            }
        }
    }
    return out;
}

}  // namespace detail

/// Search for a Cartan C at G's level with G contained in C+.
///
/// If G has an element alpha of unit discriminant and nonzero trace, alpha
/// cannot lie in C+ - C (those elements are traceless), so the only candidate
/// is the centralizer of alpha. Otherwise each regular semisimple element's
/// centralizer is tried, then every Cartan when the level is small enough.
inline NormalizerSearch find_cartan_normalizer_detail(const MatGroup& g,
                                                      std::uint64_t enumeration_cap = kCartanEnumerationCap) {
    NormalizerSearch res;
    const Level& level = g.level();
    if (g.is_cartan()) {
        res.cartan = g.as_cartan().cartan;
        res.method = "group is given as a Cartan (normalizer)";
        return res;
    }
    if (g.is_ball_preimage()) {
        if (g.as_ball_preimage().base_level.n() < level.n()) {
            // the preimage contains ell^4 elements that are I mod ell^{n-1}; C+ has only ell^2
            res.method = "ball preimage contains a congruence ball, too large for any C+";
            return res;
        }
        return find_cartan_normalizer_detail(g.ball_base(), enumeration_cap);
    }

    const auto gens = g.generators();
    const std::uint64_t l = level.ell();
    // C+ has order dividing 2|C|; anything larger or not dividing is excluded
    const std::uint64_t max_order = 2 * (l * l - 1) * arith::ipow(l, 2 * (level.n() - 1));
    if (g.order() > max_order) {
        res.method = "order " + std::to_string(g.order()) + " exceeds every |C+|";
        return res;
    }

    std::set<std::array<std::uint64_t, 3>> tried;
    std::vector<ModMatrix> traceless_candidates;
    for (std::uint64_t key : g.keys()) {
        ModMatrix a = ModMatrix::from_key(g.modulus(), key);
        if (!level.is_unit(a.discriminant())) continue;
        if (a.trace() != 0) {
            CartanSubgroup c = cartan_centralizer(level, a);
            res.witness = a;
            if (all_in_normalizer(c, gens)) {
                res.cartan = c;
                res.method = "centralizer of a regular semisimple element with nonzero trace";
            } else {
                res.method = "the only candidate, the centralizer of " + a.to_string() + ", fails";
            }
            return res;
        }
        traceless_candidates.push_back(a);
    }
    for (const auto& a : traceless_candidates) {
        CartanSubgroup c = cartan_centralizer(level, a);
        if (!tried.insert(c.algebra_key()).second) continue;
        if (all_in_normalizer(c, gens)) {
            res.cartan = c;
            res.witness = a;
            res.method = "centralizer of a regular semisimple element";
            return res;
        }
    }
    // count of traceless beta up to scaling is about ell^{2n}
    std::uint64_t candidates = 3 * level.modulus() * level.modulus();
    if (candidates > enumeration_cap)
        fail(Errc::Inconclusive, "no regular semisimple witness settles " + g.describe() +
                                     " and exhaustive Cartan enumeration exceeds its cap");
    for (const auto& c : detail::all_cartans(level)) {
        if (tried.count(c.algebra_key())) continue;
        if (all_in_normalizer(c, gens)) {
            res.cartan = c;
            res.method = "exhaustive enumeration of Cartans";
            return res;
        }
    }
    res.method = "exhaustive enumeration of Cartans found none";
    return res;
}

inline std::optional<CartanSubgroup> find_cartan_normalizer(const MatGroup& g,
                                                            std::uint64_t enumeration_cap = kCartanEnumerationCap) {
    return find_cartan_normalizer_detail(g, enumeration_cap).cartan;
}

/// G (at level ell) lies in some Cartan C(ell). A non-scalar element of a
/// Cartan mod ell is regular semisimple, so it pins C down as its centralizer.
inline bool contained_in_some_cartan(const MatGroup& g) {
    if (g.level().n() != 1) fail(Errc::InvalidArgument, "contained_in_some_cartan expects level (ell, 1)");
    auto gens = g.generators();
    const ModMatrix* pivot = nullptr;
    for (const auto& x : gens) {
        if (!x.is_scalar()) {
            pivot = &x;
            break;
        }
    }
    if (!pivot) return true;
    if (!g.level().is_unit(pivot->discriminant())) return false;
    CartanSubgroup c = cartan_centralizer(g.level(), *pivot);
    for (const auto& x : gens)
        if (!c.contains(x)) return false;
    return true;
}

/// Largest PGL_2-order among the elements of a materialized group.
inline std::uint64_t max_pgl2_order(const MatGroup& g) {
    std::uint64_t best = 1;
    for (std::uint64_t key : g.keys()) best = std::max(best, pgl2_order(ModMatrix::from_key(g.modulus(), key)));
    return best;
}

/// The decomposition gl_2(F_ell) = V1 + V2 + V3 under conjugation by C+(ell):
/// scalars, the traceless part of R, and its complement in sl_2.
struct RepDecomposition {
    LieSubspace v1, v2, v3;
};

inline RepDecomposition rep_decomposition(const CartanSubgroup& c) {
    const Level& lv = c.level();
    if (lv.n() != 1) fail(Errc::InvalidArgument, "rep_decomposition expects a Cartan at level (ell, 1)");
    if (lv.ell() < 5) fail(Errc::InvalidArgument, "rep_decomposition requires ell >= 5");
    const std::uint64_t l = lv.ell();
    const ModMatrix& g = c.conjugator();
    std::vector<ModMatrix> v2, v3;
    if (c.kind() == CartanKind::Split) {
        v2 = {ModMatrix(l, 1, 0, 0, l - 1)};
        v3 = {ModMatrix(l, 0, 1, 0, 0), ModMatrix(l, 0, 0, 1, 0)};
    } else {
        std::uint64_t e = c.epsilon() % l;
        v2 = {ModMatrix(l, 0, e, 1, 0)};
        v3 = {ModMatrix(l, 1, 0, 0, l - 1), ModMatrix(l, 0, e, l - 1, 0)};
    }
    for (auto& x : v2) x = x.conjugated_by(g);
    for (auto& x : v3) x = x.conjugated_by(g);
    return {LieSubspace::scalars(l), LieSubspace::span(l, v2), LieSubspace::span(l, v3)};
}

/// span{ g B g^{-1} - B : g in G, B in gl_2(F_ell) }.
inline LieSubspace twisted_commutator_span(const MatGroup& g) {
    if (g.level().n() != 1) fail(Errc::InvalidArgument, "twisted_commutator_span expects level (ell, 1)");
    const std::uint64_t l = g.level().ell();
    auto gens = g.is_materialized() ? g.elements() : g.materialize().elements();
    const std::vector<ModMatrix> basis = LieSubspace::gl2(l).basis_matrices();
    LieSubspace out(l);
    for (const auto& x : gens) {
        ModMatrix xi = x.inverse();
        for (const auto& b : basis) {
            out.add(x * b * xi - b);
            if (out.dim() == 3) return out;  // always inside sl_2
        }
    }
    return out;
}

}  // namespace oit
