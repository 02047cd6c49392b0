#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oit/arith.hpp"
#include "oit/error.hpp"
#include "oit/matgroup/lie.hpp"
#include "oit/matgroup/mat_group.hpp"

namespace oit {

/// g[i-1] and s[i-1] are the images in gl_2(F_ell) of {A in G : A = I mod ell^i}
/// and of the same set intersected with SL_2, for 1 <= i <= n-1.
struct FiltrationTable {
    Level level;
    std::vector<LieSubspace> g;
    std::vector<LieSubspace> s;

    const LieSubspace& g_at(unsigned i) const { return g.at(i - 1); }
    const LieSubspace& s_at(unsigned i) const { return s.at(i - 1); }
    unsigned top() const { return static_cast<unsigned>(g.size()); }
};

namespace detail {

/// Largest i <= cap with x = I mod ell^i (cap when x = I).
inline unsigned congruence_depth(const ModMatrix& x, std::uint64_t ell, unsigned cap) {
    std::uint64_t m = x.modulus();
    std::uint64_t a = arith::submod(x.a(), 1 % m, m), d = arith::submod(x.d(), 1 % m, m);
    unsigned i = 0;
    std::uint64_t pk = 1;
    while (i < cap) {
        pk *= ell;
        if (a % pk || x.b() % pk || x.c() % pk || d % pk) break;
        ++i;
    }
    return i;
}

/// (x - I) / ell^i reduced mod ell.
inline ModMatrix congruence_image(const ModMatrix& x, std::uint64_t ell, unsigned i) {
    std::uint64_t m = x.modulus();
    std::uint64_t pk = arith::ipow(ell, i);
    ModMatrix y = x - ModMatrix::identity(m);
    return ModMatrix(ell, (y.a() / pk) % ell, (y.b() / pk) % ell, (y.c() / pk) % ell, (y.d() / pk) % ell);
}

/// Filtration rows 1..top from a materialized group at level n. The det-1
/// condition is read at level n: such elements lift to det-1 elements of the
/// full preimage, so the rows describe that preimage.
inline void fill_from_materialized(const MatGroup& g, unsigned top, std::vector<LieSubspace>& gs,
                                   std::vector<LieSubspace>& ss) {
    const std::uint64_t l = g.level().ell();
    const std::uint64_t m = g.modulus();
    for (std::uint64_t key : g.keys()) {
        ModMatrix x = ModMatrix::from_key(m, key);
        unsigned depth = congruence_depth(x, l, top);
        if (depth == 0) continue;
        bool special = x.det() == 1 % m;
        for (unsigned i = 1; i <= depth; ++i) {
            ModMatrix b = congruence_image(x, l, i);
            if (gs[i - 1].dim() < 4) gs[i - 1].add(b);
            if (special && ss[i - 1].dim() < 3) ss[i - 1].add(b);
        }
    }
}

}  // namespace detail

inline FiltrationTable filtration(const MatGroup& g) {
    const Level& lv = g.level();
    const unsigned n = lv.n();
    if (n < 2) fail(Errc::LevelTooLow, "filtration needs level exponent n >= 2, got " + lv.to_string());
    const std::uint64_t l = lv.ell();
    FiltrationTable t{lv, std::vector<LieSubspace>(n - 1, LieSubspace(l)), std::vector<LieSubspace>(n - 1, LieSubspace(l))};

    if (g.is_cartan()) {
        // C and C+ meet I + ell^i M_2 in 1 + ell^i R; the det-1 part there is 1 + ell^i tr0(R)
        const auto& c = g.as_cartan().cartan.reduced(1);
        LieSubspace rr = LieSubspace::span(l, {ModMatrix::identity(l), c.traceless_generator()});
        LieSubspace r0 = LieSubspace::span(l, {c.traceless_generator()});
        for (unsigned i = 1; i < n; ++i) {
            t.g[i - 1] = rr;
            t.s[i - 1] = r0;
        }
        return t;
    }
    if (g.is_ball_preimage()) {
        const unsigned k = g.as_ball_preimage().base_level.n();
        if (k >= 2) detail::fill_from_materialized(g.ball_base(), k - 1, t.g, t.s);
        for (unsigned i = k; i < n; ++i) {
            t.g[i - 1] = LieSubspace::gl2(l);
            t.s[i - 1] = LieSubspace::sl2(l);
        }
        return t;
    }
    detail::fill_from_materialized(g, n - 1, t.g, t.s);
    return t;
}

/// Every matrix = I mod ell^k lies in G (level n, k < n).
inline bool contains_ball(const MatGroup& g, unsigned k) {
    const Level& lv = g.level();
    if (k >= lv.n()) fail(Errc::InvalidArgument, "contains_ball needs k < n");
    if (g.is_cartan()) return false;
    if (g.is_ball_preimage()) {
        unsigned base = g.as_ball_preimage().base_level.n();
        if (k >= base) return true;
        MatGroup b = g.ball_base();
        return contains_ball(b, k);
    }
    const std::uint64_t expected = arith::ipow(lv.ell(), 4 * (lv.n() - k));
    if (g.order() < expected) return false;
    std::uint64_t count = 0;
    for (std::uint64_t key : g.keys())
        if (detail::congruence_depth(ModMatrix::from_key(g.modulus(), key), lv.ell(), k) >= k) ++count;
    return count == expected;
}

/// Number of det-1 elements of a materialized G that are I mod ell^k.
inline std::uint64_t special_ball_count(const MatGroup& g, unsigned k) {
    std::uint64_t m = g.modulus(), count = 0;
    for (std::uint64_t key : g.keys()) {
        ModMatrix x = ModMatrix::from_key(m, key);
        if (x.det() == 1 % m && detail::congruence_depth(x, g.level().ell(), k) >= k) ++count;
    }
    return count;
}

/// [G, G] as the normal closure of the commutators of the generators.
inline MatGroup commutator_subgroup(const MatGroup& g, std::uint64_t cap = kDefaultClosureCap) {
    MatGroup full = g.materialize(cap);
    auto gens = full.generators();
    std::vector<ModMatrix> ngens;
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            ModMatrix c = group_commutator(gens[i], gens[j]);
            if (!c.is_identity()) ngens.push_back(c);
        }
    if (ngens.empty()) ngens.push_back(ModMatrix::identity(g.modulus()));
    for (;;) {
        MatGroup n = MatGroup::closure(g.level(), ngens, cap);
        std::vector<ModMatrix> extra;
        for (const auto& x : ngens)
            for (const auto& y : gens) {
                ModMatrix c = x.conjugated_by(y);
                if (!n.contains(c)) extra.push_back(c);
            }
        if (extra.empty()) return n;
        // one new conjugate per round keeps the generator list short
        ngens.push_back(extra.front());
    }
}

struct LemmaCheck {
    std::string name;
    bool passed;
    std::string detail;
};

struct FiltrationLemmaReport {
    std::vector<LemmaCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

namespace detail {

/// An element of G congruent to I + ell^i b mod ell^{i+1}, lifted to G's level.
inline std::optional<ModMatrix> element_near(const MatGroup& g, unsigned i, const ModMatrix& b) {
    const std::uint64_t l = g.level().ell();
    const std::uint64_t m = g.modulus();
    const std::uint64_t li = arith::ipow(l, i);
    ModMatrix target = ModMatrix::identity(m) + b.lifted(m).scaled(li);
    if (g.is_ball_preimage() && i >= g.as_ball_preimage().base_level.n()) return target;
    const MatGroup& src = g.is_ball_preimage() ? g.ball_base() : g;
    const std::uint64_t mod = arith::ipow(l, i + 1);
    ModMatrix want = target.reduced(mod);
    for (std::uint64_t key : src.keys()) {
        ModMatrix x = ModMatrix::from_key(src.modulus(), key);
        if (x.reduced(mod) == want) return x.lifted(m);
    }
    return std::nullopt;
}

/// Subgroup generated by commutators of elements of G that are I + ell^i B_j mod
/// ell^{i+1} for B in {E12, E21, diag(1,-1)}; it lies in [G, G] and, being made of
/// elements = I mod ell^{2i}, stays within the SL_2 ball at exponent 2i.
inline std::optional<MatGroup> commutator_certificate(const MatGroup& g, unsigned i, std::uint64_t cap) {
    const std::uint64_t l = g.level().ell();
    std::vector<ModMatrix> picks;
    for (const ModMatrix& b : {ModMatrix(l, 0, 1, 0, 0), ModMatrix(l, 0, 0, 1, 0), ModMatrix(l, 1, 0, 0, l - 1)}) {
        auto x = element_near(g, i, b);
        if (!x) return std::nullopt;
        picks.push_back(*x);
    }
    std::vector<ModMatrix> comms;
    for (std::size_t a = 0; a < picks.size(); ++a)
        for (std::size_t c = a + 1; c < picks.size(); ++c) comms.push_back(group_commutator(picks[a], picks[c]));
    return MatGroup::closure(g.level(), comms, cap);
}

}  // namespace detail

/// Finite-level forms of the filtration lemma for G at level (ell, m), m >= 3:
///  (i)   g_i in g_{i+1} for 1 <= i <= m-2;
///  (ii)  g_i = gl_2 forces |G(ell^j)| = |G(ell^i)| ell^{4(j-i)} for i <= j <= m;
///  (iv)  g_i = g_{2i} (2i <= m-1) forces g_i to be closed under the bracket;
///  (v)   G(ell^{i+1}) containing the det-1 matrices = I mod ell^i forces [G, G]
///        to contain the det-1 matrices = I mod ell^{2i} (2i < m).
/// Materialized groups use the full commutator subgroup for (v); ball
/// preimages, too large to enumerate, use the commutator certificate.
inline FiltrationLemmaReport verify_filtration_lemma(const MatGroup& g, std::uint64_t cap = kDefaultClosureCap) {
    const Level& lv = g.level();
    const unsigned m = lv.n();
    if (m < 3) fail(Errc::LevelTooLow, "verify_filtration_lemma needs m >= 3, got " + lv.to_string());
    const std::uint64_t l = lv.ell();
    const MatGroup G = g.is_ball_preimage() ? g : g.materialize(cap);
    FiltrationTable t = filtration(G);
    FiltrationLemmaReport rep;

    for (unsigned i = 1; i + 1 <= m - 1; ++i) {
        bool ok = t.g_at(i).is_subspace_of(t.g_at(i + 1));
        rep.checks.push_back({"(i) g_" + std::to_string(i) + " in g_" + std::to_string(i + 1), ok,
                              t.g_at(i).to_string() + " vs " + t.g_at(i + 1).to_string()});
    }

    std::vector<std::uint64_t> orders(m + 1, 1);
    for (unsigned j = 1; j <= m; ++j) orders[j] = G.reduce(j).order();
    for (unsigned i = 1; i <= m - 1; ++i) {
        if (t.g_at(i).dim() != 4) continue;
        bool ok = true;
        std::string detail;
        for (unsigned j = i; j <= m; ++j) {
            std::uint64_t want = orders[i] * arith::ipow(l, 4 * (j - i));
            if (orders[j] != want) {
                ok = false;
                detail = "|G(ell^" + std::to_string(j) + ")| = " + std::to_string(orders[j]) + ", expected " +
                         std::to_string(want);
            }
        }
        rep.checks.push_back({"(ii) g_" + std::to_string(i) + " = gl_2 gives full growth", ok, detail});
    }

    for (unsigned i = 1; 2 * i <= m - 1; ++i) {
        if (!(t.g_at(i) == t.g_at(2 * i))) continue;
        auto esc = t.g_at(i).bracket_escape();
        rep.checks.push_back({"(iv) g_" + std::to_string(i) + " = g_" + std::to_string(2 * i) + " is a Lie algebra",
                              esc.empty(), esc.empty() ? "" : "bracket leaves: " + esc[2].to_string()});
    }

    std::optional<MatGroup> comm;
    for (unsigned i = 1; 2 * i < m; ++i) {
        // det-1 matrices = I mod ell^i at level i+1 number ell^3
        bool hyp = G.is_ball_preimage() && i >= G.as_ball_preimage().base_level.n();
        if (!hyp) {
            MatGroup top = G.is_ball_preimage() ? G.ball_base().reduce(std::min(i + 1, G.as_ball_preimage().base_level.n()))
                                                : G.reduce(i + 1);
            hyp = top.level().n() == i + 1 && special_ball_count(top, i) == arith::ipow(l, 3);
        }
        if (!hyp) continue;
        std::uint64_t want = arith::ipow(l, 3 * (m - 2 * i));
        std::uint64_t got = 0;
        std::string how;
        if (G.is_materialized()) {
            if (!comm) comm = commutator_subgroup(G, cap);
            got = special_ball_count(*comm, 2 * i);
            how = "[G,G]";
        } else {
            auto k = detail::commutator_certificate(G, i, cap);
            if (k) got = special_ball_count(*k, 2 * i);
            how = "commutator certificate";
        }
        rep.checks.push_back({"(v) [G,G] contains the SL_2 ball at exponent " + std::to_string(2 * i), got == want,
                              how + ": " + std::to_string(got) + " of " + std::to_string(want) + " elements"});
    }
    return rep;
}

}  // namespace oit
