#pragma once

// Finite verification suites for the group-theoretic lemmas and the
// Lang-Trotter census. Each check reports how many cases it covered and, on
// failure, the first counterexample found.

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/lexical_cast.hpp>

#include "oit/arith.hpp"
#include "oit/error.hpp"
#include "oit/langtrotter.hpp"
#include "oit/matgroup.hpp"

namespace oit::verify {

using u64 = std::uint64_t;

struct CheckResult {
    std::string name;
    bool passed = true;
    u64 cases = 0;
    std::string detail;  // counterexample payload on failure
    double seconds = 0;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;
    double seconds = 0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    u64 cases() const {
        u64 n = 0;
        for (const auto& c : checks) n += c.cases;
        return n;
    }
    const CheckResult* first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
};

/// Run body(check), timing it; a library error inside the body fails the check.
inline CheckResult run_check(const std::string& name, const std::function<void(CheckResult&)>& body) {
    CheckResult c;
    c.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const Error& e) {
        c.passed = false;
        c.detail = e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

namespace detail {

inline void refute(CheckResult& c, const std::string& why) {
    if (c.passed) c.detail = why;
    c.passed = false;
}

inline std::string level_name(u64 l, unsigned n) { return std::to_string(l) + "^" + std::to_string(n); }

inline ModMatrix random_matrix(std::mt19937_64& rng, u64 m) {
    auto e = [&] { return static_cast<u64>(uniform_int(rng, 0, static_cast<std::int64_t>(m) - 1)); };
    for (;;) {
        ModMatrix x(m, e(), e(), e(), e());
        if (x.is_invertible()) return x;
    }
}

inline ModMatrix random_regular(std::mt19937_64& rng, const Level& lv) {
    for (;;) {
        ModMatrix x = random_matrix(rng, lv.modulus());
        if (lv.is_unit(x.discriminant())) return x;
    }
}

/// Every matrix of GL_2(Z/m).
inline std::vector<ModMatrix> gl2_elements(u64 m) {
    std::vector<ModMatrix> out;
    for (u64 a = 0; a < m; ++a)
        for (u64 b = 0; b < m; ++b)
            for (u64 c = 0; c < m; ++c)
                for (u64 d = 0; d < m; ++d) {
                    ModMatrix x(m, a, b, c, d);
                    if (x.is_invertible()) out.push_back(x);
                }
    return out;
}

/// #{X in GL_2(Z/ell^n) : X alpha = alpha X}, counted from the linear
/// equations qc = rb, q(a-d) = b(p-s), r(a-d) = c(p-s) for alpha = (p, q; r, s).
/// The determinant condition only sees a mod ell.
inline u64 centralizer_size(const ModMatrix& alpha, u64 ell) {
    using namespace arith;
    const u64 m = alpha.modulus();
    const u64 p = alpha.a(), q = alpha.b(), r = alpha.c(), s = alpha.d();
    const u64 ps = submod(p, s, m);
    u64 total = 0;
    for (u64 b = 0; b < m; ++b)
        for (u64 c = 0; c < m; ++c) {
            if (mulmod(q, c, m) != mulmod(r, b, m)) continue;
            for (u64 e = 0; e < m; ++e) {
                if (mulmod(q, e, m) != mulmod(b, ps, m) || mulmod(r, e, m) != mulmod(c, ps, m)) continue;
                u64 units = 0;
                const u64 bc = mulmod(b % ell, c % ell, ell), e1 = e % ell;
                for (u64 a = 0; a < ell; ++a)
                    if (submod(mulmod(a, submod(a, e1, ell), ell), bc, ell) != 0) ++units;
                total += units * (m / ell);
            }
        }
    return total;
}

inline u64 cartan_formula(u64 l, unsigned n, CartanKind kind) {
    return (kind == CartanKind::Split ? (l - 1) * (l - 1) : l * l - 1) * arith::ipow(l, 2 * (n - 1));
}

inline CartanKind kind_of(const ModMatrix& alpha, u64 l) {
    return arith::legendre(alpha.discriminant() % l, l) == 1 ? CartanKind::Split : CartanKind::Nonsplit;
}

/// Centralizer check for one alpha: brute count, the formula, and C inside the centralizer.
inline void check_centralizer(CheckResult& c, const Level& lv, const ModMatrix& alpha) {
    const CartanSubgroup cs = cartan_centralizer(lv, alpha);
    const u64 brute = centralizer_size(alpha, lv.ell());
    const u64 want = cartan_formula(lv.ell(), lv.n(), kind_of(alpha, lv.ell()));
    ++c.cases;
    if (brute != want || cs.order() != want || cs.kind() != kind_of(alpha, lv.ell()))
        refute(c, "alpha = " + alpha.to_string() + ": centralizer has " + std::to_string(brute) +
                      " elements, Cartan order " + std::to_string(cs.order()) + ", formula " + std::to_string(want));
    if (!cs.contains(alpha)) refute(c, "alpha = " + alpha.to_string() + " is not in its Cartan");
    for (const auto& x : cs.elements())
        if (!(x * alpha == alpha * x)) {
            refute(c, x.to_string() + " in C does not commute with " + alpha.to_string());
            break;
        }
}

/// g alpha g^{-1} in C(alpha) exactly when g normalizes C.
inline void check_conjugation(CheckResult& c, const CartanSubgroup& cs, const ModMatrix& alpha, const ModMatrix& g) {
    const bool into = cs.contains(alpha.conjugated_by(g));
    const bool normal = cs.position(g) != CartanPosition::Outside;
    ++c.cases;
    if (into && !normal)
        refute(c, "g = " + g.to_string() + " conjugates alpha = " + alpha.to_string() + " into C but lies outside C+");
    if (normal && !into)
        refute(c, "g = " + g.to_string() + " lies in C+ but g alpha g^-1 is outside C for alpha = " + alpha.to_string());
}

/// Cyclic H = <I + ell^i A> with A mod ell a nonzero element of R/ell R, checked
/// for stability under alpha and containment in C.
inline void check_cyclic(CheckResult& c, const CartanSubgroup& cs, const ModMatrix& alpha, unsigned i, const ModMatrix& A) {
    const Level& lv = cs.level();
    const u64 m = lv.modulus(), l = lv.ell();
    const ModMatrix h = ModMatrix::identity(m) + A.scaled(lv.power(i));
    std::vector<ModMatrix> hs{ModMatrix::identity(m)};
    for (ModMatrix x = h; !x.is_identity(); x = x * h) hs.push_back(x);
    const ModMatrix conj = h.conjugated_by(alpha);
    bool stable = false;
    for (const auto& x : hs) stable = stable || x == conj;
    if (!stable) return;  // hypothesis fails; nothing to check
    ++c.cases;
    for (const auto& x : hs)
        if (!cs.contains(x)) {
            refute(c, "H = <" + h.to_string() + "> is alpha-stable but " + x.to_string() + " is outside C, alpha = " +
                          alpha.to_string() + ", ell = " + std::to_string(l));
            return;
        }
}

/// Nonzero elements of R/ell R = span{I, alpha} mod ell.
inline std::vector<ModMatrix> algebra_mod_ell(const ModMatrix& alpha, u64 l) {
    std::vector<ModMatrix> out;
    const ModMatrix a1 = alpha.reduced(l);
    for (u64 x = 0; x < l; ++x)
        for (u64 y = 0; y < l; ++y) {
            if (x == 0 && y == 0) continue;
            out.push_back(ModMatrix::scalar(l, x) + a1.scaled(y));
        }
    return out;
}

}  // namespace detail

/// |C| and |C+| by closure of generators against the closed formulas.
inline CheckResult cartan_orders(const std::vector<u64>& ells, unsigned max_n) {
    return run_check("Cartan orders by enumeration", [&](CheckResult& c) {
        for (u64 l : ells)
            for (unsigned n = 1; n <= max_n; ++n) {
                Level lv(l, n);
                for (auto kind : {CartanKind::Split, CartanKind::Nonsplit}) {
                    const auto cs = cartan_standard(lv, kind);
                    const u64 want = detail::cartan_formula(l, n, kind);
                    const u64 got = closure_keys(cs.generators(), lv.modulus()).size();
                    const u64 gotp = closure_keys(cs.normalizer_generators(), lv.modulus()).size();
                    c.cases += 2;
                    if (got != want || gotp != 2 * want)
                        detail::refute(c, std::string(to_string(kind)) + " Cartan at " + detail::level_name(l, n) +
                                              ": |C| = " + std::to_string(got) + ", |C+| = " + std::to_string(gotp) +
                                              ", expected " + std::to_string(want) + " and " + std::to_string(2 * want));
                }
            }
    });
}

struct CentralizerOptions {
    bool exhaustive = true;
    u64 samples = 1000;
    u64 seed = 1;
};

/// Centralizer lemma parts (ii)-(iv) at one level, exhaustively or on sampled cases.
inline std::vector<CheckResult> centralizer_lemma(const Level& lv, const CentralizerOptions& opt = {}) {
    const u64 l = lv.ell(), m = lv.modulus();
    const unsigned n = lv.n();
    const std::string at = " at " + detail::level_name(l, n) + (opt.exhaustive ? " (exhaustive)" : " (sampled)");
    std::vector<ModMatrix> all;
    if (opt.exhaustive) all = detail::gl2_elements(m);
    std::vector<ModMatrix> alphas;
    std::mt19937_64 rng(opt.seed ^ (l << 8) ^ n);
    if (opt.exhaustive) {
        for (const auto& x : all)
            if (lv.is_unit(x.discriminant())) alphas.push_back(x);
    } else {
        for (u64 k = 0; k < opt.samples; ++k) alphas.push_back(detail::random_regular(rng, lv));
    }

    std::vector<CheckResult> out;
    out.push_back(run_check("(ii) centralizer is the Cartan" + at, [&](CheckResult& c) {
        for (const auto& a : alphas) detail::check_centralizer(c, lv, a);
    }));

    out.push_back(run_check("(iii) conjugating alpha into C forces C+" + at, [&](CheckResult& c) {
        for (const auto& a : alphas) {
            const auto cs = cartan_centralizer(lv, a);
            if (opt.exhaustive) {
                for (const auto& g : all) detail::check_conjugation(c, cs, a, g);
                continue;
            }
            // half the cases from C+ itself, half uniform
            for (int t = 0; t < 2; ++t) {
                ModMatrix g = detail::random_matrix(rng, m);
                if (t == 0) {
                    ModMatrix x;
                    do x = cs.element(rng() % m, rng() % m);
                    while (!x.is_invertible());
                    g = rng() % 2 ? x * cs.normalizer_representative() : x;
                }
                detail::check_conjugation(c, cs, a, g);
            }
        }
    }));

    out.push_back(run_check("(iv) alpha-stable cyclic congruence subgroups lie in C" + at, [&](CheckResult& c) {
        if (n < 2) return;
        for (const auto& a : alphas) {
            const auto cs = cartan_centralizer(lv, a);
            const auto ras = detail::algebra_mod_ell(a, l);
            for (unsigned i = 1; i < n; ++i) {
                const u64 top = arith::ipow(l, n - i);  // A only matters mod ell^{n-i}
                if (opt.exhaustive) {
                    for (const auto& r : ras)
                        for (u64 k = 0; k < arith::ipow(top / l, 4); ++k) {
                            // A = r + ell Y, Y running over matrices mod ell^{n-i-1}
                            const u64 t = top / l;
                            ModMatrix y(m, k % t, k / t % t, k / t / t % t, k / t / t / t % t);
                            detail::check_cyclic(c, cs, a, i, r.lifted(m) + y.scaled(l));
                        }
                } else {
                    const auto& r = ras[rng() % ras.size()];
                    ModMatrix y(m, rng() % top, rng() % top, rng() % top, rng() % top);
                    detail::check_cyclic(c, cs, a, i, r.lifted(m) + y.scaled(l));
                }
            }
        }
    }));
    return out;
}

/// Centralizer lemma (v): in every Cartan mod ell, elements of PGL_2 order > 2
/// are regular semisimple with nonzero trace, and conversely.
inline CheckResult pgl2_order_lemma(const std::vector<u64>& ells) {
    return run_check("(v) PGL_2 order > 2 forces regular with nonzero trace", [&](CheckResult& c) {
        for (u64 l : ells)
            for (const auto& cs : oit::detail::all_cartans(Level(l, 1)))
                for (const auto& b : cs.elements()) {
                    ++c.cases;
                    const bool big = pgl2_order(b) > 2;
                    const bool regular = b.discriminant() != 0 && b.trace() != 0;
                    if (big != regular)
                        detail::refute(c, b.to_string() + " in " + cs.describe() + ": PGL_2 order " +
                                              std::to_string(pgl2_order(b)) + ", disc " +
                                              std::to_string(b.discriminant()) + ", trace " + std::to_string(b.trace()));
                }
    });
}

/// Representation of C+(ell) on gl_2: dims (1, 1, 2), stability, irreducibility
/// of V3, V3 not a Lie algebra, twisted commutators span sl_2.
inline std::vector<CheckResult> representation(const std::vector<u64>& ells, u64 seed = 1) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(seed);
    struct Case {
        CartanSubgroup c;
        RepDecomposition d;
    };
    std::vector<Case> cases;
    for (u64 l : ells)
        for (auto kind : {CartanKind::Split, CartanKind::Nonsplit}) {
            auto cs = cartan_standard(Level(l, 1), kind).conjugated(detail::random_matrix(rng, l));
            cases.push_back({cs, rep_decomposition(cs)});
        }
    auto name = [](const CartanSubgroup& c) {
        return std::string(to_string(c.kind())) + " ell=" + std::to_string(c.level().ell());
    };

    out.push_back(run_check("(i) V1 + V2 + V3 = gl_2 with dims (1,1,2), pairwise non-isomorphic", [&](CheckResult& c) {
        for (const auto& [cs, d] : cases) {
            ++c.cases;
            const u64 l = cs.level().ell();
            const bool dims = d.v1.dim() == 1 && d.v2.dim() == 1 && d.v3.dim() == 2 && d.v1.sum(d.v2).sum(d.v3).dim() == 4;
            bool stable = true;
            for (const auto& g : cs.normalizer_generators())
                stable = stable && d.v1.stable_under(g) && d.v2.stable_under(g) && d.v3.stable_under(g);
            // sigma fixes V1 and negates V2, so the two lines differ as representations
            const ModMatrix s = cs.normalizer_representative();
            const ModMatrix v2 = d.v2.basis_matrices().front();
            const bool distinct = v2.conjugated_by(s) == v2.scaled(l - 1);
            // V3 irreducible: no line in V3 is stable
            bool irreducible = true;
            auto b = d.v3.basis_matrices();
            for (u64 t = 0; t <= l && irreducible; ++t) {
                ModMatrix v = t == l ? b[1] : b[0] + b[1].scaled(t);
                auto line = LieSubspace::span(l, {v});
                bool all = true;
                for (const auto& g : cs.normalizer_generators()) all = all && line.stable_under(g);
                if (all) irreducible = false;
            }
            if (!(dims && stable && distinct && irreducible))
                detail::refute(c, name(cs) + ": dims " + std::to_string(d.v1.dim()) + "," + std::to_string(d.v2.dim()) +
                                      "," + std::to_string(d.v3.dim()) + (stable ? "" : ", not stable") +
                                      (distinct ? "" : ", V1 ~ V2") + (irreducible ? "" : ", V3 reducible"));
        }
    }));

    out.push_back(run_check("(ii) V3 is not a Lie subalgebra", [&](CheckResult& c) {
        for (const auto& [cs, d] : cases) {
            ++c.cases;
            auto esc = d.v3.bracket_escape();
            if (esc.empty() || d.v3.contains(LieSubspace::coords(esc[2], cs.level().ell())))
                detail::refute(c, name(cs) + ": no bracket escaping V3 = " + d.v3.to_string());
        }
    }));

    out.push_back(run_check("(iii) twisted commutators of C+ span sl_2", [&](CheckResult& c) {
        for (const auto& [cs, d] : cases) {
            ++c.cases;
            const u64 l = cs.level().ell();
            auto g = MatGroup::closure(Level(l, 1), cs.normalizer_generators());
            auto span = twisted_commutator_span(g);
            if (!(span == LieSubspace::sl2(l))) detail::refute(c, name(cs) + ": span is " + span.to_string());
        }
    }));
    return out;
}

/// Two random elements generating a group of at most cap elements. Odd
/// attempts take the second generator from the congruence kernel, which keeps
/// groups small at larger primes.
inline MatGroup random_subgroup(std::mt19937_64& rng, const Level& lv, u64 cap, u64* rejected = nullptr) {
    const u64 m = lv.modulus(), l = lv.ell();
    for (u64 attempt = 0;; ++attempt) {
        std::vector<ModMatrix> gens{detail::random_matrix(rng, m), detail::random_matrix(rng, m)};
        if (attempt % 2 == 1) gens[1] = ModMatrix::identity(m) + detail::random_matrix(rng, m).scaled(l);
        try {
            return MatGroup::closure(lv, gens, cap);
        } catch (const Error& e) {
            if (e.code() != Errc::CapExceeded) throw;
            if (rejected) ++*rejected;
        }
    }
}

inline void check_filtration(CheckResult& c, const MatGroup& g) {
    ++c.cases;
    auto rep = verify_filtration_lemma(g);
    for (const auto& ch : rep.checks)
        if (!ch.passed) {
            detail::refute(c, g.describe() + ": " + ch.name + " (" + ch.detail + ")");
            return;
        }
}

/// Filtration lemma on full preimages at level (ell, n) of GL_2 and of every
/// subgroup of GL_2(F_ell) when ell = 3.
inline CheckResult filtration_structured(const Level& lv) {
    return run_check("filtration lemma on structured preimages at " + detail::level_name(lv.ell(), lv.n()),
                     [&](CheckResult& c) {
                         for (unsigned k = 1; k < lv.n(); ++k) {
                             auto base = MatGroup::full_gl2(lv.with_exponent(k));
                             check_filtration(c, MatGroup::ball_preimage(base, lv.n()));
                         }
                         if (lv.ell() != 3) return;
                         const auto full = MatGroup::full_gl2(Level(3, 1));
                         for (const auto& keys : all_subgroups(full)) {
                             std::vector<ModMatrix> gens;
                             for (u64 k : keys) gens.push_back(ModMatrix::from_key(3, k));
                             check_filtration(c, MatGroup::ball_preimage(MatGroup::closure(Level(3, 1), gens), lv.n()));
                         }
                     });
}

/// Filtration lemma on seeded random 2-generator subgroups.
inline CheckResult filtration_random(const Level& lv, u64 count, u64 seed, u64 cap = u64{1} << 20) {
    return run_check("filtration lemma on " + std::to_string(count) + " random subgroups at " +
                         detail::level_name(lv.ell(), lv.n()) + " (seed " + std::to_string(seed) + ")",
                     [&](CheckResult& c) {
                         std::mt19937_64 rng(seed);
                         u64 rejected = 0;
                         for (u64 k = 0; k < count; ++k) check_filtration(c, random_subgroup(rng, lv, cap, &rejected));
                         if (c.passed)
                             c.detail = std::to_string(rejected) + " draws over " + std::to_string(cap) +
                                        " elements resampled";
                     });
}

/// check_dichotomy must find a branch and the branch must hold.
inline void check_dichotomy_case(CheckResult& c, const MatGroup& g, unsigned n, std::optional<DichotomyBranch> expect = {}) {
    ++c.cases;
    DichotomyOutcome out;
    try {
        out = check_dichotomy(g, n);
    } catch (const Error& e) {
        detail::refute(c, g.describe() + " n=" + std::to_string(n) + ": " + e.what());
        return;
    }
    if (expect && out.branch != *expect) {
        detail::refute(c, g.describe() + ": branch " + to_string(out.branch) + ", expected " + to_string(*expect));
        return;
    }
    if (out.branch == DichotomyBranch::Cartan) {
        const auto gn = g.reduce(n);
        for (const auto& x : gn.generators())
            if (!out.cartan || !out.cartan->normalizer_contains(x)) {
                detail::refute(c, g.describe() + ": generator " + x.to_string() + " is outside the reported C+");
                return;
            }
    } else if (!contains_ball(g, 4 * n)) {
        detail::refute(c, g.describe() + ": reported ball I + ell^" + std::to_string(4 * n) + " M_2 is missing");
    }
}

/// Named dichotomy examples: C+(5^5) nonsplit and C+(7^5) split give Cartan,
/// the preimage of C+(5) at level 5^5 gives Ball.
inline CheckResult dichotomy_named() {
    return run_check("dichotomy on the named examples", [&](CheckResult& c) {
        check_dichotomy_case(c, MatGroup::cartan(cartan_standard(Level(5, 5), CartanKind::Nonsplit)), 1,
                             DichotomyBranch::Cartan);
        check_dichotomy_case(c, MatGroup::cartan(cartan_standard(Level(7, 5), CartanKind::Split)), 1,
                             DichotomyBranch::Cartan);
        auto base = MatGroup::closure(Level(5, 1), cartan_standard(Level(5, 1), CartanKind::Nonsplit).normalizer_generators());
        check_dichotomy_case(c, MatGroup::ball_preimage(base, 5), 1, DichotomyBranch::Ball);
    });
}

/// Cartan types whose C+(ell) has a PGL_2 element of order >= 5.
inline std::vector<std::pair<u64, CartanKind>> dichotomy_types(const std::vector<u64>& ells) {
    std::vector<std::pair<u64, CartanKind>> out;
    for (u64 l : ells)
        for (auto kind : {CartanKind::Split, CartanKind::Nonsplit})
            if ((kind == CartanKind::Split ? l - 1 : l + 1) >= 5) out.push_back({l, kind});
    return out;
}

/// Seeded constructed groups meeting the dichotomy assumptions: random
/// conjugates of C+ at level 4n+1, and full preimages of conjugated C+(ell^k)
/// (k = 1, 2) at level 5. Returns at least `count` cases.
inline CheckResult dichotomy_random(const std::vector<u64>& ells, u64 count, u64 seed) {
    return run_check("dichotomy on " + std::to_string(count) + " constructed groups (seed " + std::to_string(seed) + ")",
                     [&](CheckResult& c) {
                         std::mt19937_64 rng(seed);
                         const auto types = dichotomy_types(ells);
                         if (types.empty()) fail(Errc::InvalidArgument, "no prime admits the dichotomy assumptions");
                         for (u64 k = 0; c.cases < count; ++k) {
                             const auto [l, kind] = types[k % types.size()];
                             switch (k / types.size() % 3) {
                                 case 0: {
                                     const unsigned n = (l <= 7 && rng() % 2) ? 2 : 1;
                                     const Level lv(l, 4 * n + 1);
                                     auto cs = cartan_standard(lv, kind).conjugated(detail::random_matrix(rng, lv.modulus()));
                                     check_dichotomy_case(c, MatGroup::cartan(cs), n, DichotomyBranch::Cartan);
                                     break;
                                 }
                                 default: {
                                     const unsigned b = l <= 7 ? 1 + rng() % 2 : 1;
                                     const Level lv(l, b);
                                     auto cs = cartan_standard(lv, kind).conjugated(detail::random_matrix(rng, lv.modulus()));
                                     auto base = MatGroup::closure(lv, cs.normalizer_generators());
                                     check_dichotomy_case(c, MatGroup::ball_preimage(base, 5), 1, DichotomyBranch::Ball);
                                     break;
                                 }
                             }
                         }
                     });
}

/// ell #{A in GL_2(F_ell) : tr A = r} / |GL_2(F_ell)| equals the Euler factor for every r.
inline CheckResult euler_census(const std::vector<u64>& ells) {
    return run_check("Euler factors by trace census", [&](CheckResult& c) {
        for (u64 l : ells) {
            const auto elems = detail::gl2_elements(l);
            const auto census = trace_census(elems);
            for (u64 r = 0; r < l; ++r) {
                ++c.cases;
                const Rational got(BigInt(l) * census[r], BigInt(elems.size()));
                const Rational want = local_factor(l, static_cast<std::int64_t>(r)).value;
                if (got != want)
                    detail::refute(c, "ell=" + std::to_string(l) + " r=" + std::to_string(r) + ": census " +
                                          boost::lexical_cast<std::string>(got) + ", factor " +
                                          boost::lexical_cast<std::string>(want));
            }
        }
    });
}

inline void check_lt_inequality(CheckResult& c, std::span<const ModMatrix> elems, const std::string& what) {
    const u64 m = elems[0].modulus();
    for (u64 r = 0; r < m; ++r) {
        ++c.cases;
        if (!lt_inequality_check(elems, static_cast<std::int64_t>(r), ClosureCheck::Trusted))
            detail::refute(c, what + " of order " + std::to_string(elems.size()) + " fails at r=" + std::to_string(r));
    }
}

/// The finite Lang-Trotter inequality on every subgroup of GL_2(F_3).
inline CheckResult lt_inequality_gl2f3() {
    return run_check("LT inequality on every subgroup of GL_2(F_3)", [&](CheckResult& c) {
        for (const auto& keys : all_subgroups(MatGroup::full_gl2(Level(3, 1)))) {
            std::vector<ModMatrix> elems;
            for (u64 k : keys) elems.push_back(ModMatrix::from_key(3, k));
            check_lt_inequality(c, elems, "subgroup");
        }
    });
}

/// The finite Lang-Trotter inequality on seeded random subgroups of GL_2(F_ell)
/// generated by one to three elements.
inline CheckResult lt_inequality_random(u64 ell, u64 count, u64 seed) {
    return run_check("LT inequality on " + std::to_string(count) + " random subgroups of GL_2(F_" + std::to_string(ell) +
                         ") (seed " + std::to_string(seed) + ")",
                     [&](CheckResult& c) {
                         std::mt19937_64 rng(seed);
                         for (u64 k = 0; k < count; ++k) {
                             std::vector<ModMatrix> gens;
                             for (u64 j = 0, ng = 1 + rng() % 3; j < ng; ++j) gens.push_back(detail::random_matrix(rng, ell));
                             auto elems = closure_elements(gens, ell);
                             check_lt_inequality(c, elems, "random subgroup");
                         }
                     });
}

struct GroupTheoryOptions {
    u64 ell = 5;
    unsigned level = 3;
    u64 seed = 1;
};

/// The matgroup and Lang-Trotter invariant suites at one prime, as run by `verify group-theory`.
inline std::vector<SuiteResult> group_theory(const GroupTheoryOptions& opt) {
    if (opt.ell < 3 || !arith::is_prime(opt.ell)) fail(Errc::InvalidArgument, "--ell must be an odd prime");
    if (opt.level < 1) fail(Errc::InvalidArgument, "--level must be positive");
    const Level lv(opt.ell, opt.level);
    if (lv.modulus() > ModMatrix::kMaxKeyModulus) fail(Errc::InvalidArgument, "ell^level must be at most 65536");
    std::vector<SuiteResult> out;
    auto suite = [&](std::string name, std::vector<CheckResult> checks) {
        SuiteResult s{std::move(name), std::move(checks), 0};
        for (const auto& c : s.checks) s.seconds += c.seconds;
        out.push_back(std::move(s));
    };

    std::vector<CheckResult> cartan{cartan_orders({opt.ell}, opt.level)};
    for (unsigned n = 1; n <= std::min(opt.level, 2u); ++n) {
        const Level at(opt.ell, n);
        CentralizerOptions co;
        co.exhaustive = at.modulus() <= 9;
        co.samples = 200;
        co.seed = opt.seed;
        for (auto& c : centralizer_lemma(at, co)) cartan.push_back(std::move(c));
    }
    cartan.push_back(pgl2_order_lemma({opt.ell}));
    suite("cartan", std::move(cartan));

    if (opt.ell >= 5) suite("representation", representation({opt.ell}, opt.seed));

    if (opt.level >= 3) {
        suite("filtration", {filtration_structured(lv), filtration_random(lv, 10, opt.seed)});
    }

    if (!dichotomy_types({opt.ell}).empty()) suite("dichotomy", {dichotomy_random({opt.ell}, 12, opt.seed)});

    suite("lang-trotter", {euler_census({opt.ell}), lt_inequality_gl2f3(), lt_inequality_random(opt.ell, 20, opt.seed)});
    return out;
}

}  // namespace oit::verify
