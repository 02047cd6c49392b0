#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oit/matgroup.hpp"
#include "oracles.hpp"

using namespace oit;
using u64 = std::uint64_t;

namespace {

ModMatrix M(u64 m, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return ModMatrix::from_signed(m, a, b, c, d);
}

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::InvalidArgument;
}

}  // namespace

TEST(Level, RejectsTwoAndComposites) {
    EXPECT_EQ(code_of([] { Level(2, 1); }), Errc::InvalidArgument);
    EXPECT_EQ(code_of([] { Level(9, 1); }), Errc::InvalidArgument);
    EXPECT_EQ(code_of([] { Level(3, 0); }), Errc::InvalidArgument);
    EXPECT_EQ(Level(5, 3).modulus(), 125u);
    EXPECT_EQ(Level::from_modulus(343), Level(7, 3));
    EXPECT_EQ(Level(3, 2).gl2_order(), 3888u);
}

TEST(ModMatrix, ArithmeticAgainstDefinitions) {
    std::mt19937_64 rng(7);
    for (u64 m : {3u, 25u, 343u, 65536u}) {
        for (int t = 0; t < 200; ++t) {
            ModMatrix x(m, rng() % m, rng() % m, rng() % m, rng() % m);
            ModMatrix y(m, rng() % m, rng() % m, rng() % m, rng() % m);
            EXPECT_EQ(x * y, oracle::mul(x, y));
            EXPECT_EQ(x.det(), oracle::det(x));
            EXPECT_EQ(ModMatrix::from_key(m, x.key()), x);
            if (x.is_invertible()) {
                EXPECT_TRUE((x * x.inverse()).is_identity());
            }
        }
    }
    EXPECT_EQ(code_of([] { ModMatrix(9, 3, 0, 0, 1).inverse(); }), Errc::NonUnitDet);
}

TEST(GroupClosure, SpecExamples) {
    std::vector<ModMatrix> id{ModMatrix::identity(3)};
    EXPECT_EQ(group_closure(id).order(), 1u);

    std::vector<ModMatrix> sl{M(3, 1, 1, 0, 1), M(3, 0, -1, 1, 0)};
    MatGroup s = group_closure(sl);
    u64 det_one = 0;
    for (const auto& x : oracle::gl2(3)) det_one += oracle::det(x) == 1;
    EXPECT_EQ(s.order(), 24u);
    EXPECT_EQ(s.order(), det_one);

    MatGroup g9 = MatGroup::full_gl2(Level(3, 2));
    EXPECT_EQ(g9.order(), 3888u);
    EXPECT_EQ(g9.order(), oracle::gl2(9).size());
}

TEST(GroupClosure, MatchesOracleClosure) {
    std::mt19937_64 rng(11);
    auto all = oracle::gl2(9);
    for (int t = 0; t < 40; ++t) {
        std::vector<ModMatrix> gens{all[rng() % all.size()], all[rng() % all.size()]};
        MatGroup g = group_closure(gens);
        auto ref = oracle::closure(gens, 9);
        ASSERT_EQ(g.order(), ref.size());
        for (const auto& e : ref) {
            auto [a, b, c, d] = e;
            EXPECT_TRUE(g.contains(ModMatrix(9, a, b, c, d)));
        }
    }
}

TEST(GroupClosure, Errors) {
    auto gens = MatGroup::gl2_generators(Level(3, 2));
    EXPECT_EQ(code_of([&] { group_closure(gens, 100); }), Errc::CapExceeded);
    std::vector<ModMatrix> bad{M(9, 3, 0, 0, 1)};
    EXPECT_EQ(code_of([&] { group_closure(bad); }), Errc::NonUnitDet);
    std::vector<ModMatrix> mixed{ModMatrix::identity(9), ModMatrix::identity(3)};
    EXPECT_EQ(code_of([&] { group_closure(mixed); }), Errc::LevelMismatch);
}

TEST(Cartan, StandardExamples) {
    EXPECT_EQ(cartan_standard(Level(3, 1), CartanKind::Split).order(), 4u);
    EXPECT_EQ(cartan_standard(Level(3, 1), CartanKind::Nonsplit, 2).order(), 8u);
    EXPECT_EQ(cartan_standard(Level(3, 2), CartanKind::Split).order(), 36u);
    EXPECT_EQ(code_of([] { cartan_standard(Level(3, 1), CartanKind::Nonsplit, 1); }), Errc::BadEpsilon);

    // enumeration of {(a, 2b; b, a)} with (a, b) != (0, 0) mod 3
    u64 count = 0;
    for (u64 a = 0; a < 3; ++a)
        for (u64 b = 0; b < 3; ++b)
            if (std::gcd(oracle::det(ModMatrix(3, a, 2 * b, b, a)), u64{3}) == 1) ++count;
    EXPECT_EQ(count, 8u);
}

TEST(Cartan, OrdersMatchClosureOracle) {
    for (u64 l : {3u, 5u, 7u}) {
        for (unsigned n = 1; n <= 3; ++n) {
            Level lv(l, n);
            for (auto kind : {CartanKind::Split, CartanKind::Nonsplit}) {
                CartanSubgroup c = cartan_standard(lv, kind);
                auto ref = oracle::closure(c.generators(), lv.modulus());
                EXPECT_EQ(ref.size(), c.order()) << l << "^" << n << " " << to_string(kind);
                auto refp = oracle::closure(c.normalizer_generators(), lv.modulus());
                EXPECT_EQ(refp.size(), c.normalizer_order());
                u64 k = lv.ell() - 1, t = arith::ipow(l, 2 * (n - 1));
                EXPECT_EQ(c.order(), (kind == CartanKind::Split ? k * k : (l * l - 1)) * t);
            }
        }
    }
}

TEST(Cartan, PositionExamples) {
    CartanSubgroup c = cartan_standard(Level(3, 1), CartanKind::Split);
    EXPECT_EQ(c.position(M(3, 2, 0, 0, 1)), CartanPosition::InCartan);
    EXPECT_EQ(c.position(M(3, 0, 1, 1, 0)), CartanPosition::InNormalizerOnly);
    EXPECT_EQ(c.position(M(3, 1, 1, 0, 1)), CartanPosition::Outside);
    EXPECT_EQ(code_of([&] { c.position(ModMatrix::identity(9)); }), Errc::LevelMismatch);
}

TEST(Cartan, PositionAgreesWithNormalizerDefinition) {
    // g normalizes C iff g C g^{-1} = C; compare with the algebraic test on all of GL_2(F_5)
    for (auto kind : {CartanKind::Split, CartanKind::Nonsplit}) {
        CartanSubgroup c = cartan_standard(Level(5, 1), kind).conjugated(M(5, 1, 2, 0, 1));
        auto elems = c.elements();
        std::set<oracle::Entries> cset;
        for (const auto& x : elems) cset.insert(oracle::entries(x));
        for (const auto& g : oracle::gl2(5)) {
            bool normalizes = true;
            for (const auto& x : elems)
                if (!cset.count(oracle::entries(x.conjugated_by(g)))) normalizes = false;
            auto pos = c.position(g);
            EXPECT_EQ(pos != CartanPosition::Outside, normalizes);
            EXPECT_EQ(pos == CartanPosition::InCartan, cset.count(oracle::entries(g)) == 1);
        }
    }
}

TEST(Cartan, CentralizerExamples) {
    auto c1 = cartan_centralizer(Level(3, 1), M(3, 1, 0, 0, 2));
    EXPECT_EQ(c1.kind(), CartanKind::Split);
    EXPECT_EQ(c1.order(), 4u);
    EXPECT_TRUE(c1.same_subgroup(cartan_standard(Level(3, 1), CartanKind::Split)));

    auto c2 = cartan_centralizer(Level(3, 1), M(3, 0, 2, 1, 0));
    EXPECT_EQ(c2.kind(), CartanKind::Nonsplit);
    EXPECT_EQ(c2.order(), 8u);
    EXPECT_EQ(oracle::centralizer(M(3, 0, 2, 1, 0)).size(), 8u);

    ModMatrix a9 = M(9, 1, 0, 0, 2);
    auto c3 = cartan_centralizer(Level(3, 2), a9);
    EXPECT_EQ(c3.order(), 36u);
    auto cent = oracle::centralizer(a9);
    EXPECT_EQ(cent.size(), 36u);
    for (const auto& g : cent) EXPECT_TRUE(c3.contains(g));
    for (const auto& g : c3.elements()) EXPECT_EQ(g * a9, a9 * g);

    EXPECT_EQ(code_of([] { cartan_centralizer(Level(3, 1), ModMatrix::identity(3)); }), Errc::NotRegularSemisimple);
}

TEST(Cartan, CentralizerIsCartanForEveryRegularSemisimpleAlpha) {
    // exhaustive at 3 and 9, sampled above
    for (u64 m : {3u, 9u, 5u, 25u, 7u}) {
        Level lv = Level::from_modulus(m);
        for (const auto& alpha : oracle::gl2(m)) {
            if (!lv.is_unit(alpha.discriminant())) continue;
            CartanSubgroup c = cartan_centralizer(lv, alpha);
            ASSERT_TRUE(c.contains(alpha));
            bool square = arith::legendre(alpha.discriminant() % lv.ell(), lv.ell()) == 1;
            EXPECT_EQ(c.kind() == CartanKind::Split, square);
            if (m <= 9) {
                EXPECT_EQ(oracle::centralizer_size(alpha), c.order());
            }
        }
    }
    std::mt19937_64 rng(5);
    for (u64 m : {27u, 125u, 49u, 343u}) {
        Level lv = Level::from_modulus(m);
        for (int t = 0; t < 4;) {
            ModMatrix alpha(m, rng() % m, rng() % m, rng() % m, rng() % m);
            if (!alpha.is_invertible() || !lv.is_unit(alpha.discriminant())) continue;
            ++t;
            CartanSubgroup c = cartan_centralizer(lv, alpha);
            EXPECT_EQ(oracle::centralizer_size(alpha), c.order()) << alpha;
        }
    }
}

TEST(Cartan, ConjugatingAlphaIntoCartanForcesNormalizer) {
    for (u64 m : {3u, 9u}) {
        Level lv = Level::from_modulus(m);
        auto all = oracle::gl2(m);
        for (std::size_t ai = 0; ai < all.size(); ai += (m == 9 ? 37 : 1)) {
            const auto& alpha = all[ai];
            if (!lv.is_unit(alpha.discriminant())) continue;
            CartanSubgroup c = cartan_centralizer(lv, alpha);
            for (const auto& g : all) {
                if (c.contains(alpha.conjugated_by(g))) {
                    EXPECT_NE(c.position(g), CartanPosition::Outside);
                }
            }
        }
    }
}

TEST(Cartan, LargePgl2OrderForcesRegularWithTrace) {
    for (u64 l : {5u, 7u, 11u}) {
        for (auto kind : {CartanKind::Split, CartanKind::Nonsplit}) {
            for (const auto& b : cartan_standard(Level(l, 1), kind).elements()) {
                if (pgl2_order(b) <= 2) continue;
                EXPECT_NE(b.discriminant(), 0u);
                EXPECT_NE(b.trace(), 0u);
            }
        }
    }
}

TEST(Cartan, AlgebraKeyIdentifiesSubgroup) {
    Level lv(5, 2);
    auto c = cartan_standard(lv, CartanKind::Nonsplit);
    auto h = M(25, 3, 1, 7, 5);
    auto d = c.conjugated(h);
    auto e = cartan_centralizer(lv, d.element(2, 3));
    EXPECT_TRUE(d.same_subgroup(e));
    EXPECT_FALSE(c.same_subgroup(d));
}

TEST(Normalizer, Examples) {
    auto c = cartan_standard(Level(3, 2), CartanKind::Split);
    auto found = find_cartan_normalizer(MatGroup::cartan(c, false));
    ASSERT_TRUE(found);
    for (const auto& g : c.generators()) EXPECT_TRUE(found->normalizer_contains(g));

    auto mat = MatGroup::closure(Level(3, 2), c.generators());
    auto found2 = find_cartan_normalizer(mat);
    ASSERT_TRUE(found2);
    EXPECT_TRUE(found2->same_subgroup(c));

    EXPECT_FALSE(find_cartan_normalizer(MatGroup::full_gl2(Level(3, 1))));

    auto c5 = cartan_standard(Level(5, 1), CartanKind::Split);
    auto gens = c5.generators();
    gens.push_back(M(5, 0, 1, 1, 0));
    auto g5 = MatGroup::closure(Level(5, 1), gens);
    EXPECT_EQ(g5.order(), 32u);
    auto f5 = find_cartan_normalizer(g5);
    ASSERT_TRUE(f5);
    EXPECT_TRUE(f5->same_subgroup(c5));
}

TEST(Normalizer, AgreesWithExhaustiveSearchOnSmallSubgroups) {
    // compare against testing every Cartan normalizer at (5,1) by element sets
    Level lv(5, 1);
    std::vector<std::set<oracle::Entries>> normalizers;
    for (const auto& c : detail::all_cartans(lv)) {
        std::set<oracle::Entries> s;
        for (const auto& x : c.normalizer_elements()) s.insert(oracle::entries(x));
        normalizers.push_back(s);
    }
    // Cartans of GL_2(F_5): |GL_2| / |C+| per kind = 480/32 + 480/48 = 25
    EXPECT_EQ(normalizers.size(), 25u);
    std::mt19937_64 rng(3);
    auto all = oracle::gl2(5);
    for (int t = 0; t < 300; ++t) {
        std::vector<ModMatrix> gens;
        int k = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < k; ++i) gens.push_back(all[rng() % all.size()]);
        auto g = MatGroup::closure(lv, gens);
        bool expected = false;
        for (const auto& s : normalizers) {
            bool inside = true;
            for (const auto& x : g.elements())
                if (!s.count(oracle::entries(x))) inside = false;
            expected = expected || inside;
        }
        auto found = find_cartan_normalizer(g);
        EXPECT_EQ(found.has_value(), expected);
        if (found) {
            for (const auto& x : g.elements()) EXPECT_TRUE(found->normalizer_contains(x));
        }
    }
}

TEST(Filtration, Examples) {
    auto triv = MatGroup::closure(Level(3, 1), std::vector<ModMatrix>{ModMatrix::identity(3)});
    auto ball = MatGroup::ball_preimage(triv, 2);
    EXPECT_EQ(filtration(ball).g_at(1).dim(), 4u);

    auto scal = MatGroup::closure(Level(3, 2), std::vector<ModMatrix>{ModMatrix::scalar(9, 4)});
    auto ts = filtration(scal);
    EXPECT_EQ(ts.g_at(1), LieSubspace::scalars(3));

    auto unip = MatGroup::closure(Level(3, 2), std::vector<ModMatrix>{M(9, 1, 3, 0, 1), M(9, 1, 0, 3, 1)});
    auto tu = filtration(unip);
    EXPECT_EQ(tu.g_at(1).dim(), 2u);
    EXPECT_EQ(tu.g_at(1), LieSubspace::span(3, {M(3, 0, 1, 0, 0), M(3, 0, 0, 1, 0)}));

    EXPECT_EQ(code_of([] { filtration(MatGroup::full_gl2(Level(3, 1))); }), Errc::LevelTooLow);
}

TEST(Filtration, MatchesDirectImageComputation) {
    std::mt19937_64 rng(17);
    auto all = oracle::gl2(27);
    for (int t = 0; t < 10; ++t) {
        std::vector<ModMatrix> gens;
        for (int i = 0; i < 2; ++i) {
            ModMatrix y = all[rng() % all.size()];
            gens.push_back(ModMatrix::identity(27) + (y - ModMatrix::identity(27)).scaled(3 * (1 + rng() % 2)));
            if (!gens.back().is_invertible()) gens.back() = ModMatrix::identity(27);
        }
        auto g = MatGroup::closure(Level(3, 3), gens);
        auto tab = filtration(g);
        for (unsigned i = 1; i <= 2; ++i) {
            std::vector<std::vector<u64>> rows, srows;
            u64 pi = arith::ipow(3, i);
            for (const auto& x : g.elements()) {
                ModMatrix y = x - ModMatrix::identity(27);
                if (y.a() % pi || y.b() % pi || y.c() % pi || y.d() % pi) continue;
                std::vector<u64> row{(y.a() / pi) % 3, (y.b() / pi) % 3, (y.c() / pi) % 3, (y.d() / pi) % 3};
                rows.push_back(row);
                if (x.det() == 1) srows.push_back(row);
            }
            EXPECT_EQ(tab.g_at(i).dim(), oracle::rank_mod_p(rows, 3));
            EXPECT_EQ(tab.s_at(i).dim(), oracle::rank_mod_p(srows, 3));
        }
    }
}

TEST(ContainsBall, Examples) {
    EXPECT_TRUE(contains_ball(MatGroup::full_gl2(Level(3, 2)), 1));
    auto c = cartan_standard(Level(3, 2), CartanKind::Split);
    EXPECT_FALSE(contains_ball(MatGroup::closure(Level(3, 2), c.generators()), 1));
    EXPECT_EQ(c.position(M(9, 1, 3, 0, 1)), CartanPosition::Outside);
    auto c5 = cartan_standard(Level(5, 1), CartanKind::Nonsplit);
    auto base = MatGroup::closure(Level(5, 1), c5.normalizer_generators());
    EXPECT_TRUE(contains_ball(MatGroup::ball_preimage(base, 5), 1));
    EXPECT_FALSE(contains_ball(MatGroup::cartan(cartan_standard(Level(5, 5), CartanKind::Nonsplit)), 1));
}

TEST(Representation, DecompositionExamples) {
    auto split = rep_decomposition(cartan_standard(Level(5, 1), CartanKind::Split));
    EXPECT_EQ(split.v1, LieSubspace::scalars(5));
    EXPECT_EQ(split.v2, LieSubspace::span(5, {M(5, 1, 0, 0, -1)}));
    EXPECT_EQ(split.v3, LieSubspace::span(5, {M(5, 0, 1, 0, 0), M(5, 0, 0, 1, 0)}));

    auto ns = rep_decomposition(cartan_standard(Level(5, 1), CartanKind::Nonsplit, 2));
    EXPECT_EQ(ns.v3, LieSubspace::span(5, {M(5, 1, 0, 0, -1), M(5, 0, 2, -1, 0)}));
}

TEST(Representation, PropertiesForSeveralPrimes) {
    for (u64 l : {5u, 7u, 11u, 13u}) {
        for (auto kind : {CartanKind::Split, CartanKind::Nonsplit}) {
            auto c = cartan_standard(Level(l, 1), kind).conjugated(M(l, 1, 1, 1, 2));
            auto d = rep_decomposition(c);
            EXPECT_EQ(d.v1.dim(), 1u);
            EXPECT_EQ(d.v2.dim(), 1u);
            EXPECT_EQ(d.v3.dim(), 2u);
            EXPECT_EQ(d.v1.sum(d.v2).sum(d.v3).dim(), 4u);
            EXPECT_FALSE(d.v3.is_lie_subalgebra());
            for (const auto& g : c.normalizer_generators()) {
                EXPECT_TRUE(d.v2.stable_under(g));
                EXPECT_TRUE(d.v3.stable_under(g));
            }
            auto cp = MatGroup::closure(Level(l, 1), c.normalizer_generators());
            EXPECT_EQ(twisted_commutator_span(cp), LieSubspace::sl2(l));
        }
    }
}

TEST(Representation, TwistedCommutatorTrivialCases) {
    auto triv = MatGroup::closure(Level(5, 1), std::vector<ModMatrix>{ModMatrix::identity(5)});
    EXPECT_EQ(twisted_commutator_span(triv).dim(), 0u);
    auto scal = MatGroup::closure(Level(5, 1), std::vector<ModMatrix>{ModMatrix::scalar(5, 2)});
    EXPECT_EQ(scal.order(), 4u);
    EXPECT_EQ(twisted_commutator_span(scal).dim(), 0u);
}

TEST(Commutator, Examples) {
    auto c = cartan_standard(Level(5, 2), CartanKind::Nonsplit);
    EXPECT_EQ(commutator_subgroup(MatGroup::closure(Level(5, 2), c.generators())).order(), 1u);
    EXPECT_EQ(commutator_subgroup(MatGroup::full_gl2(Level(3, 1))).order(), 24u);
    EXPECT_EQ(commutator_subgroup(MatGroup::full_gl2(Level(5, 1))).order(), 120u);
}

TEST(Commutator, MatchesAllCommutatorsClosure) {
    std::mt19937_64 rng(23);
    auto all = oracle::gl2(5);
    for (int t = 0; t < 10; ++t) {
        std::vector<ModMatrix> gens{all[rng() % all.size()], all[rng() % all.size()]};
        auto g = MatGroup::closure(Level(5, 1), gens);
        auto elems = g.elements();
        std::vector<ModMatrix> comms;
        std::set<oracle::Entries> seen;
        for (const auto& x : elems)
            for (const auto& y : elems) {
                auto c = group_commutator(x, y);
                if (seen.insert(oracle::entries(c)).second) comms.push_back(c);
            }
        EXPECT_EQ(commutator_subgroup(g).order(), oracle::closure(comms, 5).size());
    }
}

TEST(FiltrationLemma, FullGroupAndScalars) {
    auto rep = verify_filtration_lemma(MatGroup::full_gl2(Level(3, 3)));
    EXPECT_TRUE(rep.all_passed());
    bool saw_v = false;
    for (const auto& c : rep.checks) saw_v = saw_v || c.name.rfind("(v)", 0) == 0;
    EXPECT_TRUE(saw_v);

    auto scal = MatGroup::closure(Level(3, 3), std::vector<ModMatrix>{ModMatrix::scalar(27, 4), ModMatrix::scalar(27, 2)});
    auto rs = verify_filtration_lemma(scal);
    EXPECT_TRUE(rs.all_passed());
    auto t = filtration(scal);
    for (unsigned i = 1; i <= 2; ++i) EXPECT_EQ(t.g_at(i), LieSubspace::scalars(3));

    auto triv = MatGroup::closure(Level(3, 1), std::vector<ModMatrix>{ModMatrix::identity(3)});
    auto pre = MatGroup::ball_preimage(MatGroup::full_gl2(Level(3, 1)), 4);
    EXPECT_TRUE(verify_filtration_lemma(pre).all_passed());
    EXPECT_TRUE(verify_filtration_lemma(MatGroup::ball_preimage(triv, 4)).all_passed());
}

TEST(Dichotomy, Examples) {
    auto cn = cartan_standard(Level(5, 5), CartanKind::Nonsplit);
    auto out = check_dichotomy(MatGroup::cartan(cn), 1);
    EXPECT_EQ(out.branch, DichotomyBranch::Cartan);
    ASSERT_TRUE(out.cartan);
    EXPECT_TRUE(out.cartan->same_subgroup(cn.reduced(1)));

    auto base = MatGroup::closure(Level(5, 1), cartan_standard(Level(5, 1), CartanKind::Nonsplit).normalizer_generators());
    auto ball = check_dichotomy(MatGroup::ball_preimage(base, 5), 1);
    EXPECT_EQ(ball.branch, DichotomyBranch::Ball);
    EXPECT_EQ(ball.ball_exponent, 4u);

    auto cs = cartan_standard(Level(7, 5), CartanKind::Split);
    EXPECT_EQ(check_dichotomy(MatGroup::cartan(cs), 1).branch, DichotomyBranch::Cartan);
}

TEST(Dichotomy, Preconditions) {
    auto cn = cartan_standard(Level(5, 4), CartanKind::Nonsplit);
    EXPECT_EQ(code_of([&] { check_dichotomy(MatGroup::cartan(cn), 1); }), Errc::PreconditionFailed);
    // C itself (no normalizer element) sits inside a Cartan mod ell
    auto c5 = cartan_standard(Level(5, 5), CartanKind::Nonsplit);
    EXPECT_EQ(code_of([&] { check_dichotomy(MatGroup::cartan(c5, false), 1); }), Errc::PreconditionFailed);
    // split C+(5): PGL_2 image is dihedral of order 8, no element of order >= 5
    auto s5 = cartan_standard(Level(5, 5), CartanKind::Split);
    EXPECT_EQ(code_of([&] { check_dichotomy(MatGroup::cartan(s5), 1); }), Errc::PreconditionFailed);
}

TEST(Dichotomy, LevelTwoCartanAndBall) {
    auto c = cartan_standard(Level(5, 9), CartanKind::Nonsplit).conjugated(M(1953125, 2, 1, 1, 1));
    auto out = check_dichotomy(MatGroup::cartan(c), 2);
    EXPECT_EQ(out.branch, DichotomyBranch::Cartan);
    for (const auto& g : c.reduced(2).normalizer_generators()) EXPECT_TRUE(out.cartan->normalizer_contains(g));

    auto base = MatGroup::closure(Level(7, 2), cartan_standard(Level(7, 2), CartanKind::Split).normalizer_generators());
    auto pre = MatGroup::ball_preimage(base, 9);
    auto o2 = check_dichotomy(pre, 2);
    EXPECT_EQ(o2.branch, DichotomyBranch::Ball);
}
