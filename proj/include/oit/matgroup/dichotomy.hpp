#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "oit/error.hpp"
#include "oit/matgroup/filtration.hpp"
#include "oit/matgroup/mat_group.hpp"
#include "oit/matgroup/normalizer.hpp"

namespace oit {

enum class DichotomyBranch { Cartan, Ball };

inline const char* to_string(DichotomyBranch b) { return b == DichotomyBranch::Cartan ? "Cartan" : "Ball"; }

struct DichotomyOutcome {
    DichotomyBranch branch;
    std::optional<CartanSubgroup> cartan;  // Cartan branch
    unsigned ball_exponent = 0;            // Ball branch: 4n
    std::optional<ModMatrix> witness;
    std::string evidence;
};

/// Which assumption of the dichotomy failed, or empty if all hold.
inline std::string dichotomy_precondition_failure(const MatGroup& g, unsigned n) {
    const Level& lv = g.level();
    if (n == 0) return "n must be positive";
    if (lv.n() < 4 * n + 1)
        return "level exponent " + std::to_string(lv.n()) + " is below 4n+1 = " + std::to_string(4 * n + 1);
    if (!g.det_surjective()) return "det(G) is not all of (Z/ell^m)^x";
    MatGroup g1 = g.reduce(1).materialize();
    if (!find_cartan_normalizer(g1)) return "G(ell) is not contained in the normalizer of a Cartan";
    if (contained_in_some_cartan(g1)) return "G(ell) is contained in a Cartan";
    if (max_pgl2_order(g1) < 5) return "the image of G(ell) in PGL_2 has no element of order >= 5";
    return {};
}

/// Decide which branch holds for G at level (ell, m), m >= 4n+1: either
/// G(ell^n) lies in a Cartan normalizer, or G contains I + ell^{4n} M_2.
/// The ball is tested first since a group can satisfy both and the ball is
/// the stronger, structural certificate for preimage groups.
inline DichotomyOutcome check_dichotomy(const MatGroup& g, unsigned n) {
    if (auto why = dichotomy_precondition_failure(g, n); !why.empty()) fail(Errc::PreconditionFailed, why);
    if (contains_ball(g, 4 * n)) {
        DichotomyOutcome out{DichotomyBranch::Ball, std::nullopt, 4 * n, std::nullopt, {}};
        out.evidence = g.is_ball_preimage() ? "preimage of a level-" +
                                                  std::to_string(g.as_ball_preimage().base_level.n()) +
                                                  " group contains the congruence ball"
                                            : "all " + std::to_string(arith::ipow(g.level().ell(), 4 * (g.level().n() - 4 * n))) +
                                                  " matrices = I mod ell^" + std::to_string(4 * n) + " found in G";
        return out;
    }
    NormalizerSearch s = find_cartan_normalizer_detail(g.reduce(n));
    if (s.cartan) {
        DichotomyOutcome out{DichotomyBranch::Cartan, s.cartan, 0, s.witness, s.method};
        return out;
    }
    fail(Errc::TheoremViolation, "neither branch verifies for " + g.describe() + " with n = " + std::to_string(n) +
                                     " (" + s.method + ")");
}

}  // namespace oit
