#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "oit/error.hpp"
#include "oit/matgroup/closure.hpp"
#include "oit/matgroup/mat_group.hpp"

namespace oit {

/// Every subgroup of a small materialized group, as sorted key sets ordered
/// by (size, keys). Starts from the cyclic subgroups and closes the family
/// under pairwise joins; every subgroup is a join of cyclic ones.
inline std::vector<std::vector<std::uint64_t>> all_subgroups(const MatGroup& g, std::size_t max_order = 4096) {
    if (g.order() > max_order) fail(Errc::CapExceeded, "subgroup lattice enumeration is limited to small groups");
    const auto m = g.modulus();
    std::set<std::vector<std::uint64_t>> found;
    auto add = [&](std::vector<ModMatrix> gens) {
        auto keys = closure_keys(gens, m);
        std::sort(keys.begin(), keys.end());
        return found.insert(std::move(keys)).second;
    };
    for (const auto& x : g.elements()) add({x});
    std::vector<std::vector<std::uint64_t>> frontier(found.begin(), found.end());
    const std::vector<std::vector<std::uint64_t>> cyclic = frontier;
    // joins with a cyclic subgroup suffice: H v <x> v <y> = (H v <x>) v <y>
    while (!frontier.empty()) {
        std::vector<std::vector<std::uint64_t>> next;
        for (const auto& h : frontier) {
            for (const auto& c : cyclic) {
                if (std::includes(h.begin(), h.end(), c.begin(), c.end())) continue;
                std::vector<ModMatrix> gens;
                for (auto k : h) gens.push_back(ModMatrix::from_key(m, k));
                for (auto k : c) gens.push_back(ModMatrix::from_key(m, k));
                auto keys = closure_keys(gens, m);
                std::sort(keys.begin(), keys.end());
                if (found.insert(keys).second) next.push_back(std::move(keys));
            }
        }
        frontier = std::move(next);
    }
    std::vector<std::vector<std::uint64_t>> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return out;
}

}  // namespace oit
