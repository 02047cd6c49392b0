#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "oit/error.hpp"
#include "oit/matgroup/mod_matrix.hpp"

namespace oit {

/// Default element cap for materialized groups.
inline constexpr std::uint64_t kDefaultClosureCap = std::uint64_t{1} << 24;

/// Open-addressing set of packed matrix keys. Key 0 (the zero matrix) never
/// belongs to a group, so it marks empty slots.
class KeySet {
public:
    explicit KeySet(std::size_t expected = 16) {
        std::size_t cap = 16;
        while (cap < expected * 2) cap <<= 1;
        slots_.assign(cap, 0);
    }

    /// Returns true when the key was not present.
    bool insert(std::uint64_t key) {
        if ((size_ + 1) * 2 > slots_.size()) grow();
        return insert_no_grow(key);
    }

    bool contains(std::uint64_t key) const {
        std::size_t mask = slots_.size() - 1;
        for (std::size_t i = hash(key) & mask;; i = (i + 1) & mask) {
            if (slots_[i] == key) return true;
            if (slots_[i] == 0) return false;
        }
    }

    std::size_t size() const { return size_; }

private:
    static std::size_t hash(std::uint64_t k) {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        k *= 0xc4ceb3f97a12cd8dULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }

    bool insert_no_grow(std::uint64_t key) {
        std::size_t mask = slots_.size() - 1;
        for (std::size_t i = hash(key) & mask;; i = (i + 1) & mask) {
            if (slots_[i] == key) return false;
            if (slots_[i] == 0) {
                slots_[i] = key;
                ++size_;
                return true;
            }
        }
    }

    void grow() {
        std::vector<std::uint64_t> old;
        old.swap(slots_);
        slots_.assign(old.size() * 2, 0);
        size_ = 0;
        for (auto k : old)
            if (k) insert_no_grow(k);
    }

    std::vector<std::uint64_t> slots_;
    std::size_t size_ = 0;
};

/// Elements of the subgroup generated by `gens` inside GL_2(Z/mZ), as packed keys
/// in discovery order (identity first). Breadth-first over right multiplication;
/// in a finite group the positive monoid generated is already the subgroup.
inline std::vector<std::uint64_t> closure_keys(std::span<const ModMatrix> gens, std::uint64_t modulus,
                                               std::uint64_t cap = kDefaultClosureCap) {
    if (cap < 1) fail(Errc::InvalidArgument, "closure cap must be >= 1");
    if (modulus > ModMatrix::kMaxKeyModulus)
        fail(Errc::InvalidArgument, "modulus " + std::to_string(modulus) + " too large to materialize (max 65536)");
    for (const auto& g : gens) {
        if (g.modulus() != modulus) fail(Errc::LevelMismatch, "generator " + g.to_string() + " has the wrong modulus");
        if (!g.is_invertible()) fail(Errc::NonUnitDet, "generator " + g.to_string() + " is singular");
    }
    std::vector<std::uint64_t> elems;
    KeySet seen(64);
    auto id = ModMatrix::identity(modulus);
    elems.push_back(id.key());
    seen.insert(id.key());
    for (std::size_t i = 0; i < elems.size(); ++i) {
        ModMatrix x = ModMatrix::from_key(modulus, elems[i]);
        for (const auto& g : gens) {
            ModMatrix y = x * g;
            if (seen.insert(y.key())) {
                if (elems.size() >= cap)
                    fail(Errc::CapExceeded, "closure exceeded cap of " + std::to_string(cap) + " elements");
                elems.push_back(y.key());
            }
        }
    }
    return elems;
}

inline std::vector<ModMatrix> closure_elements(std::span<const ModMatrix> gens, std::uint64_t modulus,
                                               std::uint64_t cap = kDefaultClosureCap) {
    auto keys = closure_keys(gens, modulus, cap);
    std::vector<ModMatrix> out;
    out.reserve(keys.size());
    for (auto k : keys) out.push_back(ModMatrix::from_key(modulus, k));
    return out;
}

}  // namespace oit
