#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "oit/arith.hpp"
#include "oit/error.hpp"
#include "oit/matgroup/mod_matrix.hpp"

namespace oit {

/// Coordinates of a matrix of gl_2(F_ell) in the basis (I, E12, E21, diag(1,-1)).
using LieVector = std::array<std::uint64_t, 4>;

/// A subspace of gl_2(F_ell) kept in reduced row echelon form with pivots in
/// basis order (I, E12, E21, diag(1,-1)), so equal subspaces have equal bases.
class LieSubspace {
public:
    using u64 = std::uint64_t;

    explicit LieSubspace(u64 ell) : ell_(ell) {}

    static LieSubspace zero(u64 ell) { return LieSubspace(ell); }

    static LieSubspace gl2(u64 ell) {
        LieSubspace s(ell);
        for (int i = 0; i < 4; ++i) {
            LieVector v{0, 0, 0, 0};
            v[i] = 1;
            s.add(v);
        }
        return s;
    }

    static LieSubspace sl2(u64 ell) {
        LieSubspace s(ell);
        s.add(LieVector{0, 1, 0, 0});
        s.add(LieVector{0, 0, 1, 0});
        s.add(LieVector{0, 0, 0, 1});
        return s;
    }

    static LieSubspace scalars(u64 ell) {
        LieSubspace s(ell);
        s.add(LieVector{1, 0, 0, 0});
        return s;
    }

    static LieSubspace span(u64 ell, const std::vector<ModMatrix>& ms) {
        LieSubspace s(ell);
        for (const auto& m : ms) s.add(m);
        return s;
    }

    /// Coordinates of a matrix whose modulus is a multiple of ell.
    static LieVector coords(const ModMatrix& x, u64 ell) {
        u64 a = x.a() % ell, b = x.b() % ell, c = x.c() % ell, d = x.d() % ell;
        u64 half = (ell + 1) / 2;
        return {arith::mulmod(arith::addmod(a, d, ell), half, ell), b, c,
                arith::mulmod(arith::submod(a, d, ell), half, ell)};
    }

    static ModMatrix to_matrix(const LieVector& v, u64 ell) {
        return ModMatrix(ell, arith::addmod(v[0], v[3], ell), v[1], v[2], arith::submod(v[0], v[3], ell));
    }

    u64 ell() const { return ell_; }
    unsigned dim() const { return static_cast<unsigned>(basis_.size()); }
    const std::vector<LieVector>& basis() const { return basis_; }

    std::vector<ModMatrix> basis_matrices() const {
        std::vector<ModMatrix> out;
        for (const auto& v : basis_) out.push_back(to_matrix(v, ell_));
        return out;
    }

    /// Adds a vector; returns true if the dimension grew.
    bool add(LieVector v) {
        for (auto& x : v) x %= ell_;
        reduce_against_basis(v);
        int p = pivot(v);
        if (p < 0) return false;
        normalize(v, p);
        for (auto& row : basis_) {
            u64 f = row[p];
            if (f) axpy(row, v, ell_ - f);
        }
        basis_.push_back(v);
        std::sort(basis_.begin(), basis_.end(), [](const LieVector& x, const LieVector& y) {
            return pivot(x) < pivot(y);
        });
        return true;
    }

    bool add(const ModMatrix& m) { return add(coords(m, ell_)); }

    bool contains(LieVector v) const {
        for (auto& x : v) x %= ell_;
        reduce_against_basis(v);
        return pivot(v) < 0;
    }

    bool contains(const ModMatrix& m) const { return contains(coords(m, ell_)); }

    bool is_subspace_of(const LieSubspace& o) const {
        for (const auto& v : basis_)
            if (!o.contains(v)) return false;
        return true;
    }

    LieSubspace sum(const LieSubspace& o) const {
        LieSubspace s = *this;
        for (const auto& v : o.basis_) s.add(v);
        return s;
    }

    LieSubspace intersect(const LieSubspace& o) const {
        // enumerates this subspace; at most ell^4 vectors
        LieSubspace out(ell_);
        if (dim() == 0 || o.dim() == 0) return out;
        u64 total = 1;
        for (unsigned i = 0; i < dim(); ++i) total *= ell_;
        for (u64 idx = 1; idx < total; ++idx) {
            u64 t = idx;
            LieVector v{0, 0, 0, 0};
            for (unsigned i = 0; i < dim(); ++i) {
                u64 c = t % ell_;
                t /= ell_;
                if (c) axpy(v, basis_[i], c);
            }
            if (o.contains(v)) out.add(v);
            if (out.dim() == std::min(dim(), o.dim())) break;
        }
        return out;
    }

    /// Intersection with sl_2: the trace-zero part (first coordinate zero).
    LieSubspace traceless_part() const { return intersect(sl2(ell_)); }

    /// The image of the trace map on this subspace is all of F_ell.
    bool trace_surjective() const {
        for (const auto& v : basis_)
            if (v[0] != 0) return true;
        return false;
    }

    /// Closed under [A, B] = AB - BA.
    bool is_lie_subalgebra() const { return bracket_escape().empty(); }

    /// A pair of basis elements whose bracket leaves the subspace, if any.
    std::vector<ModMatrix> bracket_escape() const {
        auto ms = basis_matrices();
        for (std::size_t i = 0; i < ms.size(); ++i)
            for (std::size_t j = i + 1; j < ms.size(); ++j)
                if (!contains(bracket(ms[i], ms[j]))) return {ms[i], ms[j], bracket(ms[i], ms[j])};
        return {};
    }

    /// Stable under X -> g X g^{-1}.
    bool stable_under(const ModMatrix& g) const {
        ModMatrix gl = g.reduced(ell_);
        ModMatrix gi = gl.inverse();
        for (const auto& m : basis_matrices())
            if (!contains(gl * m * gi)) return false;
        return true;
    }

    std::string to_string() const {
        std::string s = "span{";
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if (i) s += ", ";
            s += "(" + std::to_string(basis_[i][0]) + "," + std::to_string(basis_[i][1]) + "," +
                 std::to_string(basis_[i][2]) + "," + std::to_string(basis_[i][3]) + ")";
        }
        return s + "}";
    }

    friend bool operator==(const LieSubspace& x, const LieSubspace& y) {
        return x.ell_ == y.ell_ && x.basis_ == y.basis_;
    }

private:
    static int pivot(const LieVector& v) {
        for (int i = 0; i < 4; ++i)
            if (v[i]) return i;
        return -1;
    }

    void axpy(LieVector& y, const LieVector& x, u64 f) const {
        for (int i = 0; i < 4; ++i) y[i] = arith::addmod(y[i], arith::mulmod(x[i], f, ell_), ell_);
    }

    void normalize(LieVector& v, int p) const {
        u64 inv = *arith::invmod(v[p], ell_);
        for (auto& x : v) x = arith::mulmod(x, inv, ell_);
    }

    void reduce_against_basis(LieVector& v) const {
        for (const auto& row : basis_) {
            int p = pivot(row);
            u64 f = v[p];
            if (f) axpy(v, row, ell_ - f);
        }
    }

    u64 ell_;
    std::vector<LieVector> basis_;
};

}  // namespace oit
