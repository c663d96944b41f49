/**
 * Dense exact linear algebra over the rationals.
 *
 * Everything is deterministic: reduced row echelon form with first-nonzero
 * pivoting fixes the kernel and cokernel bases, the particular solutions,
 * and therefore every matrix the rest of the library produces.  Sizes stay
 * small (tens of rows), so no fraction-free or modular tricks are needed.
 */
#ifndef STRATA_LINALG_HPP
#define STRATA_LINALG_HPP

#include <cassert>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "strata/rational.hpp"

namespace strata {

class RatMat {
  public:
    RatMat() : rows_(0), cols_(0) {}
    RatMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}

    static RatMat identity(std::size_t n) {
        RatMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const RatMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const RatMat& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const Rat& x : a_)
            if (x != 0) return false;
        return true;
    }

    RatMat transpose() const {
        RatMat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RatVec row(std::size_t i) const {
        RatVec r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }
    RatVec col(std::size_t j) const {
        RatVec c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }
    void set_col(std::size_t j, const RatVec& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

  private:
    std::size_t rows_, cols_;
    std::vector<Rat> a_;
};

inline RatMat operator*(const RatMat& a, const RatMat& b) {
    assert(a.cols() == b.rows());
    RatMat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rat& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline RatVec operator*(const RatMat& a, const RatVec& v) {
    assert(a.cols() == v.size());
    RatVec out(a.rows(), Rat(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0) out[i] += a(i, j) * v[j];
    return out;
}

inline RatMat operator+(const RatMat& a, const RatMat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    RatMat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

inline RatMat operator-(const RatMat& a, const RatMat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    RatMat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

/// Reduced row echelon form in place.  Returns the pivot columns in order.
inline std::vector<std::size_t> rref(RatMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        Rat inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(RatMat m) { return rref(m).size(); }

/// Basis of { x : A x = 0 } in reduced echelon convention: one vector per
/// free column f, with entry 1 at f and the negated pivot-row entries above.
inline std::vector<RatVec> kernel_basis(RatMat a) {
    std::vector<std::size_t> pivots = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(a.cols(), Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/**
 * Cokernel of the column space of A inside Q^rows: a complement spanned by
 * the free coordinates of rref(A^T).  `proj` kills Im(A) and reads off the
 * complement coordinates; `sect` embeds them back, with proj*sect = id.
 */
struct Cokernel {
    RatMat proj;  // dim x rows(A)
    RatMat sect;  // rows(A) x dim
    std::size_t dim = 0;
};

inline Cokernel cokernel_basis(const RatMat& a) {
    RatMat rt = a.transpose();
    std::vector<std::size_t> pivots = rref(rt);
    std::vector<bool> is_pivot(a.rows(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < a.rows(); ++j)
        if (!is_pivot[j]) free.push_back(j);

    Cokernel ck;
    ck.dim = free.size();
    ck.proj = RatMat(ck.dim, a.rows());
    ck.sect = RatMat(a.rows(), ck.dim);
    for (std::size_t d = 0; d < ck.dim; ++d) {
        ck.proj(d, free[d]) = 1;
        ck.sect(free[d], d) = 1;
    }
    // proj(v) reads the free coordinates of v reduced by the echelon rows,
    // i.e. v - sum_i v[p_i] * row_i, which is supported on the free slots.
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t d = 0; d < ck.dim; ++d) ck.proj(d, pivots[i]) = -rt(i, free[d]);
    return ck;
}

struct Infeasible : std::runtime_error {
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Solves A x = b column by column with a per-column support mask: for
 * column j of b, x may be nonzero only in rows c with support_mask[j][c]
 * set.  The particular solution is the echelon one (free variables zero).
 * Throws Infeasible naming the first bad column.
 */
inline RatMat solve_particular(const RatMat& a, const RatMat& b,
                               const std::vector<std::vector<bool>>* support_mask = nullptr) {
    assert(a.rows() == b.rows());
    assert(!support_mask || support_mask->size() == b.cols());
    RatMat x(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        if (support_mask) assert((*support_mask)[j].size() == a.cols());
        std::vector<std::size_t> allowed;
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (!support_mask || (*support_mask)[j][c]) allowed.push_back(c);
        RatMat aug(a.rows(), allowed.size() + 1);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t c = 0; c < allowed.size(); ++c) aug(i, c) = a(i, allowed[c]);
            aug(i, allowed.size()) = b(i, j);
        }
        std::vector<std::size_t> pivots = rref(aug);
        if (!pivots.empty() && pivots.back() == allowed.size())
            throw Infeasible("no solution for column " + std::to_string(j));
        for (std::size_t i = 0; i < pivots.size(); ++i) x(allowed[pivots[i]], j) = aug(i, allowed.size());
    }
    return x;
}

/// Exact inverse of a square matrix of full rank.
inline RatMat inverse(const RatMat& a) {
    assert(a.rows() == a.cols());
    RatMat x = solve_particular(a, RatMat::identity(a.rows()));
    assert(a * x == RatMat::identity(a.rows()));
    return x;
}

/// Determinant by plain rational elimination; matrices here are tiny.
inline Rat determinant(RatMat m) {
    assert(m.rows() == m.cols());
    Rat det = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        std::size_t p = c;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        Rat inv = 1 / m(c, c);
        for (std::size_t i = c + 1; i < m.rows(); ++i) {
            if (m(i, c) == 0) continue;
            Rat f = m(i, c) * inv;
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

}  // namespace strata

#endif
