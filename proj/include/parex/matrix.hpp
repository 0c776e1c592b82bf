#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "parex/rational.hpp"

namespace parex {

// Dense matrix over Q. A QMat with r rows and c cols represents a linear map
// Q^c -> Q^r; composition is matrix product.
class QMat {
public:
    QMat() : rows_(0), cols_(0) {}
    QMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static QMat identity(size_t n) {
        QMat m(n, n);
        for (size_t i = 0; i < n; i++) m(i, i) = 1;
        return m;
    }
    static QMat zero(size_t rows, size_t cols) { return QMat(rows, cols); }

    static QMat from_rows(std::initializer_list<std::initializer_list<Rational>> rows) {
        size_t r = rows.size();
        size_t c = r ? rows.begin()->size() : 0;
        QMat m(r, c);
        size_t i = 0;
        for (const auto& row : rows) {
            assert(row.size() == c);
            size_t j = 0;
            for (const auto& v : row) m(i, j++) = v;
            i++;
        }
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Rational& operator()(size_t i, size_t j) {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }
    const Rational& operator()(size_t i, size_t j) const {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }

    bool operator==(const QMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const QMat& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : a_) if (x != 0) return false;
        return true;
    }

    QMat operator*(const QMat& rhs) const {
        assert(cols_ == rhs.rows_);
        QMat out(rows_, rhs.cols_);
        for (size_t i = 0; i < rows_; i++)
            for (size_t k = 0; k < cols_; k++) {
                const Rational& x = (*this)(i, k);
                if (x == 0) continue;
                for (size_t j = 0; j < rhs.cols_; j++) {
                    const Rational& y = rhs(k, j);
                    if (y != 0) out(i, j) += x * y;
                }
            }
        return out;
    }

    QMat operator+(const QMat& rhs) const {
        assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
        QMat out = *this;
        for (size_t i = 0; i < a_.size(); i++) out.a_[i] += rhs.a_[i];
        return out;
    }

    QMat operator-(const QMat& rhs) const {
        assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
        QMat out = *this;
        for (size_t i = 0; i < a_.size(); i++) out.a_[i] -= rhs.a_[i];
        return out;
    }

    QMat operator-() const {
        QMat out = *this;
        for (auto& x : out.a_) x = -x;
        return out;
    }

    QMat scaled(const Rational& c) const {
        QMat out = *this;
        for (auto& x : out.a_) x *= c;
        return out;
    }

    QMat transposed() const {
        QMat out(cols_, rows_);
        for (size_t i = 0; i < rows_; i++)
            for (size_t j = 0; j < cols_; j++) out(j, i) = (*this)(i, j);
        return out;
    }

    // [this | rhs]
    QMat hstack(const QMat& rhs) const {
        assert(rows_ == rhs.rows_);
        QMat out(rows_, cols_ + rhs.cols_);
        for (size_t i = 0; i < rows_; i++) {
            for (size_t j = 0; j < cols_; j++) out(i, j) = (*this)(i, j);
            for (size_t j = 0; j < rhs.cols_; j++) out(i, cols_ + j) = rhs(i, j);
        }
        return out;
    }

    QMat vstack(const QMat& bot) const {
        assert(cols_ == bot.cols_);
        QMat out(rows_ + bot.rows_, cols_);
        for (size_t i = 0; i < rows_; i++)
            for (size_t j = 0; j < cols_; j++) out(i, j) = (*this)(i, j);
        for (size_t i = 0; i < bot.rows_; i++)
            for (size_t j = 0; j < cols_; j++) out(rows_ + i, j) = bot(i, j);
        return out;
    }

    void set_block(size_t r0, size_t c0, const QMat& b) {
        assert(r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_);
        for (size_t i = 0; i < b.rows_; i++)
            for (size_t j = 0; j < b.cols_; j++) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    QMat block(size_t r0, size_t c0, size_t nr, size_t nc) const {
        assert(r0 + nr <= rows_ && c0 + nc <= cols_);
        QMat out(nr, nc);
        for (size_t i = 0; i < nr; i++)
            for (size_t j = 0; j < nc; j++) out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }

    static QMat block_diag(const QMat& a, const QMat& b) {
        QMat out(a.rows() + b.rows(), a.cols() + b.cols());
        out.set_block(0, 0, a);
        out.set_block(a.rows(), a.cols(), b);
        return out;
    }

    size_t rank() const { return QMat(*this).rref_in_place().size(); }

    // Reduced row echelon form, in place; returns pivot columns.
    std::vector<size_t> rref_in_place() {
        std::vector<size_t> pivots;
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_; c++) {
            size_t p = r;
            while (p < rows_ && (*this)(p, c) == 0) p++;
            if (p == rows_) continue;
            if (p != r)
                for (size_t j = 0; j < cols_; j++) std::swap((*this)(p, j), (*this)(r, j));
            Rational inv = (*this)(r, c);
            for (size_t j = c; j < cols_; j++) (*this)(r, j) /= inv;
            for (size_t i = 0; i < rows_; i++) {
                if (i == r) continue;
                Rational f = (*this)(i, c);
                if (f == 0) continue;
                for (size_t j = c; j < cols_; j++) (*this)(i, j) -= f * (*this)(r, j);
            }
            pivots.push_back(c);
            r++;
        }
        return pivots;
    }

    // Basis of { x : Ax = 0 }, one column per basis vector.
    QMat kernel_basis() const {
        QMat R = *this;
        std::vector<size_t> pivots = R.rref_in_place();
        std::vector<bool> is_pivot(cols_, false);
        for (size_t c : pivots) is_pivot[c] = true;
        std::vector<size_t> free_cols;
        for (size_t c = 0; c < cols_; c++)
            if (!is_pivot[c]) free_cols.push_back(c);
        QMat K(cols_, free_cols.size());
        for (size_t k = 0; k < free_cols.size(); k++) {
            size_t fc = free_cols[k];
            K(fc, k) = 1;
            for (size_t i = 0; i < pivots.size(); i++) K(pivots[i], k) = -R(i, fc);
        }
        return K;
    }

    bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }

    std::optional<QMat> inverse() const {
        if (rows_ != cols_) return std::nullopt;
        QMat aug = hstack(identity(rows_));
        auto piv = aug.rref_in_place();
        if (piv.size() != rows_ || (rows_ > 0 && piv.back() >= rows_)) return std::nullopt;
        return aug.block(0, rows_, rows_, rows_);
    }

    // One solution X of (*this) * X = B, if any.
    std::optional<QMat> solve(const QMat& B) const {
        assert(rows_ == B.rows());
        QMat aug = hstack(B);
        QMat R = aug;
        std::vector<size_t> pivots = R.rref_in_place();
        for (size_t c : pivots)
            if (c >= cols_) return std::nullopt; // inconsistent system
        QMat X(cols_, B.cols());
        for (size_t i = 0; i < pivots.size(); i++)
            for (size_t j = 0; j < B.cols(); j++) X(pivots[i], j) = R(i, cols_ + j);
        return X;
    }

private:
    size_t rows_, cols_;
    std::vector<Rational> a_;
};

inline QMat direct_sum(const std::vector<QMat>& blocks) {
    size_t r = 0, c = 0;
    for (const QMat& b : blocks) r += b.rows(), c += b.cols();
    QMat out(r, c);
    r = c = 0;
    for (const QMat& b : blocks) {
        out.set_block(r, c, b);
        r += b.rows(), c += b.cols();
    }
    return out;
}

inline QMat kron(const QMat& A, const QMat& B) {
    QMat out(A.rows() * B.rows(), A.cols() * B.cols());
    for (size_t i = 0; i < A.rows(); i++)
        for (size_t j = 0; j < A.cols(); j++) {
            const Rational& a = A(i, j);
            if (a == 0) continue;
            for (size_t p = 0; p < B.rows(); p++)
                for (size_t q = 0; q < B.cols(); q++)
                    out(i * B.rows() + p, j * B.cols() + q) = a * B(p, q);
        }
    return out;
}

// Kernel of A with a one-sided inverse: columns of `incl` span ker A and
// `retr * incl == id`.
struct KernelData {
    QMat incl;
    QMat retr;
};

inline KernelData kernel_with_retraction(const QMat& A) {
    KernelData out;
    out.incl = A.kernel_basis();
    // free coordinates of the rref carry an identity block inside incl
    std::vector<size_t> pivots = QMat(A).rref_in_place();
    std::vector<bool> is_pivot(A.cols(), false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<size_t> free_cols;
    for (size_t c = 0; c < A.cols(); c++)
        if (!is_pivot[c]) free_cols.push_back(c);
    out.retr = QMat(free_cols.size(), A.cols());
    for (size_t k = 0; k < free_cols.size(); k++) out.retr(k, free_cols[k]) = 1;
    assert(out.retr * out.incl == QMat::identity(out.incl.cols()));
    return out;
}

// Cokernel of A : Q^m -> Q^n as a projection Q^n -> Q^k with ker proj = im A,
// plus a section with proj * sect == id.
struct CokernelData {
    QMat proj;
    QMat sect;
};

inline CokernelData cokernel_with_section(const QMat& A) {
    size_t n = A.rows();
    CokernelData out;
    // rows of proj = basis of the left null space of A
    out.proj = A.transposed().kernel_basis().transposed();
    assert(out.proj.cols() == n);
    auto solved = out.proj.solve(QMat::identity(out.proj.rows()));
    assert(solved);
    out.sect = *solved;
    assert(out.proj * out.sect == QMat::identity(out.proj.rows()));
    assert((out.proj * A).is_zero());
    return out;
}

} // namespace parex
