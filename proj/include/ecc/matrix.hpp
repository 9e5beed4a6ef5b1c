#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecc/gf.hpp"
#include "ecc/rng.hpp"

namespace ecc {

// Dense row-major matrix over GF(2^e). Sizes stay small (m <= 64 everywhere),
// so no sparse or blocked storage.
class FieldMatrix {
public:
    FieldMatrix() = default;
    FieldMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("FieldMatrix: negative dimension");
        a_.assign(std::size_t(rows) * std::size_t(cols), 0);
    }

    static FieldMatrix identity(int n) {
        FieldMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    gf_t& operator()(int r, int c) { return a_[std::size_t(r) * cols_ + c]; }
    gf_t operator()(int r, int c) const { return a_[std::size_t(r) * cols_ + c]; }

    gf_t* row(int r) { return a_.data() + std::size_t(r) * cols_; }
    const gf_t* row(int r) const { return a_.data() + std::size_t(r) * cols_; }

    std::vector<gf_t> column(int c) const {
        std::vector<gf_t> v(std::size_t(rows_), 0);
        for (int r = 0; r < rows_; ++r) v[std::size_t(r)] = (*this)(r, c);
        return v;
    }

    void set_column(int c, const std::vector<gf_t>& v) {
        for (int r = 0; r < rows_; ++r) (*this)(r, c) = v[std::size_t(r)];
    }

    bool operator==(const FieldMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<gf_t> a_;
};

inline FieldMatrix multiply(const FieldMatrix& A, const FieldMatrix& B, const GaloisField& gf) {
    if (A.cols() != B.rows()) throw std::invalid_argument("multiply: inner dimensions differ");
    FieldMatrix C(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int k = 0; k < A.cols(); ++k) {
            gf_t f = A(i, k);
            if (!f) continue;
            const gf_t* brow = B.row(k);
            gf_t* crow = C.row(i);
            for (int j = 0; j < B.cols(); ++j) crow[j] ^= gf.mul(f, brow[j]);
        }
    }
    return C;
}

inline FieldMatrix transpose(const FieldMatrix& A) {
    FieldMatrix T(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
    return T;
}

inline FieldMatrix hstack(const FieldMatrix& A, const FieldMatrix& B) {
    if (A.rows() != B.rows()) throw std::invalid_argument("hstack: row counts differ");
    FieldMatrix C(A.rows(), A.cols() + B.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) C(i, j) = A(i, j);
        for (int j = 0; j < B.cols(); ++j) C(i, A.cols() + j) = B(i, j);
    }
    return C;
}

// Matrix with i.i.d. uniform entries ("totally random").
template <class URBG>
FieldMatrix random_matrix(int rows, int cols, const GaloisField& gf, URBG& rng) {
    FieldMatrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = gf_t(uniform_below(rng, std::uint64_t(gf.q())));
    return M;
}

// In-place reduced row echelon form. Returns the pivot column indices.
inline std::vector<int> row_reduce(FieldMatrix& M, const GaloisField& gf) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < M.cols() && r < M.rows(); ++c) {
        int p = -1;
        for (int i = r; i < M.rows(); ++i)
            if (M(i, c)) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < M.cols(); ++j) std::swap(M(p, j), M(r, j));
        gf_t s = gf.inv(M(r, c));
        for (int j = c; j < M.cols(); ++j) M(r, j) = gf.mul(s, M(r, j));
        for (int i = 0; i < M.rows(); ++i) {
            if (i == r) continue;
            gf_t f = M(i, c);
            if (!f) continue;
            for (int j = c; j < M.cols(); ++j) M(i, j) ^= gf.mul(f, M(r, j));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline int rank(FieldMatrix M, const GaloisField& gf) {
    return int(row_reduce(M, gf).size());
}

// Inverse of a square matrix; throws if singular.
inline FieldMatrix inverse(const FieldMatrix& A, const GaloisField& gf) {
    if (A.rows() != A.cols()) throw std::invalid_argument("inverse: matrix not square");
    FieldMatrix W = hstack(A, FieldMatrix::identity(A.rows()));
    std::vector<int> piv = row_reduce(W, gf);
    if (int(piv.size()) != A.rows() || (!piv.empty() && piv.back() >= A.rows()))
        throw std::invalid_argument("inverse: matrix is singular");
    FieldMatrix R(A.rows(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.rows(); ++j) R(i, j) = W(i, A.rows() + j);
    return R;
}

// A chunk whose received-coefficient matrix lacks full row rank cannot be
// solved for its packets.
struct NotDecodableError : std::runtime_error {
    explicit NotDecodableError(const std::string& what) : std::runtime_error(what) {}
};

// Solve B * A = Y for B, where A (m x c) has full row rank m. The solution is
// unique; it is read off an invertible m-column submatrix of A.
inline FieldMatrix solve_full_rank(const FieldMatrix& A, const FieldMatrix& Y, const GaloisField& gf) {
    if (A.cols() != Y.cols()) throw std::invalid_argument("solve_full_rank: column counts differ");
    const int m = A.rows();
    FieldMatrix W = A;
    std::vector<int> piv = row_reduce(W, gf);
    if (int(piv.size()) != m)
        throw NotDecodableError("solve_full_rank: coefficient matrix does not have full row rank");
    FieldMatrix As(m, m), Ys(Y.rows(), m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) As(i, j) = A(i, piv[std::size_t(j)]);
        for (int i = 0; i < Y.rows(); ++i) Ys(i, j) = Y(i, piv[std::size_t(j)]);
    }
    return multiply(Ys, inverse(As, gf), gf);
}

// Canonical label of the column space: the nonzero rows of the RREF of M^T,
// serialized. Two matrices get the same label iff their column spaces agree.
inline std::string column_space_signature(const FieldMatrix& M, const GaloisField& gf) {
    FieldMatrix T = transpose(M);
    std::vector<int> piv = row_reduce(T, gf);
    int r = int(piv.size());
    std::string s;
    s.reserve(8 + std::size_t(r) * std::size_t(M.rows()));
    s += std::to_string(M.rows());
    s += ':';
    s += std::to_string(r);
    s += ':';
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < T.cols(); ++j) s += char(T(i, j));
    return s;
}

} // namespace ecc
