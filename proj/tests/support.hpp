#pragma once

// Shared test oracles. Everything here recomputes quantities from first
// principles (enumeration, brute-force polynomial arithmetic, span sets) so it
// stays independent of the library code paths it is used to check.

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "ecc/gf.hpp"
#include "ecc/matrix.hpp"
#include "ecc/rational.hpp"

namespace testsupport {

// Polynomial product mod the reduction polynomial, done the long way: full
// carry-less multiply into a word, then reduction by explicit long division.
inline unsigned gf_mul_oracle(unsigned a, unsigned b, unsigned poly, int e) {
    unsigned prod = 0;
    for (int i = 0; i < e; ++i)
        if (b & (1u << i)) prod ^= a << i;
    for (int bit = 2 * e - 2; bit >= e; --bit)
        if (prod & (1u << bit)) prod ^= poly << (bit - e);
    return prod;
}

// Base-q odometer over all rows x cols matrices. Returns false after the last.
inline bool next_matrix(ecc::FieldMatrix& M, int q) {
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) {
            if (M(i, j) + 1 < q) {
                M(i, j) = ecc::gf_t(M(i, j) + 1);
                return true;
            }
            M(i, j) = 0;
        }
    return false;
}

inline std::uint64_t encode_vector(const std::vector<ecc::gf_t>& v, int q) {
    std::uint64_t key = 0;
    for (ecc::gf_t x : v) key = key * std::uint64_t(q) + x;
    return key;
}

// All q^cols column combinations of M, encoded. The size of this set is
// q^rank, which makes it an enumeration oracle for the rank.
inline std::set<std::uint64_t> span_set(const ecc::FieldMatrix& M, const ecc::GaloisField& gf) {
    std::set<std::uint64_t> out;
    const int q = gf.q();
    std::vector<ecc::gf_t> coeff(std::size_t(M.cols()), 0);
    for (;;) {
        std::vector<ecc::gf_t> v(std::size_t(M.rows()), 0);
        for (int c = 0; c < M.cols(); ++c) {
            ecc::gf_t f = coeff[std::size_t(c)];
            if (!f) continue;
            for (int r = 0; r < M.rows(); ++r) v[std::size_t(r)] ^= gf.mul(f, M(r, c));
        }
        out.insert(encode_vector(v, q));
        int pos = 0;
        while (pos < M.cols()) {
            if (coeff[std::size_t(pos)] + 1 < q) {
                coeff[std::size_t(pos)] = ecc::gf_t(coeff[std::size_t(pos)] + 1);
                break;
            }
            coeff[std::size_t(pos)] = 0;
            ++pos;
        }
        if (pos == M.cols()) break;
    }
    return out;
}

inline int rank_oracle(const ecc::FieldMatrix& M, const ecc::GaloisField& gf) {
    std::size_t size = span_set(M, gf).size();
    int r = 0;
    std::size_t p = 1;
    while (p < size) {
        p *= std::size_t(gf.q());
        ++r;
    }
    return r;
}

// One representative basis matrix (m x r) per r-dimensional subspace of
// F_q^m, deduplicated by the full span set.
inline std::vector<ecc::FieldMatrix> enumerate_subspaces(int m, int r, const ecc::GaloisField& gf) {
    std::map<std::set<std::uint64_t>, ecc::FieldMatrix> reps;
    if (r == 0) {
        reps[span_set(ecc::FieldMatrix(m, 0), gf)] = ecc::FieldMatrix(m, 0);
    } else {
        ecc::FieldMatrix M(m, r);
        do {
            std::set<std::uint64_t> s = span_set(M, gf);
            std::size_t full = 1;
            for (int i = 0; i < r; ++i) full *= std::size_t(gf.q());
            if (s.size() != full) continue; // not full column rank
            if (!reps.count(s)) reps[s] = M;
        } while (next_matrix(M, gf.q()));
    }
    std::vector<ecc::FieldMatrix> out;
    out.reserve(reps.size());
    for (auto& [key, rep] : reps) out.push_back(rep);
    return out;
}

// Exact decodability probability by subspace enumeration: for the rank law t
// (exact), average the indicator rank([B_U D]) = m over all i-dimensional
// column spaces U, with D the first w unit columns.
inline ecc::Rational beta_oracle(int w, const std::vector<ecc::Rational>& t, const ecc::GaloisField& gf) {
    const int m = int(t.size()) - 1;
    ecc::FieldMatrix D(m, w);
    for (int i = 0; i < w; ++i) D(i, i) = 1;
    ecc::Rational acc(0);
    for (int i = 0; i <= m; ++i) {
        if (t[std::size_t(i)] == ecc::Rational(0)) continue;
        auto reps = enumerate_subspaces(m, i, gf);
        long long good = 0;
        for (const auto& U : reps)
            if (ecc::rank(ecc::hstack(U, D), gf) == m) ++good;
        acc += t[std::size_t(i)] * ecc::Rational(good, (long long)reps.size());
    }
    return acc;
}

} // namespace testsupport
