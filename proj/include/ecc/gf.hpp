#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecc {

// Field element of GF(2^e), e <= 8, stored as the bit pattern of the
// representing polynomial.
using gf_t = std::uint8_t;

// One fixed irreducible reduction polynomial per extension degree so results
// reproduce across runs. Bit k is the coefficient of x^k; the x^e bit is set.
// Degree 8 uses x^8 + x^4 + x^3 + x + 1.
inline constexpr std::array<std::uint16_t, 9> kReductionPoly = {
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B};

// Table-driven arithmetic over GF(2^e). Addition is XOR (characteristic 2);
// multiplication and inversion go through precomputed tables. Immutable after
// construction, safe to share across threads.
class GaloisField {
public:
    explicit GaloisField(int e) : e_(e) {
        if (e < 1 || e > 8) throw std::invalid_argument("GaloisField: extension degree must be in [1,8]");
        q_ = 1 << e;
        poly_ = kReductionPoly[std::size_t(e)];
        mul_.assign(std::size_t(q_) * std::size_t(q_), 0);
        inv_.assign(std::size_t(q_), 0);
        for (int a = 0; a < q_; ++a) {
            for (int b = a; b < q_; ++b) {
                gf_t p = mul_slow(unsigned(a), unsigned(b));
                mul_[std::size_t(a) * q_ + b] = p;
                mul_[std::size_t(b) * q_ + a] = p;
                if (p == 1) {
                    inv_[std::size_t(a)] = gf_t(b);
                    inv_[std::size_t(b)] = gf_t(a);
                }
            }
        }
        for (int a = 1; a < q_; ++a) {
            if (inv_[std::size_t(a)] == 0)
                throw std::logic_error("GaloisField: reduction polynomial is not irreducible");
        }
    }

    int e() const { return e_; }
    int q() const { return q_; }

    gf_t add(gf_t a, gf_t b) const { return a ^ b; }
    gf_t sub(gf_t a, gf_t b) const { return a ^ b; }
    gf_t mul(gf_t a, gf_t b) const { return mul_[std::size_t(a) * q_ + b]; }
    gf_t inv(gf_t a) const {
        if (a == 0) throw std::domain_error("GaloisField: inverse of zero");
        return inv_[a];
    }
    gf_t div(gf_t a, gf_t b) const { return mul(a, inv(b)); }

    // Cached field instances, one per extension degree.
    static const GaloisField& of_degree(int e) {
        static const std::array<GaloisField, 8> fields = {
            GaloisField(1), GaloisField(2), GaloisField(3), GaloisField(4),
            GaloisField(5), GaloisField(6), GaloisField(7), GaloisField(8)};
        if (e < 1 || e > 8) throw std::invalid_argument("GaloisField: extension degree must be in [1,8]");
        return fields[std::size_t(e - 1)];
    }

    static const GaloisField& of_size(int q) {
        for (int e = 1; e <= 8; ++e)
            if ((1 << e) == q) return of_degree(e);
        throw std::invalid_argument("GaloisField: field size must be 2^e with e in [1,8], got " + std::to_string(q));
    }

private:
    // Shift-and-add polynomial multiplication mod the reduction polynomial.
    gf_t mul_slow(unsigned a, unsigned b) const {
        unsigned p = 0;
        while (b) {
            if (b & 1u) p ^= a;
            a <<= 1;
            if (a & (1u << e_)) a ^= poly_;
            b >>= 1;
        }
        return gf_t(p);
    }

    int e_;
    int q_;
    std::uint16_t poly_;
    std::vector<gf_t> mul_;
    std::vector<gf_t> inv_;
};

} // namespace ecc
