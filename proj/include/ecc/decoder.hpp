#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecc/code.hpp"
#include "ecc/gf.hpp"
#include "ecc/matrix.hpp"

namespace ecc {

// Everything the destination holds about one chunk: the m x r transfer matrix
// (full column rank, redundant packets pre-pruned) and, in payload mode, the
// L x r payload matrix with Y = B * T.
struct ChunkTransferRecord {
    int chunk_id = 0; // 1-based
    FieldMatrix T;
    std::optional<FieldMatrix> Y;
};

struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

// Incremental Gauss-Jordan elimination over columns of height m, each with an
// optional payload tail. The basis is kept fully reduced with unit pivots, so
// once the rank reaches m the basis vectors are exactly the unit vectors and
// the payload tails are the solved packet values. Keeping the elimination
// incremental is what holds the decoding cost to O(m^2 + mL) per packet.
class ColumnEliminator {
public:
    ColumnEliminator(int m, int payload_len)
        : m_(m), plen_(payload_len) {
        pivot_row_.assign(std::size_t(m), -1);
    }

    enum class Insert { independent, dependent, inconsistent };

    int rank() const { return int(basis_.size()); }
    bool full() const { return rank() == m_; }
    unsigned long long ops() const { return ops_; }

    // v has m coefficient entries followed by plen payload entries.
    Insert insert(std::vector<gf_t> v, const GaloisField& gf) {
        const std::size_t len = std::size_t(m_ + plen_);
        if (v.size() != len) throw std::invalid_argument("ColumnEliminator: bad column height");
        for (int p = 0; p < m_; ++p) {
            gf_t f = v[std::size_t(p)];
            if (!f) continue;
            int b = pivot_row_[std::size_t(p)];
            if (b < 0) continue;
            const auto& bv = basis_[std::size_t(b)];
            for (std::size_t i = 0; i < len; ++i) v[i] ^= gf.mul(f, bv[i]);
            ops_ += len;
        }
        int lead = -1;
        for (int p = 0; p < m_; ++p)
            if (v[std::size_t(p)]) { lead = p; break; }
        if (lead < 0) {
            for (std::size_t i = std::size_t(m_); i < len; ++i)
                if (v[i]) return Insert::inconsistent;
            return Insert::dependent;
        }
        gf_t s = gf.inv(v[std::size_t(lead)]);
        if (s != 1)
            for (std::size_t i = 0; i < len; ++i) v[i] = gf.mul(s, v[i]);
        ops_ += len;
        for (auto& bv : basis_) {
            gf_t f = bv[std::size_t(lead)];
            if (!f) continue;
            for (std::size_t i = 0; i < len; ++i) bv[i] ^= gf.mul(f, v[i]);
            ops_ += len;
        }
        pivot_row_[std::size_t(lead)] = int(basis_.size());
        basis_.push_back(std::move(v));
        return Insert::independent;
    }

    // Payload tail of the basis vector pivoting at coefficient position p
    // (0-based). Meaningful once full().
    std::vector<gf_t> payload_at(int p) const {
        const auto& bv = basis_[std::size_t(pivot_row_[std::size_t(p)])];
        return std::vector<gf_t>(bv.begin() + m_, bv.end());
    }

private:
    int m_;
    int plen_;
    std::vector<int> pivot_row_;
    std::vector<std::vector<gf_t>> basis_;
    unsigned long long ops_ = 0;
};

// Final state of one BP decoding run. `known` only ever grows during the run;
// decoded chunks are exactly those whose m packets are all known.
struct DecoderState {
    bool payload_mode = false;
    std::vector<char> packet_known;               // index 1..k
    std::vector<std::vector<gf_t>> packet_value;  // payload mode only, index 1..k
    std::vector<char> chunk_decoded;              // index 1..n
    long long recovered = 0;
    int decoded_chunks = 0;
    int iterations = 0;
    unsigned long long field_ops = 0;
};

inline double decode_fraction(const DecoderState& s, int k) {
    return k == 0 ? 0.0 : double(s.recovered) / double(k);
}

// Decodability test with side information: the chunk solves iff [T E_K] has
// full row rank m, where E_K stacks the unit columns of the already-known
// positions (1-based within the chunk).
inline bool is_decodable(const ChunkTransferRecord& rec, const std::vector<int>& known_positions,
                         const GaloisField& gf) {
    const int m = rec.T.rows();
    ColumnEliminator elim(m, 0);
    for (int c = 0; c < rec.T.cols() && !elim.full(); ++c)
        elim.insert(rec.T.column(c), gf);
    for (int pos : known_positions) {
        if (elim.full()) break;
        std::vector<gf_t> e(std::size_t(m), 0);
        e.at(std::size_t(pos - 1)) = 1;
        elim.insert(std::move(e), gf);
    }
    return elim.full();
}

// Iterative peeling: decode every currently decodable chunk, substitute the
// recovered packets into the neighbouring chunks, repeat until no chunk
// becomes decodable. Only chunks touched by fresh packets are re-examined.
// Payload mode solves for the packet values and cross-checks them; rank mode
// tracks recoverability only.
inline DecoderState bp_decode(const ChunkedCode& code, const std::vector<ChunkTransferRecord>& records,
                              const GaloisField& gf) {
    const int n = code.n, m = code.m, k = code.k;
    if (int(records.size()) != n)
        throw std::invalid_argument("bp_decode: need exactly one record per chunk");

    DecoderState st;
    st.payload_mode = !records.empty() && records[0].Y.has_value();
    int plen = 0;
    if (st.payload_mode) plen = records[0].Y->rows();
    st.packet_known.assign(std::size_t(k) + 1, 0);
    if (st.payload_mode) st.packet_value.assign(std::size_t(k) + 1, {});
    st.chunk_decoded.assign(std::size_t(n) + 1, 0);

    std::vector<ColumnEliminator> elim;
    elim.reserve(std::size_t(n));
    std::vector<std::vector<char>> substituted(std::size_t(n) + 1);
    for (int j = 1; j <= n; ++j) {
        const auto& rec = records[std::size_t(j - 1)];
        if (rec.chunk_id != j) throw std::invalid_argument("bp_decode: records must be ordered by chunk id");
        if (rec.T.rows() != m) throw std::invalid_argument("bp_decode: transfer matrix height mismatch");
        if (st.payload_mode != rec.Y.has_value())
            throw std::invalid_argument("bp_decode: mixed payload/rank-only records");
        elim.emplace_back(m, plen);
        auto& e = elim.back();
        for (int c = 0; c < rec.T.cols(); ++c) {
            std::vector<gf_t> col = rec.T.column(c);
            if (st.payload_mode) {
                if (rec.Y->cols() != rec.T.cols())
                    throw std::invalid_argument("bp_decode: payload column count mismatch");
                std::vector<gf_t> y = rec.Y->column(c);
                col.insert(col.end(), y.begin(), y.end());
            }
            if (e.insert(std::move(col), gf) == ColumnEliminator::Insert::inconsistent)
                throw IntegrityError("bp_decode: received payload inconsistent with coefficients in chunk " +
                                     std::to_string(j));
        }
        substituted[std::size_t(j)].assign(std::size_t(m) + 1, 0);
    }

    const auto occ = code.packet_occurrences();

    std::vector<int> frontier(std::size_t(n), 0);
    for (int j = 1; j <= n; ++j) frontier[std::size_t(j - 1)] = j;
    std::vector<char> queued(std::size_t(n) + 1, 0);
    std::vector<int> fresh_packets;

    while (!frontier.empty()) {
        fresh_packets.clear();
        for (int j : frontier) {
            queued[std::size_t(j)] = 0;
            if (st.chunk_decoded[std::size_t(j)] || !elim[std::size_t(j - 1)].full()) continue;
            st.chunk_decoded[std::size_t(j)] = 1;
            ++st.decoded_chunks;
            const auto& chunk = code.chunks[std::size_t(j - 1)];
            for (int pos = 0; pos < m; ++pos) {
                int packet = chunk[std::size_t(pos)];
                if (st.payload_mode) {
                    std::vector<gf_t> value = elim[std::size_t(j - 1)].payload_at(pos);
                    if (st.packet_known[std::size_t(packet)]) {
                        if (st.packet_value[std::size_t(packet)] != value)
                            throw IntegrityError("bp_decode: chunks disagree on packet " + std::to_string(packet));
                        continue;
                    }
                    st.packet_value[std::size_t(packet)] = std::move(value);
                } else if (st.packet_known[std::size_t(packet)]) {
                    continue;
                }
                st.packet_known[std::size_t(packet)] = 1;
                ++st.recovered;
                fresh_packets.push_back(packet);
            }
        }
        if (fresh_packets.empty()) break;
        ++st.iterations;
        frontier.clear();
        for (int packet : fresh_packets) {
            for (auto [j, pos] : occ[std::size_t(packet)]) {
                if (st.chunk_decoded[std::size_t(j)]) continue;
                if (!substituted[std::size_t(j)][std::size_t(pos)]) {
                    substituted[std::size_t(j)][std::size_t(pos)] = 1;
                    std::vector<gf_t> col(std::size_t(m + plen), 0);
                    col[std::size_t(pos - 1)] = 1;
                    if (st.payload_mode) {
                        const auto& val = st.packet_value[std::size_t(packet)];
                        for (int i = 0; i < plen; ++i) col[std::size_t(m + i)] = val[std::size_t(i)];
                    }
                    if (elim[std::size_t(j - 1)].insert(std::move(col), gf) ==
                        ColumnEliminator::Insert::inconsistent)
                        throw IntegrityError("bp_decode: substitution inconsistent in chunk " + std::to_string(j));
                }
                if (!queued[std::size_t(j)]) {
                    queued[std::size_t(j)] = 1;
                    frontier.push_back(j);
                }
            }
        }
    }

    for (const auto& e : elim) st.field_ops += e.ops();
    return st;
}

} // namespace ecc
