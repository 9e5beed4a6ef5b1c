#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecc/graph.hpp"
#include "ecc/rng.hpp"

namespace ecc {

enum class CodeKind { ec, disjoint, h2t, rac };

inline std::string code_kind_name(CodeKind k) {
    switch (k) {
        case CodeKind::ec: return "ec";
        case CodeKind::disjoint: return "disjoint";
        case CodeKind::h2t: return "h2t";
        case CodeKind::rac: return "rac";
    }
    throw std::logic_error("code_kind_name: bad kind");
}

inline CodeKind code_kind_from_name(const std::string& s) {
    if (s == "ec") return CodeKind::ec;
    if (s == "disjoint") return CodeKind::disjoint;
    if (s == "h2t") return CodeKind::h2t;
    if (s == "rac") return CodeKind::rac;
    throw std::invalid_argument("unknown code kind '" + s + "'");
}

// n chunks of m packet indices each, indices in 1..k, stored sorted.
struct ChunkedCode {
    CodeKind kind = CodeKind::disjoint;
    int k = 0;
    int n = 0;
    int m = 0;
    std::vector<std::vector<int>> chunks;

    // packet index -> list of (chunk id 1..n, position 1..m within the chunk)
    std::vector<std::vector<std::pair<int, int>>> packet_occurrences() const {
        std::vector<std::vector<std::pair<int, int>>> occ(std::size_t(k) + 1);
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < m; ++p)
                occ[std::size_t(chunks[std::size_t(j)][std::size_t(p)])].emplace_back(j + 1, p + 1);
        return occ;
    }

    // Text format: "kind k n m" header, then one line of m indices per chunk.
    void write(std::ostream& os) const {
        os << code_kind_name(kind) << ' ' << k << ' ' << n << ' ' << m << '\n';
        for (const auto& c : chunks) {
            for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
            os << '\n';
        }
    }

    static ChunkedCode read(std::istream& is) {
        ChunkedCode code;
        std::string kind;
        if (!(is >> kind >> code.k >> code.n >> code.m))
            throw std::invalid_argument("ChunkedCode: bad header");
        code.kind = code_kind_from_name(kind);
        code.chunks.assign(std::size_t(code.n), {});
        for (int j = 0; j < code.n; ++j) {
            auto& c = code.chunks[std::size_t(j)];
            c.resize(std::size_t(code.m));
            for (int p = 0; p < code.m; ++p) {
                if (!(is >> c[std::size_t(p)]) || c[std::size_t(p)] < 1 || c[std::size_t(p)] > code.k)
                    throw std::invalid_argument("ChunkedCode: bad index in chunk " + std::to_string(j + 1));
            }
            std::sort(c.begin(), c.end());
            if (std::adjacent_find(c.begin(), c.end()) != c.end())
                throw std::invalid_argument("ChunkedCode: duplicate index in chunk " + std::to_string(j + 1));
        }
        return code;
    }

    static ChunkedCode parse(const std::string& text) {
        std::istringstream is(text);
        return read(is);
    }
};

// Chunked code generated by a regular graph: one chunk per node, adjacent
// chunks share the packet labelling their common edge.
struct EcCode : ChunkedCode {
    RegularGraph generator;
    std::vector<int> edge_packet;                 // edge id -> shared packet index
    std::vector<std::vector<int>> private_packets; // node -> its non-shared packets
};

// Graph-generated code with causal index labelling: sweeping nodes 1..n, each
// node first takes its m-d private indices, then its still-unlabelled edges
// take the following indices in edge-list order. This guarantees
// max(I_v) <= m*v, so chunk v only needs the first m*v input packets.
inline EcCode construct_ec(const RegularGraph& g, int m) {
    if (g.d > m) throw std::invalid_argument("construct_ec: degree exceeds chunk size");
    EcCode code;
    code.kind = CodeKind::ec;
    code.generator = g;
    if (code.generator.incident_edges.empty()) code.generator.build_incidence();
    code.n = g.n;
    code.m = m;
    code.k = g.n * m - g.edge_count(); // n(m - d/2)
    code.edge_packet.assign(std::size_t(g.edge_count()) + 1, 0);
    code.private_packets.assign(std::size_t(g.n) + 1, {});
    int next = 1;
    for (int v = 1; v <= g.n; ++v) {
        auto& priv = code.private_packets[std::size_t(v)];
        for (int i = 0; i < m - g.d; ++i) priv.push_back(next++);
        for (int eid : code.generator.incident_edges[std::size_t(v)])
            if (code.edge_packet[std::size_t(eid)] == 0) code.edge_packet[std::size_t(eid)] = next++;
    }
    code.chunks.assign(std::size_t(g.n), {});
    for (int v = 1; v <= g.n; ++v) {
        auto& c = code.chunks[std::size_t(v - 1)];
        c = code.private_packets[std::size_t(v)];
        for (int eid : code.generator.incident_edges[std::size_t(v)])
            c.push_back(code.edge_packet[std::size_t(eid)]);
        std::sort(c.begin(), c.end());
    }
    return code;
}

// k/m disjoint chunks of consecutive indices.
inline ChunkedCode construct_disjoint(int k, int m) {
    if (m <= 0 || k <= 0 || k % m != 0)
        throw std::invalid_argument("construct_disjoint: chunk size must divide packet count");
    ChunkedCode code;
    code.kind = CodeKind::disjoint;
    code.k = k;
    code.m = m;
    code.n = k / m;
    for (int j = 0; j < code.n; ++j) {
        std::vector<int> c(std::size_t(m), 0);
        for (int p = 0; p < m; ++p) c[std::size_t(p)] = j * m + p + 1;
        code.chunks.push_back(std::move(c));
    }
    return code;
}

// Head-to-tail sliding overlap: consecutive chunks share exactly `overlap`
// packets, the last chunk wrapping around to the first.
inline ChunkedCode construct_h2t(int n, int m, int overlap) {
    if (overlap < 0 || overlap >= m) throw std::invalid_argument("construct_h2t: overlap must be in [0,m)");
    if (n < 1) throw std::invalid_argument("construct_h2t: need at least one chunk");
    ChunkedCode code;
    code.kind = CodeKind::h2t;
    code.n = n;
    code.m = m;
    code.k = n * (m - overlap);
    if (code.k < m)
        throw std::invalid_argument("construct_h2t: too few packets for a full wrap-around chunk");
    for (int j = 0; j < n; ++j) {
        std::vector<int> c(std::size_t(m), 0);
        for (int p = 0; p < m; ++p) c[std::size_t(p)] = (j * (m - overlap) + p) % code.k + 1;
        std::sort(c.begin(), c.end());
        code.chunks.push_back(std::move(c));
    }
    return code;
}

// Random annex: disjoint bases of size m-annex, each chunk annexing `annex`
// packets drawn without replacement from the other chunks' bases.
template <class URBG>
ChunkedCode construct_rac(int n, int base_size, int annex, URBG& rng) {
    if (base_size <= 0 || annex < 0) throw std::invalid_argument("construct_rac: bad sizes");
    ChunkedCode code;
    code.kind = CodeKind::rac;
    code.n = n;
    code.m = base_size + annex;
    code.k = n * base_size;
    if (annex > code.k - base_size)
        throw std::invalid_argument("construct_rac: annex larger than the pool of other chunks' packets");
    for (int j = 0; j < n; ++j) {
        std::vector<int> c(std::size_t(base_size), 0);
        for (int p = 0; p < base_size; ++p) c[std::size_t(p)] = j * base_size + p + 1;
        // partial Fisher-Yates over the packets outside this chunk's base
        std::vector<int> pool;
        pool.reserve(std::size_t(code.k - base_size));
        for (int i = 1; i <= code.k; ++i)
            if (i <= j * base_size || i > (j + 1) * base_size) pool.push_back(i);
        for (int t = 0; t < annex; ++t) {
            std::size_t r = std::size_t(t) + std::size_t(uniform_below(rng, pool.size() - std::size_t(t)));
            std::swap(pool[std::size_t(t)], pool[r]);
            c.push_back(pool[std::size_t(t)]);
        }
        std::sort(c.begin(), c.end());
        code.chunks.push_back(std::move(c));
    }
    return code;
}

} // namespace ecc
