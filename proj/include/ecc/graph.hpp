#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "ecc/rng.hpp"

namespace ecc {

// Simple d-regular graph on nodes 1..n. Edge IDs are 1-based positions in the
// edge list; the list order is meaningful (the code construction sweeps it).
struct RegularGraph {
    int n = 0;
    int d = 0;
    std::vector<std::pair<int, int>> edges;        // 1-indexed endpoints
    std::vector<std::vector<int>> incident_edges;  // node -> edge ids, edge-list order
    std::vector<std::vector<int>> adj;             // node -> neighbors, edge-list order

    int edge_count() const { return int(edges.size()); }

    int other_end(int edge_id, int v) const {
        const auto& e = edges[std::size_t(edge_id - 1)];
        return e.first == v ? e.second : e.first;
    }

    void build_incidence() {
        incident_edges.assign(std::size_t(n) + 1, {});
        adj.assign(std::size_t(n) + 1, {});
        for (int id = 1; id <= edge_count(); ++id) {
            auto [u, v] = edges[std::size_t(id - 1)];
            incident_edges[std::size_t(u)].push_back(id);
            incident_edges[std::size_t(v)].push_back(id);
            adj[std::size_t(u)].push_back(v);
            adj[std::size_t(v)].push_back(u);
        }
    }

    void validate() const {
        if (n <= 0 || d <= 0) throw std::invalid_argument("RegularGraph: empty graph");
        if (2 * edge_count() != n * d)
            throw std::invalid_argument("RegularGraph: edge count does not match degree");
        std::vector<int> deg(std::size_t(n) + 1, 0);
        std::unordered_set<std::int64_t> seen;
        for (auto [u, v] : edges) {
            if (u < 1 || u > n || v < 1 || v > n)
                throw std::invalid_argument("RegularGraph: endpoint out of range");
            if (u == v) throw std::invalid_argument("RegularGraph: self-loop");
            std::int64_t key = std::int64_t(std::min(u, v)) * (n + 1) + std::max(u, v);
            if (!seen.insert(key).second) throw std::invalid_argument("RegularGraph: parallel edge");
            ++deg[std::size_t(u)];
            ++deg[std::size_t(v)];
        }
        for (int v = 1; v <= n; ++v)
            if (deg[std::size_t(v)] != d)
                throw std::invalid_argument("RegularGraph: node " + std::to_string(v) + " has degree " +
                                            std::to_string(deg[std::size_t(v)]));
    }

    // Text format: "n d" header, then one "u v" line per edge (1-indexed).
    void write(std::ostream& os) const {
        os << n << ' ' << d << '\n';
        for (auto [u, v] : edges) os << u << ' ' << v << '\n';
    }

    static RegularGraph read(std::istream& is) {
        RegularGraph g;
        if (!(is >> g.n >> g.d)) throw std::invalid_argument("RegularGraph: bad header");
        const long long ecount = (long long)g.n * g.d / 2;
        for (long long i = 0; i < ecount; ++i) {
            int u = 0, v = 0;
            if (!(is >> u >> v))
                throw std::invalid_argument("RegularGraph: expected " + std::to_string(ecount) + " edges");
            g.edges.emplace_back(u, v);
        }
        g.validate();
        g.build_incidence();
        return g;
    }

    static RegularGraph parse(const std::string& text) {
        std::istringstream is(text);
        return read(is);
    }
};

namespace detail {

// Configuration-model pairing: pair up node stubs at random, restart whenever
// the result has a loop or a parallel edge. Conditioned on acceptance this is
// exactly uniform over simple d-regular graphs. The acceptance probability
// decays like exp(-lambda - lambda^2) with lambda = (d-1)/2, so restarts are
// cheap only for small d.
template <class URBG>
bool pairing_attempt(int n, int d, URBG& rng, RegularGraph& out) {
    std::vector<int> stubs;
    stubs.reserve(std::size_t(n) * std::size_t(d));
    for (int v = 1; v <= n; ++v)
        for (int i = 0; i < d; ++i) stubs.push_back(v);
    shuffle_vec(stubs, rng);
    std::unordered_set<std::int64_t> seen;
    out.edges.clear();
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
        int u = stubs[i], v = stubs[i + 1];
        if (u == v) return false;
        std::int64_t key = std::int64_t(std::min(u, v)) * (n + 1) + std::max(u, v);
        if (!seen.insert(key).second) return false;
        out.edges.emplace_back(u, v);
    }
    return true;
}

// Degree-aware pairing: only commit suitable stub pairs (no loop, no repeat),
// restart on the rare dead end. Asymptotically uniform; used where plain
// rejection would restart astronomically often.
template <class URBG>
bool selective_pairing_attempt(int n, int d, URBG& rng, RegularGraph& out) {
    std::vector<int> stubs;
    stubs.reserve(std::size_t(n) * std::size_t(d));
    for (int v = 1; v <= n; ++v)
        for (int i = 0; i < d; ++i) stubs.push_back(v);
    std::unordered_set<std::int64_t> seen;
    out.edges.clear();
    long long consecutive_failures = 0;
    while (stubs.size() >= 2) {
        std::size_t i = std::size_t(uniform_below(rng, stubs.size()));
        std::size_t j = std::size_t(uniform_below(rng, stubs.size() - 1));
        if (j >= i) ++j;
        int u = stubs[i], v = stubs[j];
        std::int64_t key = std::int64_t(std::min(u, v)) * (n + 1) + std::max(u, v);
        if (u == v || seen.count(key)) {
            if (++consecutive_failures > 200000) return false;
            continue;
        }
        consecutive_failures = 0;
        seen.insert(key);
        out.edges.emplace_back(u, v);
        if (i < j) std::swap(i, j); // remove the larger index first
        stubs[i] = stubs.back();
        stubs.pop_back();
        stubs[j] = stubs.back();
        stubs.pop_back();
    }
    return true;
}

} // namespace detail

// Random d-regular simple graph, uniform (d <= 5, plain rejection) or
// asymptotically uniform (larger d, selective pairing).
template <class URBG>
RegularGraph random_regular_graph(int n, int d, URBG& rng) {
    if (d < 1) throw std::invalid_argument("random_regular_graph: degree must be positive");
    if (n <= d) throw std::invalid_argument("random_regular_graph: need n > d");
    if ((std::int64_t(n) * d) % 2 != 0)
        throw std::invalid_argument("random_regular_graph: n*d must be even");
    RegularGraph g;
    g.n = n;
    g.d = d;
    const long long max_restarts = 2000000;
    for (long long attempt = 0; attempt < max_restarts; ++attempt) {
        bool ok = (d <= 5) ? detail::pairing_attempt(n, d, rng, g)
                           : detail::selective_pairing_attempt(n, d, rng, g);
        if (ok) {
            g.build_incidence();
            return g;
        }
    }
    throw std::runtime_error("random_regular_graph: restart cap exceeded");
}

// l = floor(log_{d-1}(n) / 3), computed in integers: the largest l with
// (d-1)^{3l} <= n.
inline int l_radius(long long n, int d) {
    if (d < 3 || n < d + 1) throw std::invalid_argument("l_radius: need n >= d+1 >= 4");
    const long long base = d - 1;
    int l = 0;
    unsigned __int128 p = 1;
    for (;;) {
        bool overflow = false;
        unsigned __int128 next = p;
        for (int i = 0; i < 3; ++i) {
            next *= (unsigned __int128)base;
            if (next > (unsigned __int128)n) { overflow = true; break; }
        }
        if (overflow) break;
        p = next;
        ++l;
    }
    return l;
}

// Per-node tree/non-tree flags for radius-l neighborhoods, plus exact counts
// of short cycles.
struct NeighborhoodReport {
    int l = 0;
    std::vector<char> is_tree;            // index 1..n
    long long tree_count = 0;             // T
    std::vector<long long> cycle_count;   // index r = 3 .. 2l+1 (shorter indices unused)

    long long cycles(int r) const {
        if (r < 3 || r >= int(cycle_count.size())) return 0;
        return cycle_count[std::size_t(r)];
    }
};

namespace detail {

// Counts simple cycles of length <= rmax once each: DFS paths that start and
// end at the cycle's smallest node, all other nodes larger; each cycle is
// found in both directions, hence the final halving.
inline void count_cycles(const RegularGraph& g, int rmax, std::vector<long long>& twice) {
    std::vector<char> in_path(std::size_t(g.n) + 1, 0);
    std::vector<int> path;
    for (int s = 1; s <= g.n; ++s) {
        in_path[std::size_t(s)] = 1;
        path.assign(1, s);
        // iterative DFS with explicit stack of (node, next-neighbor-index)
        std::vector<std::pair<int, std::size_t>> stack;
        stack.emplace_back(s, 0);
        while (!stack.empty()) {
            auto& [u, idx] = stack.back();
            const auto& nb = g.adj[std::size_t(u)];
            if (idx >= nb.size()) {
                stack.pop_back();
                in_path[std::size_t(u)] = 0;
                path.pop_back();
                continue;
            }
            int w = nb[idx++];
            int len = int(path.size()); // edges used if we step to w
            if (w == s && len >= 3) {
                ++twice[std::size_t(len)];
                continue;
            }
            if (w > s && !in_path[std::size_t(w)] && len < rmax) {
                in_path[std::size_t(w)] = 1;
                path.push_back(w);
                stack.emplace_back(w, 0);
            }
        }
        in_path[std::size_t(s)] = 0;
    }
}

} // namespace detail

// BFS ball of radius l around every node; the induced neighborhood is a tree
// iff its edge count is node count minus one. Cycle counts cover all lengths
// that can spoil such a neighborhood (r <= 2l+1).
inline NeighborhoodReport neighborhood_census(const RegularGraph& g, int l) {
    if (l < 0) throw std::invalid_argument("neighborhood_census: negative radius");
    NeighborhoodReport rep;
    rep.l = l;
    rep.is_tree.assign(std::size_t(g.n) + 1, 0);
    std::vector<int> dist(std::size_t(g.n) + 1, -1);
    std::vector<int> ball;
    for (int v = 1; v <= g.n; ++v) {
        ball.clear();
        ball.push_back(v);
        dist[std::size_t(v)] = 0;
        for (std::size_t head = 0; head < ball.size(); ++head) {
            int u = ball[head];
            if (dist[std::size_t(u)] == l) continue;
            for (int w : g.adj[std::size_t(u)]) {
                if (dist[std::size_t(w)] < 0) {
                    dist[std::size_t(w)] = dist[std::size_t(u)] + 1;
                    ball.push_back(w);
                }
            }
        }
        long long induced_edges = 0;
        for (int u : ball)
            for (int w : g.adj[std::size_t(u)])
                if (dist[std::size_t(w)] >= 0) ++induced_edges;
        induced_edges /= 2;
        rep.is_tree[std::size_t(v)] = (induced_edges == (long long)ball.size() - 1) ? 1 : 0;
        rep.tree_count += rep.is_tree[std::size_t(v)];
        for (int u : ball) dist[std::size_t(u)] = -1;
    }
    const int rmax = 2 * l + 1;
    std::vector<long long> twice(std::size_t(std::max(rmax + 1, 4)), 0);
    if (rmax >= 3) detail::count_cycles(g, rmax, twice);
    rep.cycle_count.assign(twice.size(), 0);
    for (std::size_t r = 3; r < twice.size(); ++r) rep.cycle_count[r] = twice[r] / 2;
    return rep;
}

} // namespace ecc
