#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecc/code.hpp"
#include "ecc/decoder.hpp"
#include "ecc/gf.hpp"
#include "ecc/matrix.hpp"
#include "ecc/rank_model.hpp"
#include "ecc/rng.hpp"

namespace ecc {

enum class SchedulerKind { fixed, randomized };

inline SchedulerKind scheduler_from_name(const std::string& s) {
    if (s == "fixed") return SchedulerKind::fixed;
    if (s == "randomized") return SchedulerKind::randomized;
    throw std::invalid_argument("unknown scheduler '" + s + "'");
}

// Line network of `length` tandem links, each erasing packets independently
// with probability eps. Every node transmits on average mbar packets per
// chunk; chunks move through the network one at a time (store-and-forward).
struct LineNetworkConfig {
    int length = 1;
    double eps = 0.0;
    double mbar = 0.0;
    SchedulerKind scheduler = SchedulerKind::fixed;
    int m = 0;
    int q = 0;

    void validate() const {
        if (length < 1) throw std::invalid_argument("LineNetworkConfig: length must be >= 1");
        if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("LineNetworkConfig: eps outside [0,1]");
        if (!(mbar > 0.0)) throw std::invalid_argument("LineNetworkConfig: mbar must be positive");
        if (m < 1) throw std::invalid_argument("LineNetworkConfig: chunk size must be >= 1");
        GaloisField::of_size(q); // throws on bad field size
    }

    // Plain "key value" lines; '#' starts a comment.
    std::string to_text() const {
        std::ostringstream os;
        os.precision(17);
        os << "length " << length << "\neps " << eps << "\nmbar " << mbar << "\nscheduler "
           << (scheduler == SchedulerKind::fixed ? "fixed" : "randomized") << "\nm " << m << "\nq " << q
           << "\n";
        return os.str();
    }

    static LineNetworkConfig parse(const std::string& text) {
        LineNetworkConfig cfg;
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::string key;
            if (!(ls >> key)) continue;
            bool ok = true;
            if (key == "length") ok = bool(ls >> cfg.length);
            else if (key == "eps") ok = bool(ls >> cfg.eps);
            else if (key == "mbar") ok = bool(ls >> cfg.mbar);
            else if (key == "m") ok = bool(ls >> cfg.m);
            else if (key == "q") ok = bool(ls >> cfg.q);
            else if (key == "scheduler") {
                std::string v;
                ok = bool(ls >> v);
                if (ok) cfg.scheduler = scheduler_from_name(v);
            } else ok = false;
            if (!ok)
                throw std::invalid_argument("LineNetworkConfig: bad entry at line " + std::to_string(lineno));
        }
        cfg.validate();
        return cfg;
    }
};

// Per-node packet-count stream with mean mbar. The fixed scheduler alternates
// floor/ceil deterministically via a fractional accumulator; the randomized
// one draws the two-point mixture fresh per chunk.
class BudgetScheduler {
public:
    BudgetScheduler(SchedulerKind kind, double mbar) : kind_(kind), mbar_(mbar) {}

    template <class URBG>
    int next(URBG& rng) {
        if (kind_ == SchedulerKind::fixed) {
            acc_ += mbar_;
            int send = int(std::floor(acc_ + 1e-9));
            acc_ -= send;
            return send;
        }
        int lo = int(std::floor(mbar_));
        double frac = mbar_ - lo;
        return lo + (bernoulli(rng, frac) ? 1 : 0);
    }

private:
    SchedulerKind kind_;
    double mbar_;
    double acc_ = 0.0;
};

// Optional per-hop instrumentation of one chunk transfer.
struct TransferTrace {
    // stored[v]: the coefficient vectors node v kept (v = 1..length-1);
    // emitted[v]: the coefficient vectors node v sent (v = 0 is the source).
    std::vector<std::vector<std::vector<gf_t>>> stored;
    std::vector<std::vector<std::vector<gf_t>>> emitted;
    std::vector<int> link_survivors;
};

struct ChunkTransferResult {
    FieldMatrix T;       // m x r, full column rank
    FieldMatrix Y;       // payload x r when a payload matrix was supplied
    int source_sent = 0;
};

// One line network: per-node schedulers persist across chunks so the fixed
// scheduler's floor/ceil alternation plays out as documented.
class LineNetwork {
public:
    explicit LineNetwork(const LineNetworkConfig& cfg) : cfg_(cfg), gf_(&GaloisField::of_size(cfg.q)) {
        cfg.validate();
        for (int v = 0; v < cfg.length; ++v) schedulers_.emplace_back(cfg.scheduler, cfg.mbar);
    }

    const LineNetworkConfig& config() const { return cfg_; }
    const GaloisField& field() const { return *gf_; }

    // Moves one chunk from the source to the destination. `payload` is the
    // L x m matrix of the chunk's packets, or null for rank-only simulation.
    // The returned transfer matrix is pruned to linearly independent columns.
    template <class URBG>
    ChunkTransferResult transfer_chunk(URBG& rng, const FieldMatrix* payload = nullptr,
                                       TransferTrace* trace = nullptr) {
        const int m = cfg_.m;
        const int plen = payload ? payload->rows() : 0;
        const std::size_t H = std::size_t(m + plen);
        if (payload && payload->cols() != m)
            throw std::invalid_argument("transfer_chunk: payload matrix must have m columns");
        if (trace) {
            trace->stored.assign(std::size_t(cfg_.length), {});
            trace->emitted.assign(std::size_t(cfg_.length), {});
            trace->link_survivors.assign(std::size_t(cfg_.length), 0);
        }

        // Source: each transmitted packet carries an i.i.d. uniform coefficient
        // vector (a column of a totally random matrix) and the matching payload.
        std::vector<std::vector<gf_t>> in_flight;
        const int source_count = schedulers_[0].next(rng);
        in_flight.reserve(std::size_t(source_count));
        for (int s = 0; s < source_count; ++s) {
            std::vector<gf_t> col(H, 0);
            for (int i = 0; i < m; ++i) col[std::size_t(i)] = gf_t(uniform_below(rng, std::uint64_t(cfg_.q)));
            if (payload)
                for (int r = 0; r < plen; ++r) {
                    gf_t acc = 0;
                    for (int i = 0; i < m; ++i) acc ^= gf_->mul((*payload)(r, i), col[std::size_t(i)]);
                    col[std::size_t(m + r)] = acc;
                }
            in_flight.push_back(std::move(col));
        }
        if (trace)
            for (const auto& c : in_flight)
                trace->emitted[0].emplace_back(c.begin(), c.begin() + m);

        for (int link = 1; link <= cfg_.length; ++link) {
            // independent erasures on this link
            std::vector<std::vector<gf_t>> arrived;
            for (auto& pkt : in_flight)
                if (!bernoulli(rng, cfg_.eps)) arrived.push_back(std::move(pkt));
            if (trace) trace->link_survivors[std::size_t(link - 1)] = int(arrived.size());

            if (link == cfg_.length) {
                // Destination: keep a maximal linearly independent subset.
                ColumnEliminator elim(m, 0);
                std::vector<std::vector<gf_t>> kept;
                for (auto& pkt : arrived) {
                    std::vector<gf_t> coeff(pkt.begin(), pkt.begin() + m);
                    if (elim.insert(std::move(coeff), *gf_) == ColumnEliminator::Insert::independent)
                        kept.push_back(std::move(pkt));
                }
                ChunkTransferResult res;
                res.source_sent = source_count;
                res.T = FieldMatrix(m, int(kept.size()));
                if (payload) res.Y = FieldMatrix(plen, int(kept.size()));
                for (int c = 0; c < int(kept.size()); ++c) {
                    for (int i = 0; i < m; ++i) res.T(i, c) = kept[std::size_t(c)][std::size_t(i)];
                    for (int r = 0; r < plen; ++r) res.Y(r, c) = kept[std::size_t(c)][std::size_t(m + r)];
                }
                return res;
            }

            // Intermediate node: store only arrivals with linearly independent
            // coefficient vectors (at most m of them), then forward fresh
            // uniform recombinations of the stored packets.
            ColumnEliminator elim(m, 0);
            std::vector<std::vector<gf_t>> stored;
            for (auto& pkt : arrived) {
                std::vector<gf_t> coeff(pkt.begin(), pkt.begin() + m);
                if (elim.insert(std::move(coeff), *gf_) == ColumnEliminator::Insert::independent)
                    stored.push_back(std::move(pkt));
            }
            if (trace)
                for (const auto& c : stored)
                    trace->stored[std::size_t(link)].emplace_back(c.begin(), c.begin() + m);

            const int out_count = schedulers_[std::size_t(link)].next(rng);
            in_flight.clear();
            if (!stored.empty()) {
                in_flight.reserve(std::size_t(out_count));
                for (int s = 0; s < out_count; ++s) {
                    std::vector<gf_t> col(H, 0);
                    for (const auto& src : stored) {
                        gf_t phi = gf_t(uniform_below(rng, std::uint64_t(cfg_.q)));
                        if (!phi) continue;
                        for (std::size_t i = 0; i < H; ++i) col[i] ^= gf_->mul(phi, src[i]);
                    }
                    in_flight.push_back(std::move(col));
                }
            }
            if (trace)
                for (const auto& c : in_flight)
                    trace->emitted[std::size_t(link)].emplace_back(c.begin(), c.begin() + m);
        }
        throw std::logic_error("transfer_chunk: unreachable");
    }

private:
    LineNetworkConfig cfg_;
    const GaloisField* gf_;
    std::vector<BudgetScheduler> schedulers_;
};

// One-shot transfer with fresh scheduler state.
template <class URBG>
FieldMatrix simulate_chunk_transfer(const LineNetworkConfig& cfg, URBG& rng) {
    LineNetwork net(cfg);
    return net.transfer_chunk(rng).T;
}

// Empirical rank law over independent chunk transfers; optionally reports the
// per-bin binomial standard errors.
template <class URBG>
RankDistribution estimate_rank_distribution(const LineNetworkConfig& cfg, long trials, URBG& rng,
                                            std::vector<double>* stderr_out = nullptr) {
    if (trials < 1) throw std::invalid_argument("estimate_rank_distribution: need at least one trial");
    LineNetwork net(cfg);
    std::vector<long long> hist(std::size_t(cfg.m) + 1, 0);
    for (long i = 0; i < trials; ++i) ++hist[std::size_t(net.transfer_chunk(rng).T.cols())];
    std::vector<double> t(hist.size());
    for (std::size_t i = 0; i < hist.size(); ++i) t[i] = double(hist[i]) / double(trials);
    if (stderr_out) {
        stderr_out->resize(hist.size());
        for (std::size_t i = 0; i < hist.size(); ++i)
            (*stderr_out)[i] = std::sqrt(t[i] * (1.0 - t[i]) / double(trials));
    }
    return RankDistribution(cfg.m, std::move(t));
}

struct BudgetChoice {
    double mbar = 0.0;
    double tbar = 0.0;
    double bound = 0.0; // tbar / mbar, upper bound on the network transmission rate
};

// Scan a grid of per-chunk budgets and keep the one maximizing tbar / mbar.
template <class URBG>
BudgetChoice optimize_budget(LineNetworkConfig cfg, const std::vector<double>& mbar_grid, long trials,
                             URBG& rng) {
    if (mbar_grid.empty()) throw std::invalid_argument("optimize_budget: empty grid");
    BudgetChoice best;
    bool have = false;
    for (double mbar : mbar_grid) {
        cfg.mbar = mbar;
        RankDistribution t = estimate_rank_distribution(cfg, trials, rng);
        double bound = t.mean() / mbar;
        if (!have || bound > best.bound) {
            have = true;
            best = {mbar, t.mean(), bound};
        }
    }
    return best;
}

// Metrics of one full (all chunks + BP decode) network run.
struct TrialMetrics {
    long long recovered = 0;
    int decoded_chunks = 0;
    int iterations = 0;
    double fraction = 0.0;  // recovered / k
    double rate = 0.0;      // recovered / (n * mbar), packets per network use
    long long sum_rank = 0; // sum of transfer-matrix ranks, recovery upper bound
};

struct EndToEndResult {
    TrialMetrics metrics;
    DecoderState state;
    FieldMatrix truth; // payload mode: the L x k ground-truth packet matrix
};

// Transmit all n chunks over the line network and run BP decoding. With
// payload_len > 0, random ground-truth packets are generated and carried
// through so the decoded values can be checked against them.
template <class URBG>
EndToEndResult run_end_to_end(const ChunkedCode& code, const LineNetworkConfig& cfg, URBG& rng,
                              int payload_len = 0) {
    if (code.m != cfg.m) throw std::invalid_argument("run_end_to_end: code and network disagree on chunk size");
    const GaloisField& gf = GaloisField::of_size(cfg.q);
    LineNetwork net(cfg);
    EndToEndResult out;
    if (payload_len > 0) out.truth = random_matrix(payload_len, code.k, gf, rng);
    std::vector<ChunkTransferRecord> records;
    records.reserve(std::size_t(code.n));
    for (int j = 1; j <= code.n; ++j) {
        ChunkTransferRecord rec;
        rec.chunk_id = j;
        if (payload_len > 0) {
            FieldMatrix B(payload_len, code.m);
            const auto& chunk = code.chunks[std::size_t(j - 1)];
            for (int p = 0; p < code.m; ++p)
                for (int r = 0; r < payload_len; ++r) B(r, p) = out.truth(r, chunk[std::size_t(p)] - 1);
            auto res = net.transfer_chunk(rng, &B);
            rec.T = std::move(res.T);
            rec.Y = std::move(res.Y);
        } else {
            rec.T = net.transfer_chunk(rng).T;
        }
        out.metrics.sum_rank += rec.T.cols();
        records.push_back(std::move(rec));
    }
    out.state = bp_decode(code, records, gf);
    out.metrics.recovered = out.state.recovered;
    out.metrics.decoded_chunks = out.state.decoded_chunks;
    out.metrics.iterations = out.state.iterations;
    out.metrics.fraction = decode_fraction(out.state, code.k);
    out.metrics.rate = double(out.state.recovered) / (double(code.n) * cfg.mbar);
    return out;
}

} // namespace ecc
