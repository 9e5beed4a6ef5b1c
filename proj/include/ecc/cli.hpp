#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecc/analysis.hpp"
#include "ecc/code.hpp"
#include "ecc/graph.hpp"
#include "ecc/netsim.hpp"
#include "ecc/rank_model.hpp"
#include "ecc/rng.hpp"
#include "ecc/stats.hpp"

namespace ecc::cli {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Every output file starts with one '#' metadata line carrying the tool
// version, the master seed and a digest of the invocation.
inline std::string metadata_line(const std::string& command, std::uint64_t seed,
                                 const std::string& params) {
    std::ostringstream os;
    os << "# ecc-cli v1 cmd=" << command << " seed=" << seed << " digest=" << std::hex
       << fnv1a(command + "|" + params) << std::dec;
    return os.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
}

// Rank-distribution input: a file path (optionally "@file") with one
// distribution per line, or an inline "m p0 .. pm" line. Inline values always
// contain whitespace, which is how the two are told apart. '#' lines and
// blank lines are skipped. Parse errors carry the line number.
inline std::vector<RankDistribution> load_rank_distributions(const std::string& spec) {
    std::string text;
    if (!spec.empty() && spec[0] == '@')
        text = read_file(spec.substr(1));
    else if (spec.find_first_of(" \t\n") == std::string::npos)
        text = read_file(spec);
    else
        text = spec;
    std::vector<RankDistribution> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        try {
            out.push_back(RankDistribution::parse_line(line));
        } catch (const std::exception& e) {
            throw std::runtime_error("rank distribution, line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (out.empty()) throw std::runtime_error("rank distribution input is empty");
    return out;
}

struct CompareSettings {
    int m = 16;
    int q = 256;
    int n = 200;
    int length = 4;
    double eps = 0.2;
    long trials = 500;
    long grid_trials = 100;
    long estimate_trials = 4000;
    double mbar = 0.0; // 0 = pick via budget optimization
    SchedulerKind scheduler = SchedulerKind::fixed;
    std::uint64_t seed = 0;
};

struct CompareOutcome {
    double mbar = 0.0;
    double bound = 0.0; // tbar / mbar at the chosen budget
    int ec_degree = 0;
    int h2t_overlap = 0;
    int rac_annex = 0;
    RankDistribution estimated_t;
    // per-code decodable-packet counts, one entry per trial
    std::vector<long long> ec, h2t, rac;
    std::vector<long long> ec_sum_rank; // per-trial recovery ceilings
    std::string log;                    // '#'-prefixed grid-search log lines
};

namespace detail {

template <class URBG>
std::vector<long long> run_code_trials(const ChunkedCode& code, const LineNetworkConfig& cfg, long trials,
                                       std::uint64_t seed, std::uint64_t stream_base,
                                       std::vector<long long>* sum_rank_out = nullptr) {
    std::vector<long long> decodable;
    decodable.reserve(std::size_t(trials));
    for (long i = 0; i < trials; ++i) {
        URBG rng = make_rng(seed, stream_base + std::uint64_t(i));
        auto res = run_end_to_end(code, cfg, rng);
        decodable.push_back(res.metrics.recovered);
        if (sum_rank_out) sum_rank_out->push_back(res.metrics.sum_rank);
    }
    return decodable;
}

inline double mean_ll(const std::vector<long long>& v) {
    double s = 0.0;
    for (long long x : v) s += double(x);
    return v.empty() ? 0.0 : s / double(v.size());
}

} // namespace detail

// Full comparison pipeline: pick the budget, estimate the rank law, pick the
// EC degree, grid-search the H2T overlap and RAC annex, run the final trials.
inline CompareOutcome run_compare(const CompareSettings& s) {
    LineNetworkConfig cfg;
    cfg.length = s.length;
    cfg.eps = s.eps;
    cfg.m = s.m;
    cfg.q = s.q;
    cfg.scheduler = s.scheduler;
    cfg.mbar = s.mbar > 0.0 ? s.mbar : double(s.m);
    cfg.validate();

    CompareOutcome out;
    std::ostringstream log;

    if (s.mbar > 0.0) {
        out.mbar = s.mbar;
        auto rng = make_rng(s.seed, 1);
        cfg.mbar = out.mbar;
        out.estimated_t = estimate_rank_distribution(cfg, s.estimate_trials, rng);
        out.bound = out.estimated_t.mean() / out.mbar;
    } else {
        std::vector<double> grid;
        for (double mb = double(s.m); mb <= double(s.m) * 1.5 + 1.0; mb += 0.5) grid.push_back(mb);
        auto rng = make_rng(s.seed, 1);
        auto choice = optimize_budget(cfg, grid, s.estimate_trials, rng);
        out.mbar = choice.mbar;
        out.bound = choice.bound;
        log << "# budget grid " << grid.front() << ".." << grid.back() << " -> mbar=" << choice.mbar
            << " tbar=" << choice.tbar << " bound=" << choice.bound << "\n";
        cfg.mbar = out.mbar;
        auto rng2 = make_rng(s.seed, 2);
        out.estimated_t = estimate_rank_distribution(cfg, s.estimate_trials, rng2);
    }
    cfg.mbar = out.mbar;

    auto [dstar, report] = optimize_degree(out.estimated_t, s.q, 3, s.m);
    out.ec_degree = dstar;
    log << "# ec degree=" << dstar << " rate_lb=" << report.rate_lb << " rate_ub=" << report.rate_ub
        << "\n";

    // EC instance: one generator graph per comparison, fixed by the seed.
    auto graph_rng = make_rng(s.seed, 3);
    int n_ec = s.n;
    if ((n_ec * dstar) % 2) ++n_ec;
    EcCode ec_code = construct_ec(random_regular_graph(n_ec, dstar, graph_rng), s.m);

    // H2T overlap grid search.
    double best_mean = -1.0;
    for (int v = 0; v < s.m; ++v) {
        ChunkedCode code = construct_h2t(s.n, s.m, v);
        auto res = detail::run_code_trials<std::mt19937_64>(code, cfg, s.grid_trials, s.seed,
                                                            1000 + std::uint64_t(v) * 100000);
        double mean = detail::mean_ll(res);
        log << "# h2t overlap=" << v << " mean_decodable=" << mean << "\n";
        if (mean > best_mean) {
            best_mean = mean;
            out.h2t_overlap = v;
        }
    }

    // RAC annex grid search.
    best_mean = -1.0;
    for (int a = 0; a < s.m; ++a) {
        auto rac_rng = make_rng(s.seed, 4 + std::uint64_t(a));
        ChunkedCode code = construct_rac(s.n, s.m - a, a, rac_rng);
        auto res = detail::run_code_trials<std::mt19937_64>(code, cfg, s.grid_trials, s.seed,
                                                            2000000 + std::uint64_t(a) * 100000);
        double mean = detail::mean_ll(res);
        log << "# rac annex=" << a << " mean_decodable=" << mean << "\n";
        if (mean > best_mean) {
            best_mean = mean;
            out.rac_annex = a;
        }
    }

    // Final runs with the tuned parameters.
    auto rac_rng = make_rng(s.seed, 4 + std::uint64_t(out.rac_annex));
    ChunkedCode h2t_code = construct_h2t(s.n, s.m, out.h2t_overlap);
    ChunkedCode rac_code = construct_rac(s.n, s.m - out.rac_annex, out.rac_annex, rac_rng);
    out.ec = detail::run_code_trials<std::mt19937_64>(ec_code, cfg, s.trials, s.seed, 10000000,
                                                      &out.ec_sum_rank);
    out.h2t = detail::run_code_trials<std::mt19937_64>(h2t_code, cfg, s.trials, s.seed, 20000000);
    out.rac = detail::run_code_trials<std::mt19937_64>(rac_code, cfg, s.trials, s.seed, 30000000);
    log << "# final ec_mean=" << detail::mean_ll(out.ec) << " h2t_mean=" << detail::mean_ll(out.h2t)
        << " rac_mean=" << detail::mean_ll(out.rac) << "\n";
    out.log = log.str();
    return out;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"expander chunked code workbench"};
    app.require_subcommand(1);

    // ---- analyze ----------------------------------------------------------
    struct {
        int m = 16;
        int q = 256;
        int d = 0;
        std::string rank_dist;
        std::vector<double> tbar_over_m;
        int samples = 10;
        std::uint64_t seed = 0;
        std::string out_path;
    } an;
    auto* analyze = app.add_subcommand("analyze", "closed-form achievable-rate reports");
    analyze->add_option("--m", an.m, "chunk size");
    analyze->add_option("--q", an.q, "field size (power of two)");
    analyze->add_option("--d", an.d, "fixed degree; 0 scans 3..m");
    analyze->add_option("--rank-dist", an.rank_dist, "inline 'm p0..pm' or @file with one per line");
    analyze->add_option("--tbar", an.tbar_over_m, "sample laws with these tbar/m targets");
    analyze->add_option("--samples", an.samples, "samples per tbar target");
    auto* an_seed = analyze->add_option("--seed", an.seed, "master seed (required when sampling)");
    analyze->add_option("--out", an.out_path, "output CSV path (default stdout)");

    // ---- sample-ranks ------------------------------------------------------
    struct {
        int m = 16;
        double tbar = 0.0;
        int samples = 1;
        std::uint64_t seed = 0;
        std::string out_path;
    } sr;
    auto* sample_ranks = app.add_subcommand("sample-ranks", "draw random rank distributions");
    sample_ranks->add_option("--m", sr.m, "chunk size");
    sample_ranks->add_option("--tbar", sr.tbar, "target mean rank")->required();
    sample_ranks->add_option("--samples", sr.samples, "number of distributions");
    sample_ranks->add_option("--seed", sr.seed, "master seed")->required();
    sample_ranks->add_option("--out", sr.out_path, "output path (default stdout)");

    // ---- construct ---------------------------------------------------------
    struct {
        std::string code = "ec";
        std::string graph_path;
        int k = 0;
        int n = 0;
        int m = 0;
        int d = 3;
        int overlap = 0;
        int annex = 0;
        std::uint64_t seed = 0;
        std::string out_path;
    } co;
    auto* construct = app.add_subcommand("construct", "build a chunked code");
    construct->add_option("--code", co.code, "ec|disjoint|h2t|rac")
        ->check(CLI::IsMember({"ec", "disjoint", "h2t", "rac"}));
    construct->add_option("--graph", co.graph_path, "generator graph file (ec)");
    construct->add_option("--k", co.k, "packet count (disjoint)");
    construct->add_option("--n", co.n, "chunk count");
    construct->add_option("--m", co.m, "chunk size")->required();
    construct->add_option("--d", co.d, "generator degree (ec without --graph)");
    construct->add_option("--overlap", co.overlap, "h2t overlap");
    construct->add_option("--annex", co.annex, "rac annex size");
    auto* co_seed = construct->add_option("--seed", co.seed, "master seed (random constructions)");
    construct->add_option("--out", co.out_path, "output path (default stdout)");

    // ---- simulate ----------------------------------------------------------
    struct {
        std::string code_path;
        std::string config_path;
        int q = 256;
        double eps = 0.2;
        int length = 1;
        double mbar = 0.0;
        std::string scheduler = "fixed";
        long trials = 100;
        std::uint64_t seed = 0;
        std::string out_path;
    } si;
    auto* simulate = app.add_subcommand("simulate", "line-network transmission + BP decoding");
    simulate->add_option("--code-file", si.code_path, "chunked code file")->required();
    simulate->add_option("--config", si.config_path, "network config file (flags override its entries)");
    auto* si_q = simulate->add_option("--q", si.q, "field size");
    auto* si_eps = simulate->add_option("--eps", si.eps, "per-link loss probability");
    auto* si_len = simulate->add_option("--len", si.length, "number of links");
    auto* si_mbar = simulate->add_option("--mbar", si.mbar, "mean packets per chunk per node");
    auto* si_sched = simulate->add_option("--scheduler", si.scheduler, "fixed|randomized")
                         ->check(CLI::IsMember({"fixed", "randomized"}));
    simulate->add_option("--trials", si.trials, "independent runs");
    simulate->add_option("--seed", si.seed, "master seed")->required();
    simulate->add_option("--out", si.out_path, "output CSV path (default stdout)");

    // ---- compare -----------------------------------------------------------
    CompareSettings cs;
    std::string cmp_scheduler = "fixed";
    std::string cmp_out_path;
    auto* compare = app.add_subcommand("compare", "EC vs H2T vs RAC over a line network");
    compare->add_option("--m", cs.m, "chunk size");
    compare->add_option("--q", cs.q, "field size");
    compare->add_option("--n", cs.n, "chunks per code");
    compare->add_option("--len", cs.length, "number of links");
    compare->add_option("--eps", cs.eps, "per-link loss probability");
    compare->add_option("--trials", cs.trials, "final runs per code");
    compare->add_option("--grid-trials", cs.grid_trials, "runs per grid point");
    compare->add_option("--estimate-trials", cs.estimate_trials, "transfers per rank-law estimate");
    compare->add_option("--mbar", cs.mbar, "fixed budget (default: optimize tbar/mbar)");
    compare->add_option("--scheduler", cmp_scheduler, "fixed|randomized")
        ->check(CLI::IsMember({"fixed", "randomized"}));
    compare->add_option("--seed", cs.seed, "master seed")->required();
    compare->add_option("--out", cmp_out_path, "output CSV path (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    auto emit = [&out](const std::string& path, const std::string& content) {
        if (path.empty())
            out << content;
        else
            write_file(path, content);
    };

    try {
        if (analyze->parsed()) {
            std::vector<RankDistribution> laws;
            std::vector<std::string> law_names;
            bool sampled = false;
            std::ostringstream params;
            if (!an.rank_dist.empty()) {
                laws = load_rank_distributions(an.rank_dist);
                for (std::size_t i = 0; i < laws.size(); ++i)
                    law_names.push_back("input" + std::to_string(i + 1));
                params << "rank-dist";
            } else if (!an.tbar_over_m.empty()) {
                if (an_seed->count() == 0) throw std::runtime_error("--seed is required when sampling laws");
                sampled = true;
                auto rng = make_rng(an.seed, 0);
                for (double frac : an.tbar_over_m) {
                    if (!(frac > 0.0 && frac < 1.0))
                        throw std::runtime_error("--tbar values are tbar/m and must lie in (0,1)");
                    for (int i = 0; i < an.samples; ++i) {
                        laws.push_back(sample_rank_distribution(frac * an.m, an.m, rng));
                        law_names.push_back("tbar" + std::to_string(frac) + "#" + std::to_string(i + 1));
                    }
                }
                params << "tbar sweep";
            } else {
                throw std::runtime_error("analyze needs --rank-dist or --tbar");
            }
            int d_lo = an.d > 0 ? an.d : 3;
            int d_hi = an.d > 0 ? an.d : 0; // 0 = m of each law
            std::ostringstream os;
            os.precision(12);
            os << metadata_line("analyze", an.seed, params.str()) << "\n";
            os << "law,best," << RateReport::csv_header() << "\n";
            std::map<double, std::vector<double>> sweep_rates; // tbar/m -> optimized rates
            for (std::size_t i = 0; i < laws.size(); ++i) {
                const auto& t = laws[i];
                int hi = d_hi > 0 ? d_hi : t.m;
                auto [dstar, best] = optimize_degree(t, an.q, d_lo, hi);
                for (int d = d_lo; d <= hi; ++d) {
                    RateReport r = rate_report(t, d, an.q);
                    os << law_names[i] << ',' << (d == dstar ? 1 : 0) << ',' << r.csv_row() << "\n";
                }
                if (sampled) sweep_rates[t.upper_bound_rate()].push_back(best.rate_lb);
            }
            for (auto& [frac, rates] : sweep_rates) {
                double mn = rates[0], mx = rates[0], avg = 0.0;
                for (double r : rates) {
                    mn = std::min(mn, r);
                    mx = std::max(mx, r);
                    avg += r;
                }
                avg /= double(rates.size());
                os << "# tbar/m=" << frac << " optimized-rate min=" << mn << " avg=" << avg
                   << " max=" << mx << "\n";
            }
            emit(an.out_path, os.str());
            return 0;
        }

        if (sample_ranks->parsed()) {
            auto rng = make_rng(sr.seed, 0);
            std::ostringstream os;
            os << metadata_line("sample-ranks", sr.seed,
                                "m=" + std::to_string(sr.m) + " tbar=" + std::to_string(sr.tbar))
               << "\n";
            for (int i = 0; i < sr.samples; ++i)
                os << sample_rank_distribution(sr.tbar, sr.m, rng).to_line() << "\n";
            emit(sr.out_path, os.str());
            return 0;
        }

        if (construct->parsed()) {
            ChunkedCode code;
            if (co.code == "ec") {
                RegularGraph g;
                if (!co.graph_path.empty()) {
                    std::istringstream is(read_file(co.graph_path));
                    g = RegularGraph::read(is);
                } else {
                    if (co.n <= 0) throw std::runtime_error("ec construction needs --graph or --n/--d");
                    if (co_seed->count() == 0) throw std::runtime_error("--seed is required to generate a graph");
                    auto rng = make_rng(co.seed, 0);
                    g = random_regular_graph(co.n, co.d, rng);
                }
                code = construct_ec(g, co.m);
            } else if (co.code == "disjoint") {
                if (co.k <= 0) throw std::runtime_error("disjoint construction needs --k");
                code = construct_disjoint(co.k, co.m);
            } else if (co.code == "h2t") {
                if (co.n <= 0) throw std::runtime_error("h2t construction needs --n");
                code = construct_h2t(co.n, co.m, co.overlap);
            } else {
                if (co.n <= 0) throw std::runtime_error("rac construction needs --n");
                if (co_seed->count() == 0) throw std::runtime_error("--seed is required for rac");
                auto rng = make_rng(co.seed, 0);
                code = construct_rac(co.n, co.m - co.annex, co.annex, rng);
            }
            std::ostringstream os;
            os << metadata_line("construct", co.seed, co.code) << "\n";
            code.write(os);
            emit(co.out_path, os.str());
            return 0;
        }

        if (simulate->parsed()) {
            std::istringstream is(read_file(si.code_path));
            ChunkedCode code = ChunkedCode::read(is);
            LineNetworkConfig cfg;
            if (!si.config_path.empty()) cfg = LineNetworkConfig::parse(read_file(si.config_path));
            if (si_len->count() || si.config_path.empty()) cfg.length = si.length;
            if (si_eps->count() || si.config_path.empty()) cfg.eps = si.eps;
            if (si_mbar->count() || si.config_path.empty()) cfg.mbar = si.mbar;
            if (si_q->count() || si.config_path.empty()) cfg.q = si.q;
            if (si_sched->count() || si.config_path.empty())
                cfg.scheduler = scheduler_from_name(si.scheduler);
            if (si.mbar <= 0.0 && si.config_path.empty())
                throw std::runtime_error("simulate needs --mbar or --config");
            cfg.m = code.m;
            cfg.validate();
            std::ostringstream os;
            os.precision(12);
            os << metadata_line("simulate", si.seed,
                                si.code_path + " eps=" + std::to_string(si.eps) + " len=" +
                                    std::to_string(si.length) + " mbar=" + std::to_string(si.mbar))
               << "\n";
            os << "trial,seed,decoded_packets,decode_fraction,rate\n";
            for (long i = 0; i < si.trials; ++i) {
                auto rng = make_rng(si.seed, std::uint64_t(i));
                auto res = run_end_to_end(code, cfg, rng);
                os << i << ',' << si.seed << ',' << res.metrics.recovered << ','
                   << res.metrics.fraction << ',' << res.metrics.rate << "\n";
            }
            emit(si.out_path, os.str());
            return 0;
        }

        if (compare->parsed()) {
            cs.scheduler = scheduler_from_name(cmp_scheduler);
            CompareOutcome res = run_compare(cs);
            std::ostringstream os;
            os.precision(12);
            os << metadata_line("compare", cs.seed,
                                "m=" + std::to_string(cs.m) + " n=" + std::to_string(cs.n) + " eps=" +
                                    std::to_string(cs.eps) + " len=" + std::to_string(cs.length))
               << "\n";
            os << res.log;
            os << "code,trial,decodable\n";
            auto dump = [&os](const char* name, const std::vector<long long>& v) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    os << name << ',' << i << ',' << v[i] << "\n";
            };
            dump("ec", res.ec);
            dump("h2t", res.h2t);
            dump("rac", res.rac);
            emit(cmp_out_path, os.str());
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace ecc::cli
