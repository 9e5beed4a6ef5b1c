#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ecc/rank_model.hpp"

namespace ecc {

namespace detail {

inline double log_choose(int n, int r) {
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(r) + 1.0) - std::lgamma(double(n - r) + 1.0);
}

} // namespace detail

// Tree-recursion map: probability that a chunk decodes when each of its d-1
// subtree neighbours independently decoded with probability y,
//   alpha_d(y) = sum_{w=0}^{d-1} C(d-1,w) y^w (1-y)^{d-1-w} beta_w.
// Monotonically increasing in y whenever the beta table is nondecreasing.
inline double alpha(double y, int d, const BetaTable& betas) {
    if (d < 1 || d - 1 > betas.dmax)
        throw std::invalid_argument("alpha: beta table too short for degree " + std::to_string(d));
    if (y < 0.0 || y > 1.0) throw std::invalid_argument("alpha: argument outside [0,1]");
    if (y == 0.0) return betas[0];
    if (y == 1.0) return betas[d - 1];
    const double ly = std::log(y), l1y = std::log1p(-y);
    double acc = 0.0;
    for (int w = 0; w <= d - 1; ++w) {
        double lp = detail::log_choose(d - 1, w) + double(w) * ly + double(d - 1 - w) * l1y;
        acc += std::exp(lp) * betas[w];
    }
    return std::min(acc, 1.0);
}

struct FixedPointResult {
    double value = 0.0;
    int iterations = 0;
};

// alpha_d^* = lim alpha_d^i(0). The sequence is monotone nondecreasing and
// bounded by 1, so plain iteration converges; a non-monotone step signals a
// broken beta table and raises.
inline FixedPointResult alpha_fixed_point(int d, const BetaTable& betas, double tol = 1e-10,
                                          int max_iter = 1000000) {
    if (tol <= 0.0) throw std::invalid_argument("alpha_fixed_point: tolerance must be positive");
    double y = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        double y1 = alpha(y, d, betas);
        if (y1 < y - 1e-13)
            throw std::runtime_error("alpha_fixed_point: iteration decreased; beta table is not monotone");
        if (y1 - y < tol) return {y1, it};
        y = y1;
    }
    return {y, max_iter};
}

// Closed-form rate summary for one (rank law, degree) pair.
struct RateReport {
    int m = 0;
    int d = 0;
    int q = 0;
    BetaTable betas;
    double alpha_star = 0.0;
    double tau = 0.0;      // alpha_{d+1}(alpha_d^*)
    double lambda = 0.0;   // 1 - (1 - alpha_d^*)^2
    double rate_lb = 0.0;  // tau (1 - d/m) + lambda d / (2m)
    double rate_ub = 0.0;  // mean rank / m
    int fp_iterations = 0;

    std::string csv_row() const {
        std::ostringstream os;
        os.precision(12);
        os << m << ',' << q << ',' << d << ',' << rate_ub << ',' << alpha_star << ',' << tau << ','
           << lambda << ',' << rate_lb << ',' << fp_iterations;
        return os.str();
    }
    static std::string csv_header() {
        return "m,q,d,rate_upper_bound,alpha_star,tau,lambda,rate_lower_bound,fp_iterations";
    }
};

inline RateReport rate_report(const RankDistribution& t, int d, int q, double tol = 1e-10) {
    if (d < 3 || d > t.m) throw std::invalid_argument("rate_report: degree must satisfy 3 <= d <= m");
    RateReport r;
    r.m = t.m;
    r.d = d;
    r.q = q;
    r.betas = make_beta_table(t, d, q); // alpha_{d+1} consumes beta_0..beta_d
    auto fp = alpha_fixed_point(d, r.betas, tol);
    r.alpha_star = fp.value;
    r.fp_iterations = fp.iterations;
    r.tau = alpha(r.alpha_star, d + 1, r.betas);
    r.lambda = 1.0 - (1.0 - r.alpha_star) * (1.0 - r.alpha_star);
    r.rate_lb = r.tau * (1.0 - double(d) / double(t.m)) + r.lambda * double(d) / (2.0 * double(t.m));
    r.rate_ub = t.upper_bound_rate();
    return r;
}

// Exhaustive scan over degrees; ties go to the smaller degree.
inline std::pair<int, RateReport> optimize_degree(const RankDistribution& t, int q, int d_lo, int d_hi,
                                                  double tol = 1e-10) {
    if (d_lo < 3 || d_hi > t.m || d_lo > d_hi)
        throw std::invalid_argument("optimize_degree: empty or out-of-range degree interval");
    int best_d = 0;
    RateReport best;
    for (int d = d_lo; d <= d_hi; ++d) {
        RateReport r = rate_report(t, d, q, tol);
        if (best_d == 0 || r.rate_lb > best.rate_lb) {
            best_d = d;
            best = r;
        }
    }
    return {best_d, best};
}

// Finite-depth analogue of (tau, lambda): decode probability of a chunk whose
// depth-l neighbourhood is a tree, and the recovery probability of one of its
// shared packets, after l+1 peeling iterations.
struct DepthPrediction {
    double root_decode_prob = 0.0;     // alpha_{d+1}(alpha_d^l(0))
    double overlap_recovery_prob = 0.0; // 1 - (1 - alpha_d^l(0)) (1 - alpha_d^{l+1}(0))
};

inline DepthPrediction finite_depth_prediction(int l, int d, const BetaTable& betas) {
    if (l < 0) throw std::invalid_argument("finite_depth_prediction: negative depth");
    double y = 0.0;
    for (int i = 0; i < l; ++i) y = alpha(y, d, betas);
    DepthPrediction p;
    p.root_decode_prob = alpha(y, d + 1, betas);
    double y_next = alpha(y, d, betas);
    p.overlap_recovery_prob = 1.0 - (1.0 - y) * (1.0 - y_next);
    return p;
}

// Expected recovered packets per chunk implied by a depth prediction: m-d
// private packets at the root rate plus d shared packets, each counted half
// (a shared packet belongs to two chunks).
inline double predicted_packets_per_chunk(const DepthPrediction& p, int m, int d) {
    return double(m - d) * p.root_decode_prob + double(d) / 2.0 * p.overlap_recovery_prob;
}

// Same prediction normalized as a fraction of the k = n(m - d/2) input packets.
inline double predicted_decode_fraction(const DepthPrediction& p, int m, int d) {
    return predicted_packets_per_chunk(p, m, d) / (double(m) - double(d) / 2.0);
}

} // namespace ecc
