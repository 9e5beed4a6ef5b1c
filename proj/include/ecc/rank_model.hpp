#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecc/gf.hpp"
#include "ecc/matrix.hpp"
#include "ecc/rational.hpp"
#include "ecc/rng.hpp"

namespace ecc {

// Probability law of the transfer-matrix rank: t = (t_0, ..., t_m).
struct RankDistribution {
    int m = 0;
    std::vector<double> t;

    RankDistribution() = default;
    RankDistribution(int m_, std::vector<double> t_) : m(m_), t(std::move(t_)) { validate(); }

    void validate() const {
        if (m < 0 || int(t.size()) != m + 1)
            throw std::invalid_argument("RankDistribution: expected m+1 entries");
        double sum = 0.0;
        for (double p : t) {
            if (p < -1e-15 || !std::isfinite(p))
                throw std::invalid_argument("RankDistribution: negative or non-finite probability");
            sum += p;
        }
        if (std::fabs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("RankDistribution: probabilities sum to " + std::to_string(sum));
    }

    double mean() const {
        double s = 0.0;
        for (int i = 0; i <= m; ++i) s += double(i) * t[std::size_t(i)];
        return s;
    }

    double upper_bound_rate() const { return mean() / double(m); }

    static RankDistribution point_mass(int m, int r) {
        std::vector<double> t(std::size_t(m) + 1, 0.0);
        t.at(std::size_t(r)) = 1.0;
        return RankDistribution(m, std::move(t));
    }

    static RankDistribution uniform(int m) {
        std::vector<double> t(std::size_t(m) + 1, 1.0 / double(m + 1));
        return RankDistribution(m, std::move(t));
    }

    // One text line: m followed by the m+1 probabilities.
    std::string to_line() const {
        std::ostringstream os;
        os.precision(17);
        os << m;
        for (double p : t) os << ' ' << p;
        return os.str();
    }

    static RankDistribution parse_line(const std::string& line) {
        std::istringstream is(line);
        int m = -1;
        if (!(is >> m) || m < 0) throw std::invalid_argument("RankDistribution: bad chunk size field");
        std::vector<double> t(std::size_t(m) + 1);
        for (int i = 0; i <= m; ++i)
            if (!(is >> t[std::size_t(i)]))
                throw std::invalid_argument("RankDistribution: expected " + std::to_string(m + 1) + " probabilities");
        std::string extra;
        if (is >> extra) throw std::invalid_argument("RankDistribution: trailing tokens");
        return RankDistribution(m, std::move(t));
    }
};

inline double mean_rank(const RankDistribution& t) { return t.mean(); }
inline double upper_bound_rate(const RankDistribution& t) { return t.upper_bound_rate(); }

// Gaussian binomial {w brack i}_q = prod_{j<i} (q^w - q^j)/(q^i - q^j),
// the number of i-dimensional subspaces of F_q^w. Exact value.
inline Rational gaussian_binomial(int w, int i, int q) {
    if (i < 0) throw std::invalid_argument("gaussian_binomial: negative lower index");
    if (i > w) return Rational(0);
    Rational r(1);
    for (int j = 0; j < i; ++j) {
        __int128 num = int_pow(q, w) - int_pow(q, j);
        __int128 den = int_pow(q, i) - int_pow(q, j);
        r *= Rational(num, den);
    }
    return r;
}

// log of the Gaussian binomial; usable far beyond the exact-integer range.
inline double log_gaussian_binomial(int w, int i, int q) {
    if (i < 0) throw std::invalid_argument("log_gaussian_binomial: negative lower index");
    if (i > w) return -std::numeric_limits<double>::infinity();
    const double lq = std::log(double(q));
    double s = double(i) * double(w - i) * lq;
    for (int j = 0; j < i; ++j)
        s += std::log1p(-std::pow(double(q), double(j - w))) -
             std::log1p(-std::pow(double(q), double(j - i)));
    return s;
}

inline double gaussian_binomial_d(int w, int i, int q) {
    double lg = log_gaussian_binomial(w, i, q);
    return std::isinf(lg) ? 0.0 : std::exp(lg);
}

// Probability that a chunk with transfer-rank law t becomes decodable when w
// recovered overlap packets supply w extra independent coding vectors:
//   beta_w = sum_{i=m-w}^{m} q^{(m-i)(m-w)} {w brack m-i} / {m brack i} * t_i.
// Each coefficient is a conditional probability, hence <= 1, so the log-space
// evaluation never overflows even at m = 64, q = 256.
inline double beta_w(int w, const RankDistribution& t, int q) {
    const int m = t.m;
    if (w < 0 || w > m) throw std::invalid_argument("beta_w: w out of range [0,m]");
    const double lq = std::log(double(q));
    double acc = 0.0;
    for (int i = m - w; i <= m; ++i) {
        if (i < 0) continue;
        double ti = t.t[std::size_t(i)];
        if (ti == 0.0) continue;
        double lcoef = double(m - i) * double(m - w) * lq +
                       log_gaussian_binomial(w, m - i, q) -
                       log_gaussian_binomial(m, i, q);
        acc += std::exp(lcoef) * ti;
    }
    return std::min(acc, 1.0);
}

// Exact-rational counterpart for small q; t given as exact probabilities.
inline Rational beta_w_exact(int w, const std::vector<Rational>& t, int q) {
    const int m = int(t.size()) - 1;
    if (w < 0 || w > m) throw std::invalid_argument("beta_w_exact: w out of range [0,m]");
    Rational acc(0);
    for (int i = m - w; i <= m; ++i) {
        if (i < 0) continue;
        Rational coef = Rational(int_pow(q, (m - i) * (m - w)), 1) *
                        gaussian_binomial(w, m - i, q) / gaussian_binomial(m, i, q);
        acc += coef * t[std::size_t(i)];
    }
    return acc;
}

// beta_0 .. beta_dmax for one rank law. Monotonicity in w is a structural
// requirement of the rate analysis; it is rechecked here at build time to
// catch numerical drift, then tiny float dips are flattened.
struct BetaTable {
    int m = 0;
    int q = 0;
    int dmax = 0;
    std::vector<double> b;

    double operator[](int w) const { return b.at(std::size_t(w)); }
};

inline BetaTable make_beta_table(const RankDistribution& t, int dmax, int q) {
    if (dmax < 0 || dmax > t.m) throw std::invalid_argument("make_beta_table: dmax out of range [0,m]");
    BetaTable bt;
    bt.m = t.m;
    bt.q = q;
    bt.dmax = dmax;
    bt.b.resize(std::size_t(dmax) + 1);
    for (int w = 0; w <= dmax; ++w) bt.b[std::size_t(w)] = beta_w(w, t, q);
    for (int w = 1; w <= dmax; ++w) {
        if (bt.b[std::size_t(w)] < bt.b[std::size_t(w) - 1] - 1e-9)
            throw std::runtime_error("make_beta_table: beta values not nondecreasing in w");
        bt.b[std::size_t(w)] = std::max(bt.b[std::size_t(w)], bt.b[std::size_t(w) - 1]);
    }
    return bt;
}

// m x r matrix of full column rank whose column space is uniform over all
// r-dimensional subspaces of F_q^m. Rejection from i.i.d. uniform matrices;
// the acceptance probability is at least prod_i (1 - q^-i) > 0.28 even at q=2.
template <class URBG>
FieldMatrix sample_uniform_subspace_matrix(int m, int r, const GaloisField& gf, URBG& rng) {
    if (r < 0 || r > m) throw std::invalid_argument("sample_uniform_subspace_matrix: rank out of range");
    if (r == 0) return FieldMatrix(m, 0);
    for (;;) {
        FieldMatrix M = random_matrix(m, r, gf, rng);
        if (rank(M, gf) == r) return M;
    }
}

// Rank law of an m x n matrix with i.i.d. uniform entries:
//   P(rank = r) = {m brack r}_q * prod_{j<r} (q^n - q^j) / q^{mn}.
inline RankDistribution rank_law_totally_random(int m, int ncols, int q) {
    if (m < 0 || ncols < 0) throw std::invalid_argument("rank_law_totally_random: negative dimension");
    const double lq = std::log(double(q));
    std::vector<double> t(std::size_t(m) + 1, 0.0);
    const int rmax = std::min(m, ncols);
    double sum = 0.0;
    for (int r = 0; r <= rmax; ++r) {
        double lp = log_gaussian_binomial(m, r, q) - double(m) * double(ncols) * lq;
        for (int j = 0; j < r; ++j)
            lp += double(ncols) * lq + std::log1p(-std::pow(double(q), double(j - ncols)));
        t[std::size_t(r)] = std::exp(lp);
        sum += t[std::size_t(r)];
    }
    for (double& p : t) p /= sum;
    return RankDistribution(m, std::move(t));
}

namespace detail {

// Uniform point on the probability simplex with `atoms` coordinates, via
// sorted-uniform gaps (Dirichlet(1,...,1)).
template <class URBG>
std::vector<double> sample_simplex(int atoms, URBG& rng) {
    if (atoms <= 0) throw std::invalid_argument("sample_simplex: need at least one atom");
    if (atoms == 1) return {1.0};
    std::vector<double> cuts(std::size_t(atoms) - 1);
    for (double& c : cuts) c = uniform01(rng);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> p(std::size_t(atoms), 0.0);
    double prev = 0.0;
    for (int i = 0; i + 1 < atoms; ++i) {
        p[std::size_t(i)] = cuts[std::size_t(i)] - prev;
        prev = cuts[std::size_t(i)];
    }
    p[std::size_t(atoms) - 1] = 1.0 - prev;
    return p;
}

} // namespace detail

// Random rank distribution with prescribed mean tbar: sample one distribution
// on {0..a} with a = floor(tbar) and one on {a+1..m}, then mix them with the
// unique weight eta that makes the overall mean hit tbar.
template <class URBG>
RankDistribution sample_rank_distribution(double tbar, int m, URBG& rng) {
    if (!(tbar > 0.0 && tbar < double(m)))
        throw std::invalid_argument("sample_rank_distribution: mean must lie strictly inside (0,m)");
    const int a = int(std::floor(tbar));
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<double> low = detail::sample_simplex(a + 1, rng);
        std::vector<double> high = detail::sample_simplex(m - a, rng);
        double ml = 0.0, mh = 0.0;
        for (int i = 0; i <= a; ++i) ml += double(i) * low[std::size_t(i)];
        for (int i = a + 1; i <= m; ++i) mh += double(i) * high[std::size_t(i - a - 1)];
        const double denom = mh - ml;
        if (denom < 1e-9) continue;
        const double eta = (mh - tbar) / denom;
        std::vector<double> t(std::size_t(m) + 1, 0.0);
        for (int i = 0; i <= a; ++i) t[std::size_t(i)] = eta * low[std::size_t(i)];
        for (int i = a + 1; i <= m; ++i) t[std::size_t(i)] = (1.0 - eta) * high[std::size_t(i - a - 1)];
        return RankDistribution(m, std::move(t));
    }
    throw std::runtime_error("sample_rank_distribution: degenerate split, giving up");
}

} // namespace ecc
