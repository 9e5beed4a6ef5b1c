#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ecc {

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean_of: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

inline double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mu = mean_of(v), s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / double(v.size() - 1));
}

inline double standard_error(const std::vector<double>& v) {
    return sample_stddev(v) / std::sqrt(double(v.size()));
}

// Pearson statistic against a fully specified multinomial law.
inline double chi_square_statistic(const std::vector<long long>& observed,
                                   const std::vector<double>& expected_probs) {
    if (observed.size() != expected_probs.size())
        throw std::invalid_argument("chi_square_statistic: size mismatch");
    long long total = 0;
    for (long long o : observed) total += o;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = expected_probs[i] * double(total);
        if (e <= 0.0) throw std::invalid_argument("chi_square_statistic: zero expected cell");
        double diff = double(observed[i]) - e;
        stat += diff * diff / e;
    }
    return stat;
}

// Upper 1% critical value of the chi-square law. Exact table for small df,
// Wilson-Hilferty approximation beyond it.
inline double chi_square_critical_001(int df) {
    static const double table[] = {6.634897,  9.210340,  11.344867, 13.276704, 15.086272,
                                   16.811894, 18.475307, 20.090235, 21.665994, 23.209251,
                                   24.724970, 26.216967};
    if (df < 1) throw std::invalid_argument("chi_square_critical_001: df must be positive");
    if (df <= 12) return table[df - 1];
    const double z = 2.326347874; // upper 1% normal quantile
    double c = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
    return df * c * c * c;
}

// Empirical deciles (10%,...,90%) of a sample.
inline std::vector<double> deciles(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("deciles: empty sample");
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (int p = 1; p <= 9; ++p) {
        std::size_t idx = std::size_t((double(p) / 10.0) * double(v.size() - 1) + 0.5);
        out.push_back(v[idx]);
    }
    return out;
}

} // namespace ecc
