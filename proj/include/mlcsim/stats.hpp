#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mlc {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty sample");
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty sample");
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    if (xs.size() % 2 == 1) return xs[mid];
    return 0.5 * (xs[mid - 1] + xs[mid]);
}

/// One-sided 95% critical values of Student's t. Exact table through df=30,
/// conventional breakpoints beyond, normal limit past 120.
inline double t_critical_95(int df) {
    static const double table[] = {6.314, 2.920, 2.353, 2.132, 2.015, 1.943, 1.895, 1.860,
                                   1.833, 1.812, 1.796, 1.782, 1.771, 1.761, 1.753, 1.746,
                                   1.740, 1.734, 1.729, 1.725, 1.721, 1.717, 1.714, 1.711,
                                   1.708, 1.706, 1.703, 1.701, 1.699, 1.697};
    if (df < 1) throw std::invalid_argument("t_critical_95: df must be positive");
    if (df <= 30) return table[df - 1];
    if (df <= 40) return 1.684;
    if (df <= 60) return 1.671;
    if (df <= 120) return 1.658;
    return 1.645;
}

struct PairedT {
    double mean_diff = 0.0;
    double t = 0.0;
    int df = 0;
    bool significant = false;  // mean(a - b) > 0 at one-sided 95%
};

/// Paired one-sided t-test of H1: mean(a - b) > 0. Samples must be the same
/// length (same seeds, pairwise). A zero-variance difference is degenerate:
/// significance is then just the sign of the (constant) difference.
inline PairedT paired_t_greater(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("paired_t_greater: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("paired_t_greater: need at least 2 pairs");
    const std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    PairedT out;
    out.mean_diff = mean(d);
    out.df = static_cast<int>(n) - 1;
    double ss = 0.0;
    for (double x : d) ss += (x - out.mean_diff) * (x - out.mean_diff);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        out.t = out.mean_diff > 0.0 ? std::numeric_limits<double>::infinity()
                                    : (out.mean_diff < 0.0
                                           ? -std::numeric_limits<double>::infinity()
                                           : 0.0);
        out.significant = out.mean_diff > 0.0;
        return out;
    }
    out.t = out.mean_diff / (sd / std::sqrt(static_cast<double>(n)));
    out.significant = out.t > t_critical_95(out.df);
    return out;
}

}  // namespace mlc
