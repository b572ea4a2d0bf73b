#pragma once

// Independent reference implementations used as test oracles. Each one is
// written straight from the definition, favouring clarity over speed, and
// shares no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

/// Pearson correlation of two equal-length sequences.
inline double ncc(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

/// |X[k]|^2 / n of the mean-removed input by the O(n^2) DFT sum.
inline std::vector<double> dft_power(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> out(n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            acc += (x[t] - mean) * std::polar(1.0, phase);
        }
        out[k] = std::norm(acc) / static_cast<double>(n);
    }
    return out;
}

/// Minimum over every monotone, continuous warp path from (0,0) to
/// (n-1,m-1) of the summed local cost, by explicit enumeration.
inline double exhaustive_dtw(const std::vector<double>& a, const std::vector<double>& b, bool squared = false) {
    double best = std::numeric_limits<double>::infinity();
    const auto cost = [&](std::size_t i, std::size_t j) {
        const double d = a[i] - b[j];
        return squared ? d * d : std::abs(d);
    };
    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
        acc += cost(i, j);
        if (i + 1 == a.size() && j + 1 == b.size()) {
            best = std::min(best, acc);
            return;
        }
        if (i + 1 < a.size()) walk(i + 1, j, acc);
        if (j + 1 < b.size()) walk(i, j + 1, acc);
        if (i + 1 < a.size() && j + 1 < b.size()) walk(i + 1, j + 1, acc);
    };
    walk(0, 0, 0.0);
    return best;
}

/// Number of monotone paths visited by exhaustive_dtw (Delannoy number).
inline std::size_t delannoy(std::size_t n, std::size_t m) {
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(m, 1));
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 1; j < m; ++j) d[i][j] = d[i - 1][j] + d[i][j - 1] + d[i - 1][j - 1];
    return d[n - 1][m - 1];
}

/// Topographic prominence of the strict local maximum at p: walk each way
/// until a strictly higher sample or the edge, take the lowest point seen
/// on each side, and subtract the higher of the two.
inline double prominence(const std::vector<double>& x, std::size_t p) {
    double left_min = x[p];
    for (std::size_t i = p; i-- > 0;) {
        if (x[i] > x[p]) break;
        left_min = std::min(left_min, x[i]);
    }
    double right_min = x[p];
    for (std::size_t i = p + 1; i < x.size(); ++i) {
        if (x[i] > x[p]) break;
        right_min = std::min(right_min, x[i]);
    }
    return x[p] - std::max(left_min, right_min);
}

/// Strict interior local maxima with prominence >= min_prom. Inputs must be
/// free of equal neighbours.
inline std::vector<std::size_t> prominent_peaks(const std::vector<double>& x, double min_prom) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < x.size(); ++i)
        if (x[i] > x[i - 1] && x[i] > x[i + 1] && prominence(x, i) >= min_prom) out.push_back(i);
    return out;
}

/// Greedy distance rule: tallest first (lower index on ties), reject
/// anything closer than d to a kept peak.
inline std::vector<std::size_t> min_distance(const std::vector<double>& x, std::vector<std::size_t> peaks, std::size_t d) {
    std::vector<std::size_t> order = peaks;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] > x[b] : a < b;
    });
    std::vector<std::size_t> kept;
    for (std::size_t p : order) {
        bool ok = true;
        for (std::size_t q : kept)
            if ((p > q ? p - q : q - p) < d) ok = false;
        if (ok) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

/// Textbook median: middle element, or mean of the two middle elements.
inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct KnnAnswer {
    std::string label;
    std::vector<std::pair<double, std::string>> neighbors;
};

/// Full sort of every (distance, label), take k, count votes, then walk
/// the tie-break ladder: votes, summed distance, label.
inline KnnAnswer brute_force_knn(const std::vector<std::pair<double, std::string>>& dist_label, std::size_t k) {
    auto all = dist_label;
    std::sort(all.begin(), all.end());
    all.resize(std::min(k, all.size()));
    std::map<std::string, std::pair<std::size_t, double>> tally;
    for (const auto& [d, l] : all) {
        tally[l].first += 1;
        tally[l].second += d;
    }
    std::string best;
    std::size_t best_votes = 0;
    double best_sum = 0.0;
    for (const auto& [label, vs] : tally) {
        const auto [votes, sum] = vs;
        if (best.empty() || votes > best_votes || (votes == best_votes && sum < best_sum)) {
            best = label;
            best_votes = votes;
            best_sum = sum;
        }
    }
    return {best, all};
}

}  // namespace oracle
