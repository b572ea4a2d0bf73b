#include "vibrotag/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vibrotag/error.hpp"
#include "vibrotag/kernels.hpp"
#include "vibrotag/parallel.hpp"

namespace vibrotag::dtw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double local_cost(double x, double y, LocalCost c) {
    const double d = x - y;
    return c == LocalCost::Absolute ? std::fabs(d) : d * d;
}

void require_non_empty(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::Empty, "DTW needs two non-empty sequences");
}

// Columns of row i that lie inside the band, as a 0-based half-open range.
// The band follows the diagonal rescaled to the matrix aspect ratio and is
// widened as needed so a path always exists.
std::pair<std::size_t, std::size_t> band_columns(std::size_t i, std::size_t rows, std::size_t cols,
                                                 const std::optional<std::size_t>& band) {
    if (!band) return {0, cols};
    const double centre =
        rows == 1 ? 0.0
                  : static_cast<double>(i) * static_cast<double>(cols - 1) / static_cast<double>(rows - 1);
    const double slope = rows == 1 ? static_cast<double>(cols) : static_cast<double>(cols) / rows;
    const double half = static_cast<double>(*band) + std::ceil(slope);
    const double lo = std::max(0.0, std::floor(centre - half));
    const double hi = std::min(static_cast<double>(cols), std::ceil(centre + half) + 1.0);
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

}  // namespace

double distance(std::span<const double> a, std::span<const double> b, const Options& opt) {
    require_non_empty(a, b);
    // rows iterate the longer sequence so the two rows span the shorter one
    if (b.size() > a.size()) std::swap(a, b);
    const std::size_t rows = a.size();
    const std::size_t cols = b.size();

    const auto& k = kernels::active();
    const auto row_fn = opt.cost == LocalCost::Absolute ? k.dtw_row_abs : k.dtw_row_sq;

    std::vector<double> prev(cols + 1, kInf);
    std::vector<double> cur(cols + 1, kInf);
    std::vector<double> scratch(cols);
    prev[0] = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        const auto [lo, hi] = band_columns(i, rows, cols, opt.band);
        if (opt.band) std::fill(cur.begin(), cur.end(), kInf);
        cur[lo] = kInf;
        row_fn(a[i], b.data() + lo, prev.data() + lo, cur.data() + lo, hi - lo, scratch.data());
        std::swap(prev, cur);
        if (i == 0) cur[0] = kInf;
    }
    return prev[cols];
}

WarpPath path(std::span<const double> a, std::span<const double> b, const Options& opt) {
    require_non_empty(a, b);
    // same orientation as distance(), so a band selects the same cells
    if (b.size() > a.size()) {
        WarpPath t = path(b, a, opt);
        for (auto& [i, j] : t.pairs) std::swap(i, j);
        return t;
    }
    const std::size_t rows = a.size();
    const std::size_t cols = b.size();
    const std::size_t stride = cols + 1;
    std::vector<double> acc((rows + 1) * stride, kInf);
    acc[0] = 0.0;
    for (std::size_t i = 1; i <= rows; ++i) {
        const auto [lo, hi] = band_columns(i - 1, rows, cols, opt.band);
        for (std::size_t j = lo + 1; j <= hi; ++j) {
            const double c = local_cost(a[i - 1], b[j - 1], opt.cost);
            const double best = std::min(std::min(acc[(i - 1) * stride + j], acc[(i - 1) * stride + j - 1]),
                                         acc[i * stride + j - 1]);
            acc[i * stride + j] = c + best;
        }
    }

    WarpPath out;
    std::size_t i = rows;
    std::size_t j = cols;
    while (true) {
        out.pairs.emplace_back(i - 1, j - 1);
        if (i == 1 && j == 1) break;
        const double diag = (i > 1 && j > 1) ? acc[(i - 1) * stride + j - 1] : kInf;
        const double up = i > 1 ? acc[(i - 1) * stride + j] : kInf;
        const double left = j > 1 ? acc[i * stride + j - 1] : kInf;
        if (diag <= up && diag <= left) {
            --i;
            --j;
        } else if (up <= left) {
            --i;
        } else {
            --j;
        }
    }
    std::reverse(out.pairs.begin(), out.pairs.end());
    double cost = 0.0;
    for (const auto& [pi, pj] : out.pairs) cost += local_cost(a[pi], b[pj], opt.cost);
    out.cost = cost;
    return out;
}

DistanceMatrix distance_matrix(std::span<const VibrationSignature> sigs, const Options& opt) {
    if (sigs.empty()) throw Error(ErrorCode::Empty, "no signatures");
    DistanceMatrix m;
    m.n = sigs.size();
    m.cells.assign(m.n * m.n, 0.0);
    const std::size_t pairs = m.n * (m.n - 1) / 2;
    std::vector<std::pair<std::size_t, std::size_t>> index;
    index.reserve(pairs);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = i + 1; j < m.n; ++j) index.emplace_back(i, j);
    parallel_for(index.size(), [&](std::size_t p) {
        const auto [i, j] = index[p];
        const double d = distance(sigs[i].values, sigs[j].values, opt);
        m.cells[i * m.n + j] = d;
        m.cells[j * m.n + i] = d;
    });
    return m;
}

}  // namespace vibrotag::dtw
