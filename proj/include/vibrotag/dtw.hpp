#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vibrotag/signature.hpp"

namespace vibrotag::dtw {

enum class LocalCost { Absolute, Squared };

struct Options {
    LocalCost cost = LocalCost::Absolute;
    /// Sakoe-Chiba half-width around the rescaled diagonal; nullopt = none.
    std::optional<std::size_t> band;
};

struct WarpPath {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double cost = 0.0;
};

/// Minimum total local cost over monotone warp paths from (0,0) to
/// (len_a-1, len_b-1) with steps {(1,0),(0,1),(1,1)}. Two-row storage along
/// the shorter sequence. Throws Empty.
double distance(std::span<const double> a, std::span<const double> b, const Options& opt = {});

/// Full-matrix variant with backtracking. path.cost == distance(a, b).
WarpPath path(std::span<const double> a, std::span<const double> b, const Options& opt = {});

/// Row-major n x n symmetric matrix with zero diagonal.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> cells;

    double operator()(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
};

DistanceMatrix distance_matrix(std::span<const VibrationSignature> sigs, const Options& opt = {});

}  // namespace vibrotag::dtw
