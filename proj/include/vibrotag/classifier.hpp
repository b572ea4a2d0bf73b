#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vibrotag/config.hpp"
#include "vibrotag/dtw.hpp"
#include "vibrotag/signature.hpp"

namespace vibrotag {

inline constexpr std::uint32_t kDatabaseVersion = 1;
inline constexpr std::uint32_t kDefaultK = 5;

struct LabeledSignature {
    std::string label;
    VibrationSignature signature;

    friend bool operator==(const LabeledSignature&, const LabeledSignature&) = default;
};

/// The feature-location database: labelled exemplars plus the extraction
/// settings that produced them.
struct SignatureDatabase {
    std::vector<LabeledSignature> entries;
    ExtractionConfig config;
    std::uint32_t version = kDatabaseVersion;

    std::uint32_t sample_rate_hz() const;
    friend bool operator==(const SignatureDatabase&, const SignatureDatabase&) = default;
};

struct ClassificationResult {
    std::string predicted_label;
    std::vector<std::string> neighbor_labels;  // ascending distance
    std::vector<double> neighbor_distances;
    std::map<std::string, std::size_t> vote_counts;
};

struct EvalReport {
    std::vector<std::string> labels;           // sorted; confusion axis order
    std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
    std::map<std::string, double> per_class_tpr;
    std::map<std::string, double> per_class_fpr;
    std::vector<std::string> fpr_undefined;    // labels whose FP+TN was 0
    double mean_accuracy = 0.0;
    std::size_t folds = 0;
    std::size_t total = 0;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

SignatureDatabase train(std::span<const LabeledSignature> samples, const ExtractionConfig& cfg);

/// kNN majority vote under DTW. Neighbours are ordered by (distance, label)
/// so the result is independent of entry order. Vote ties go to the label
/// with the smallest summed neighbour distance, then the lexicographically
/// smallest label.
ClassificationResult classify(const SignatureDatabase& db, const VibrationSignature& query,
                              std::size_t k = kDefaultK, const dtw::Options& opt = {});

/// Stratified k-fold assignment: fold[i] for samples[i].
std::vector<std::size_t> stratified_folds(std::span<const LabeledSignature> samples,
                                          std::size_t folds, std::uint64_t seed);

EvalReport cross_validate(std::span<const LabeledSignature> samples, std::size_t folds,
                          std::size_t k, std::uint64_t seed, const dtw::Options& opt = {});

/// Builds the rate tables from a filled confusion matrix.
EvalReport summarize_confusion(std::vector<std::string> labels,
                               std::vector<std::vector<std::size_t>> confusion,
                               std::size_t folds);

// Binary persistence; layout documented in docs/file-formats.md.
std::vector<std::uint8_t> serialize_database(const SignatureDatabase& db);
SignatureDatabase deserialize_database(std::span<const std::uint8_t> bytes);
void save_db(const SignatureDatabase& db, const std::filesystem::path& path);
SignatureDatabase load_db(const std::filesystem::path& path);

std::vector<std::uint8_t> serialize_signature(const VibrationSignature& sig);
VibrationSignature deserialize_signature(std::span<const std::uint8_t> bytes);
void save_signature(const VibrationSignature& sig, const std::filesystem::path& path);
VibrationSignature load_signature(const std::filesystem::path& path);

}  // namespace vibrotag
