#include "vibrotag/classifier.hpp"

#include <algorithm>
#include <numeric>

#include "vibrotag/error.hpp"
#include "vibrotag/parallel.hpp"
#include "vibrotag/rng.hpp"

namespace vibrotag {

namespace {

struct Neighbor {
    double distance;
    const std::string* label;
};

ClassificationResult vote(std::vector<Neighbor> all, std::size_t k) {
    std::sort(all.begin(), all.end(), [](const Neighbor& x, const Neighbor& y) {
        if (x.distance != y.distance) return x.distance < y.distance;
        return *x.label < *y.label;
    });
    const std::size_t kk = std::min(k, all.size());

    ClassificationResult r;
    std::map<std::string, double> summed;
    for (std::size_t i = 0; i < kk; ++i) {
        r.neighbor_labels.push_back(*all[i].label);
        r.neighbor_distances.push_back(all[i].distance);
        ++r.vote_counts[*all[i].label];
        summed[*all[i].label] += all[i].distance;
    }
    const std::string* best = nullptr;
    for (const auto& [label, count] : r.vote_counts) {
        if (best == nullptr) {
            best = &label;
            continue;
        }
        const std::size_t best_count = r.vote_counts.at(*best);
        // map order makes the lexicographic fallback implicit
        if (count > best_count || (count == best_count && summed[label] < summed[*best])) best = &label;
    }
    r.predicted_label = *best;
    return r;
}

void check_k(std::size_t k) {
    if (k == 0) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
}

ClassificationResult classify_serial(const SignatureDatabase& db, const VibrationSignature& query,
                                     std::size_t k, const dtw::Options& opt) {
    std::vector<Neighbor> all;
    all.reserve(db.entries.size());
    for (const auto& e : db.entries)
        all.push_back({dtw::distance(query.values, e.signature.values, opt), &e.label});
    return vote(std::move(all), k);
}

}  // namespace

std::uint32_t SignatureDatabase::sample_rate_hz() const {
    if (entries.empty()) throw Error(ErrorCode::EmptyDatabase, "database has no entries");
    return entries.front().signature.sample_rate_hz;
}

SignatureDatabase train(std::span<const LabeledSignature> samples, const ExtractionConfig& cfg) {
    if (samples.empty()) throw Error(ErrorCode::Empty, "no training samples");
    SignatureDatabase db;
    db.config = cfg;
    const std::uint32_t rate = samples.front().signature.sample_rate_hz;
    for (const auto& s : samples) {
        if (s.label.empty()) throw Error(ErrorCode::InvalidConfig, "empty label");
        if (s.signature.sample_rate_hz != rate)
            throw Error(ErrorCode::MixedSampleRates,
                        std::to_string(rate) + " Hz vs " + std::to_string(s.signature.sample_rate_hz) + " Hz");
        LabeledSignature entry = s;
        entry.signature.label = s.label;
        db.entries.push_back(std::move(entry));
    }
    return db;
}

ClassificationResult classify(const SignatureDatabase& db, const VibrationSignature& query,
                              std::size_t k, const dtw::Options& opt) {
    if (db.entries.empty()) throw Error(ErrorCode::EmptyDatabase, "database has no entries");
    check_k(k);
    std::vector<Neighbor> all(db.entries.size());
    parallel_for(db.entries.size(), [&](std::size_t i) {
        const auto& e = db.entries[i];
        all[i] = {dtw::distance(query.values, e.signature.values, opt), &e.label};
    });
    return vote(std::move(all), k);
}

std::vector<std::size_t> stratified_folds(std::span<const LabeledSignature> samples,
                                          std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw Error(ErrorCode::BadFoldCount, "need at least 2 folds");
    if (samples.empty()) throw Error(ErrorCode::TooFewSamples, "no samples");
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < samples.size(); ++i) by_class[samples[i].label].push_back(i);

    std::vector<std::size_t> fold(samples.size());
    std::size_t class_index = 0;
    std::size_t offset = 0;
    for (auto& [label, members] : by_class) {
        if (members.size() < folds)
            throw Error(ErrorCode::TooFewSamples, "class '" + label + "' has " +
                                                      std::to_string(members.size()) + " samples for " +
                                                      std::to_string(folds) + " folds");
        Rng rng(mix_seed(seed, class_index++));
        rng.shuffle(std::span<std::size_t>(members));
        for (std::size_t p = 0; p < members.size(); ++p) fold[members[p]] = (p + offset) % folds;
        offset = (offset + members.size()) % folds;
    }
    return fold;
}

EvalReport summarize_confusion(std::vector<std::string> labels,
                               std::vector<std::vector<std::size_t>> confusion, std::size_t folds) {
    EvalReport r;
    r.labels = std::move(labels);
    r.confusion = std::move(confusion);
    r.folds = folds;
    const std::size_t c = r.labels.size();
    std::size_t total = 0;
    std::size_t trace = 0;
    std::vector<std::size_t> row(c, 0);
    std::vector<std::size_t> col(c, 0);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const std::size_t v = r.confusion[i][j];
            total += v;
            row[i] += v;
            col[j] += v;
            if (i == j) trace += v;
        }
    r.total = total;
    r.mean_accuracy = total == 0 ? 0.0 : static_cast<double>(trace) / static_cast<double>(total);
    for (std::size_t i = 0; i < c; ++i) {
        const std::size_t tp = r.confusion[i][i];
        const std::size_t fn = row[i] - tp;
        const std::size_t fp = col[i] - tp;
        const std::size_t tn = total - tp - fn - fp;
        r.per_class_tpr[r.labels[i]] = row[i] == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        if (fp + tn == 0) {
            r.per_class_fpr[r.labels[i]] = 0.0;
            r.fpr_undefined.push_back(r.labels[i]);
        } else {
            r.per_class_fpr[r.labels[i]] = static_cast<double>(fp) / static_cast<double>(fp + tn);
        }
    }
    return r;
}

EvalReport cross_validate(std::span<const LabeledSignature> samples, std::size_t folds,
                          std::size_t k, std::uint64_t seed, const dtw::Options& opt) {
    check_k(k);
    const auto fold = stratified_folds(samples, folds, seed);

    std::vector<SignatureDatabase> dbs(folds);
    for (std::size_t f = 0; f < folds; ++f)
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (fold[i] != f) dbs[f].entries.push_back(samples[i]);

    std::vector<std::string> predicted(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        predicted[i] = classify_serial(dbs[fold[i]], samples[i].signature, k, opt).predicted_label;
    });

    std::map<std::string, std::size_t> axis;
    for (const auto& s : samples) axis.emplace(s.label, 0);
    std::vector<std::string> labels;
    for (auto& [label, index] : axis) {
        index = labels.size();
        labels.push_back(label);
    }
    std::vector<std::vector<std::size_t>> confusion(labels.size(), std::vector<std::size_t>(labels.size(), 0));
    for (std::size_t i = 0; i < samples.size(); ++i)
        ++confusion[axis.at(samples[i].label)][axis.at(predicted[i])];
    return summarize_confusion(std::move(labels), std::move(confusion), folds);
}

}  // namespace vibrotag
