#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "vibrotag/classifier.hpp"
#include "vibrotag/config.hpp"
#include "vibrotag/dtw.hpp"
#include "vibrotag/error.hpp"
#include "vibrotag/kernels.hpp"
#include "vibrotag/parallel.hpp"
#include "vibrotag/rng.hpp"
#include "vibrotag/signal_io.hpp"
#include "vibrotag/signature.hpp"
#include "vibrotag/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace vibrotag::cli {

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string config_path;
    bool json = false;
    unsigned threads = 0;
    std::string simd;

    std::optional<std::uint32_t> n_rms;
    std::optional<std::uint32_t> window_len;
    std::optional<std::uint32_t> m_patterns;
    std::optional<std::uint32_t> max_windows;
    std::optional<double> minpro;
    std::optional<double> minstr;
    std::optional<double> delta_f;
    std::optional<double> band_low;
    std::optional<double> band_high;
    std::size_t k = kDefaultK;
    std::size_t folds = 4;
    double quiet_ratio = 2.0;
    double moderate_ratio = 6.0;
};

ExtractionConfig build_config(const GlobalOptions& g) {
    ExtractionConfig cfg;
    if (!g.config_path.empty()) {
        const auto kv = read_key_value_file(g.config_path);
        const auto used = apply_config_keys(cfg, kv);
        for (const auto& [key, value] : kv)
            if (!used.contains(key)) throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
    }
    if (g.n_rms) cfg.n_rms = *g.n_rms;
    if (g.window_len) cfg.window_len_s = *g.window_len;
    if (g.m_patterns) cfg.m_patterns = *g.m_patterns;
    if (g.max_windows) cfg.max_windows = *g.max_windows;
    if (g.minpro) cfg.minpro = *g.minpro;
    if (g.minstr) cfg.minstr = *g.minstr;
    if (g.delta_f) cfg.delta_f_hz = *g.delta_f;
    if (g.band_low) cfg.band_low_hz = *g.band_low;
    if (g.band_high) cfg.band_high_hz = *g.band_high;
    cfg.rng_seed = g.seed;
    cfg.validate();
    return cfg;
}

// Settings that change what a signature looks like; the window-order seed
// and window cap do not.
bool same_extraction(ExtractionConfig a, ExtractionConfig b) {
    a.rng_seed = b.rng_seed = 0;
    a.max_windows = b.max_windows = 0;
    return a == b;
}

bool has_extension(const fs::path& p, std::string_view ext) { return p.extension() == ext; }

std::vector<fs::path> files_in(const fs::path& dir, std::initializer_list<std::string_view> exts) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        for (auto ext : exts)
            if (has_extension(e.path(), ext)) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<std::string, std::string> split_mapping(const std::string& arg) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) return {"", arg};
    return {arg.substr(0, eq), arg.substr(eq + 1)};
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + path.string());
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::IoFailure, "cannot create directory " + dir.string());
}

struct ItemError {
    std::string code;
    std::string message;
    std::optional<std::size_t> windows_examined;
    std::optional<std::size_t> patterns_found;
};

ItemError describe(const Error& e) {
    ItemError out{std::string(to_string(e.code())), e.what(), std::nullopt, std::nullopt};
    if (const auto* nc = dynamic_cast<const NonConvergenceError*>(&e)) {
        out.windows_examined = nc->windows_examined();
        out.patterns_found = nc->patterns_found();
    }
    return out;
}

json to_json(const ItemError& e) {
    json j = {{"error", e.code}, {"message", e.message}};
    if (e.windows_examined) j["windows_examined"] = *e.windows_examined;
    if (e.patterns_found) j["patterns_found"] = *e.patterns_found;
    return j;
}

// A .vsig file is loaded as-is; anything else is decoded as WAV and run
// through the extractor.
VibrationSignature load_or_extract(const fs::path& path, const ExtractionConfig& cfg) {
    if (has_extension(path, ".vsig")) return load_signature(path);
    return extract_signature(load_wav(path), cfg);
}

std::string display_label(const VibrationSignature& sig, const fs::path& path) {
    return sig.label.empty() ? path.stem().string() : sig.label;
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
    std::vector<std::string> inputs;
    std::string out_dir = ".";
    std::string label;
};

int cmd_extract(const GlobalOptions& g, const ExtractArgs& a, std::ostream& out, std::ostream& err) {
    const ExtractionConfig cfg = build_config(g);
    std::vector<fs::path> inputs(a.inputs.begin(), a.inputs.end());
    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());

    std::set<std::string> stems;
    for (const auto& p : inputs) {
        if (!fs::is_regular_file(p)) {
            err << "error: " << p.string() << ": no such file\n";
            return kFailed;
        }
        if (!stems.insert(p.stem().string()).second) {
            err << "error: two inputs share the output name " << p.stem().string() << ".vsig\n";
            return kFailed;
        }
    }
    ensure_directory(a.out_dir);

    struct Result {
        std::optional<VibrationSignature> sig;
        std::optional<ItemError> error;
        fs::path output;
    };
    std::vector<Result> results(inputs.size());
    parallel_for(inputs.size(), [&](std::size_t i) {
        Result& r = results[i];
        try {
            VibrationSignature sig = extract_signature(load_wav(inputs[i]), cfg);
            sig.label = a.label;
            r.output = fs::path(a.out_dir) / (inputs[i].stem().string() + ".vsig");
            save_signature(sig, r.output);
            r.sig = std::move(sig);
        } catch (const Error& e) {
            r.error = describe(e);
        }
    });

    const NoiseThresholds thresholds{g.quiet_ratio, g.moderate_ratio};
    std::size_t failures = 0;
    json files = json::array();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const Result& r = results[i];
        json item = {{"path", inputs[i].string()}, {"ok", r.sig.has_value()}};
        if (r.sig) {
            const auto verdict = noise_verdict(*r.sig, cfg, thresholds);
            item["signature"] = r.output.string();
            item["f_hat_hz"] = r.sig->f_hat_hz;
            item["length"] = r.sig->values.size();
            item["patterns_used"] = r.sig->patterns_used;
            item["windows_examined"] = r.sig->windows_examined;
            item["expected_windows"] = expected_min_windows(*r.sig, cfg);
            item["verdict"] = to_string(verdict);
            if (!g.json)
                out << inputs[i].string() << ": f_hat=" << format_number(r.sig->f_hat_hz)
                    << " Hz patterns=" << r.sig->patterns_used << " windows=" << r.sig->windows_examined
                    << " verdict=" << to_string(verdict) << " -> " << r.output.string() << '\n';
        } else {
            ++failures;
            item.update(to_json(*r.error));
            const bool nonconv = r.error->code == to_string(ErrorCode::NonConvergence);
            item["verdict"] = nonconv ? to_string(NoiseVerdict::NonConvergent) : "error";
            if (!g.json) {
                out << inputs[i].string() << ": " << r.error->message;
                if (nonconv) out << " verdict=" << to_string(NoiseVerdict::NonConvergent);
                out << '\n';
            }
        }
        files.push_back(std::move(item));
    }
    if (g.json) out << json{{"command", "extract"}, {"files", files}, {"failures", failures}}.dump(2) << '\n';
    return failures == 0 ? kOk : kFailed;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::vector<std::string> inputs;
    std::string out;
};

int cmd_train(const GlobalOptions& g, const TrainArgs& a, std::ostream& out, std::ostream&) {
    const ExtractionConfig cfg = build_config(g);
    std::vector<LabeledSignature> samples;
    for (const auto& arg : a.inputs) {
        const auto [label, where] = split_mapping(arg);
        const fs::path path(where);
        std::vector<fs::path> files;
        if (fs::is_directory(path)) {
            files = files_in(path, {".vsig"});
            if (files.empty()) throw Error(ErrorCode::Empty, "no .vsig files in " + path.string());
        } else if (fs::is_regular_file(path)) {
            files.push_back(path);
        } else {
            throw Error(ErrorCode::IoFailure, path.string() + ": no such file or directory");
        }
        for (const auto& f : files) {
            VibrationSignature sig = load_signature(f);
            const std::string l = label.empty() ? sig.label : label;
            if (l.empty()) throw Error(ErrorCode::InvalidConfig, f.string() + " has no label; use label=path");
            samples.push_back({l, std::move(sig)});
        }
    }
    const SignatureDatabase db = train(samples, cfg);
    save_db(db, a.out);

    std::map<std::string, std::size_t> counts;
    for (const auto& e : db.entries) ++counts[e.label];
    if (g.json) {
        out << json{{"command", "train"}, {"database", a.out}, {"entries", db.entries.size()}, {"labels", counts}}.dump(2)
            << '\n';
    } else {
        out << "wrote " << a.out << ": " << db.entries.size() << " entries\n";
        for (const auto& [label, n] : counts) out << "  " << label << ": " << n << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
    std::string db;
    std::string query;
};

int cmd_classify(const GlobalOptions& g, const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
    const ExtractionConfig cfg = build_config(g);
    const SignatureDatabase db = load_db(a.db);
    std::vector<std::string> warnings;
    if (!same_extraction(cfg, db.config))
        warnings.emplace_back("extraction settings differ from those stored in the database");
    const VibrationSignature query = load_or_extract(a.query, cfg);
    if (!db.entries.empty() && query.sample_rate_hz != db.sample_rate_hz())
        warnings.emplace_back("query sample rate differs from the database");
    const ClassificationResult r = classify(db, query, g.k);

    if (g.json) {
        json neighbors = json::array();
        for (std::size_t i = 0; i < r.neighbor_labels.size(); ++i)
            neighbors.push_back({{"label", r.neighbor_labels[i]}, {"distance", r.neighbor_distances[i]}});
        out << json{{"command", "classify"},
                    {"query", a.query},
                    {"predicted_label", r.predicted_label},
                    {"k", g.k},
                    {"neighbors", neighbors},
                    {"votes", r.vote_counts},
                    {"warnings", warnings}}
                   .dump(2)
            << '\n';
    } else {
        for (const auto& w : warnings) err << "warning: " << w << '\n';
        out << "predicted: " << r.predicted_label << '\n';
        for (std::size_t i = 0; i < r.neighbor_labels.size(); ++i)
            out << "  " << (i + 1) << ' ' << r.neighbor_labels[i] << ' ' << format_number(r.neighbor_distances[i])
                << '\n';
        out << "votes:";
        for (const auto& [label, n] : r.vote_counts) out << ' ' << label << '=' << n;
        out << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::vector<std::string> inputs;
    std::string csv;
};

std::string confusion_csv(const EvalReport& r) {
    std::ostringstream os;
    os << csv_field("true\\predicted");
    for (const auto& l : r.labels) os << ',' << csv_field(l);
    os << "\r\n";
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        os << csv_field(r.labels[i]);
        for (std::size_t v : r.confusion[i]) os << ',' << v;
        os << "\r\n";
    }
    return os.str();
}

int cmd_eval(const GlobalOptions& g, const EvalArgs& a, std::ostream& out, std::ostream&) {
    const ExtractionConfig cfg = build_config(g);
    struct Item {
        std::string label;
        fs::path path;
    };
    std::vector<Item> items;
    for (const auto& arg : a.inputs) {
        const auto [label, where] = split_mapping(arg);
        if (label.empty()) throw Error(ErrorCode::InvalidConfig, "expected label=dir, got '" + arg + "'");
        if (!fs::is_directory(where)) throw Error(ErrorCode::IoFailure, where + ": not a directory");
        const auto files = files_in(where, {".wav", ".vsig"});
        if (files.empty()) throw Error(ErrorCode::Empty, "no .wav or .vsig files in " + where);
        for (const auto& f : files) items.push_back({label, f});
    }

    std::vector<std::optional<VibrationSignature>> sigs(items.size());
    std::vector<std::optional<ItemError>> errors(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        try {
            sigs[i] = load_or_extract(items[i].path, cfg);
        } catch (const Error& e) {
            errors[i] = describe(e);
        }
    });

    std::vector<LabeledSignature> samples;
    json failures = json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (sigs[i]) {
            samples.push_back({items[i].label, std::move(*sigs[i])});
        } else {
            json f = to_json(*errors[i]);
            f["path"] = items[i].path.string();
            failures.push_back(std::move(f));
        }
    }
    const EvalReport r = cross_validate(samples, g.folds, g.k, g.seed);
    if (!a.csv.empty()) write_text_file(a.csv, confusion_csv(r));

    if (g.json) {
        out << json{{"command", "eval"},
                    {"accuracy", r.mean_accuracy},
                    {"folds", r.folds},
                    {"k", g.k},
                    {"samples", r.total},
                    {"labels", r.labels},
                    {"confusion", r.confusion},
                    {"tpr", r.per_class_tpr},
                    {"fpr", r.per_class_fpr},
                    {"fpr_undefined", r.fpr_undefined},
                    {"failures", failures}}
                   .dump(2)
            << '\n';
    } else {
        out << "samples: " << r.total << "  folds: " << r.folds << "  k: " << g.k << '\n'
            << "accuracy: " << format_number(r.mean_accuracy) << '\n';
        for (const auto& l : r.labels) {
            out << "  " << l << ": TPR=" << format_number(r.per_class_tpr.at(l))
                << " FPR=" << format_number(r.per_class_fpr.at(l));
            if (std::find(r.fpr_undefined.begin(), r.fpr_undefined.end(), l) != r.fpr_undefined.end())
                out << " (undefined)";
            out << '\n';
        }
        for (const auto& f : failures)
            out << "failed: " << f["path"].get<std::string>() << ": " << f["message"].get<std::string>() << '\n';
    }
    return failures.empty() ? kOk : kFailed;
}

// ---------------------------------------------------------------------------

struct DistmatArgs {
    std::vector<std::string> inputs;
    std::string out;
};

int cmd_distmat(const GlobalOptions& g, const DistmatArgs& a, std::ostream& out, std::ostream&) {
    const ExtractionConfig cfg = build_config(g);
    std::vector<VibrationSignature> sigs(a.inputs.size());
    parallel_for(a.inputs.size(), [&](std::size_t i) { sigs[i] = load_or_extract(a.inputs[i], cfg); });
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < sigs.size(); ++i) labels.push_back(display_label(sigs[i], a.inputs[i]));

    const dtw::DistanceMatrix m = dtw::distance_matrix(sigs);
    std::ostringstream csv;
    csv << csv_field("");
    for (const auto& l : labels) csv << ',' << csv_field(l);
    csv << "\r\n";
    for (std::size_t i = 0; i < m.n; ++i) {
        csv << csv_field(labels[i]);
        for (std::size_t j = 0; j < m.n; ++j) csv << ',' << format_number(m(i, j));
        csv << "\r\n";
    }
    if (!a.out.empty()) write_text_file(a.out, csv.str());

    if (g.json) {
        json rows = json::array();
        for (std::size_t i = 0; i < m.n; ++i)
            rows.push_back(std::vector<double>(m.cells.begin() + static_cast<std::ptrdiff_t>(i * m.n),
                                               m.cells.begin() + static_cast<std::ptrdiff_t>((i + 1) * m.n)));
        out << json{{"command", "distmat"}, {"labels", labels}, {"matrix", rows}}.dump(2) << '\n';
    } else if (a.out.empty()) {
        out << csv.str();
    } else {
        out << "wrote " << a.out << ": " << m.n << " x " << m.n << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
    std::vector<std::string> models;
    std::size_t count = 1;
    std::string out_dir = ".";
    double duration_s = 3.0;
    std::uint32_t sample_rate_hz = kDefaultSampleRateHz;
};

json truth_json(const synth::SurfaceModel& m, const synth::GroundTruth& t, double duration_s,
                std::uint32_t sample_rate_hz) {
    return {{"label", m.label},
            {"seed", m.seed},
            {"f_nominal_hz", m.f_nominal_hz},
            {"jitter_sigma_hz", m.jitter_sigma_hz},
            {"noise_sigma", m.noise_sigma},
            {"transient_rate_hz", m.transient_rate_hz},
            {"transient_gain", m.transient_gain},
            {"transient_ms", m.transient_ms},
            {"amplitude", m.amplitude},
            {"duration_s", duration_s},
            {"sample_rate_hz", sample_rate_hz},
            {"shape", t.shape},
            {"cycle_starts", t.cycle_starts},
            {"cycle_lengths", t.cycle_lengths},
            {"cycle_jitter_hz", t.cycle_jitter_hz},
            {"transient_count", t.transient_count},
            {"clipped_samples", t.clipped_samples}};
}

int cmd_synth(const GlobalOptions& g, const SynthArgs& a, std::ostream& out, std::ostream&) {
    std::vector<synth::SurfaceModel> models;
    std::set<std::string> labels;
    for (std::size_t i = 0; i < a.models.size(); ++i) {
        synth::SurfaceModel m = synth::load_model(a.models[i]);
        if (m.label.empty()) m.label = "model" + std::to_string(i);
        if (!labels.insert(m.label).second) throw Error(ErrorCode::BadModel, "duplicate label '" + m.label + "'");
        models.push_back(std::move(m));
    }
    ensure_directory(a.out_dir);

    struct Job {
        synth::SurfaceModel model;
        fs::path wav;
        fs::path truth;
    };
    std::vector<Job> jobs;
    for (std::size_t m = 0; m < models.size(); ++m)
        for (std::size_t r = 0; r < a.count; ++r) {
            synth::SurfaceModel model = models[m];
            model.seed = mix_seed(mix_seed(g.seed, m, r), models[m].seed);
            char index[16];
            std::snprintf(index, sizeof index, "%03zu", r);
            const std::string stem = model.label + "_" + index;
            jobs.push_back({std::move(model), fs::path(a.out_dir) / (stem + ".wav"),
                            fs::path(a.out_dir) / (stem + ".truth.json")});
        }

    parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& job = jobs[i];
        const synth::Generated gen = synth::generate(job.model, a.duration_s, a.sample_rate_hz);
        save_wav(gen.recording, job.wav);
        write_text_file(job.truth, truth_json(job.model, gen.truth, a.duration_s, a.sample_rate_hz).dump(2) + "\n");
    });

    if (g.json) {
        json files = json::array();
        for (const auto& j : jobs)
            files.push_back({{"label", j.model.label}, {"wav", j.wav.string()}, {"truth", j.truth.string()}});
        out << json{{"command", "synth"}, {"files", files}}.dump(2) << '\n';
    } else {
        for (const auto& j : jobs) out << j.wav.string() << '\n';
    }
    return kOk;
}

}  // namespace

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

std::string format_number(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"vibrotag: vibration signature extraction and surface recognition"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for window order, folds and synthesis");
    app.add_option("--config", g.config_path, "key = value file of extraction settings");
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
    app.add_option("--simd", g.simd, "Kernel backend: scalar, avx2, neon");
    app.add_option("--n-rms", g.n_rms, "RMS envelope window (samples)");
    app.add_option("--window-len", g.window_len, "Analysis window (samples)");
    app.add_option("--m-patterns", g.m_patterns, "Patterns per signature");
    app.add_option("--max-windows", g.max_windows, "Window cap before giving up");
    app.add_option("--minpro", g.minpro, "Minimum peak prominence");
    app.add_option("--minstr", g.minstr, "Minimum peak strength (x median)");
    app.add_option("--delta-f", g.delta_f, "Repetition frequency slack (Hz)");
    app.add_option("--band-low", g.band_low, "Band-pass lower edge (Hz)");
    app.add_option("--band-high", g.band_high, "Band-pass upper edge (Hz)");
    app.add_option("--k", g.k, "Neighbours in the vote")->check(CLI::PositiveNumber);
    app.add_option("--folds", g.folds, "Cross-validation folds");
    app.add_option("--quiet-ratio", g.quiet_ratio, "Noise verdict: quiet up to this window ratio");
    app.add_option("--moderate-ratio", g.moderate_ratio, "Noise verdict: moderate up to this window ratio");

    ExtractArgs extract_args;
    auto* extract = app.add_subcommand("extract", "Extract signatures from WAV recordings");
    extract->add_option("wavs", extract_args.inputs, "PCM16 mono WAV files")->required();
    extract->add_option("--out-dir", extract_args.out_dir, "Where to write .vsig files");
    extract->add_option("--label", extract_args.label, "Label stored in each signature");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Build a signature database");
    train_cmd->add_option("inputs", train_args.inputs, "label=dir, label=file.vsig or file.vsig")->required();
    train_cmd->add_option("--out", train_args.out, "Database file")->required();

    ClassifyArgs classify_args;
    auto* classify_cmd = app.add_subcommand("classify", "Recognise the surface of a query");
    classify_cmd->add_option("--db", classify_args.db, "Database file")->required();
    classify_cmd->add_option("query", classify_args.query, "Query WAV or .vsig")->required();

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Stratified k-fold cross-validation");
    eval->add_option("inputs", eval_args.inputs, "label=dir of .wav/.vsig files")->required();
    eval->add_option("--csv", eval_args.csv, "Write the confusion matrix as CSV");

    DistmatArgs distmat_args;
    auto* distmat = app.add_subcommand("distmat", "Pairwise DTW distance matrix");
    distmat->add_option("inputs", distmat_args.inputs, ".vsig or WAV files")->required();
    distmat->add_option("--out", distmat_args.out, "CSV path (default: stdout)");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic recordings with ground truth");
    synth_cmd->add_option("--model", synth_args.models, "Model file (repeatable)")->required();
    synth_cmd->add_option("--count", synth_args.count, "Recordings per model");
    synth_cmd->add_option("--out-dir", synth_args.out_dir, "Output directory");
    synth_cmd->add_option("--duration", synth_args.duration_s, "Seconds per recording");
    synth_cmd->add_option("--sample-rate", synth_args.sample_rate_hz, "Sample rate (Hz)");

    std::vector<const char*> argv{"vibrotag"};
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    set_thread_count(g.threads);
    if (!g.simd.empty()) {
        kernels::Backend b{};
        if (!kernels::parse_backend(g.simd, b) || !kernels::set_backend(b)) {
            err << "error: SIMD backend '" << g.simd << "' is not available\n";
            return kUsage;
        }
    }

    try {
        if (*extract) return cmd_extract(g, extract_args, out, err);
        if (*train_cmd) return cmd_train(g, train_args, out, err);
        if (*classify_cmd) return cmd_classify(g, classify_args, out, err);
        if (*eval) return cmd_eval(g, eval_args, out, err);
        if (*distmat) return cmd_distmat(g, distmat_args, out, err);
        if (*synth_cmd) return cmd_synth(g, synth_args, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFailed;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kUsage;
}

}  // namespace vibrotag::cli
