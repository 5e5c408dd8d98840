// Command-line driver for the co-pyrolysis surrogate toolkit: data
// validation and synthesis, feature/PCA export, descriptive statistics,
// model training, cross-validation, PSO hyperparameter tuning and
// multi-objective process optimization.
//
// Every non-trivial command writes a run manifest (<out>.manifest.json)
// with the resolved configuration, seeds and input hashes, and all outputs
// are written atomically (temp file + rename).
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "copyro/analyze.hpp"
#include "copyro/config.hpp"
#include "copyro/dataset.hpp"
#include "copyro/errors.hpp"
#include "copyro/evaluate.hpp"
#include "copyro/evolve.hpp"
#include "copyro/model_io.hpp"
#include "copyro/rng.hpp"
#include "copyro/tune.hpp"
#include "json.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using copyro::ToolConfig;
using nlohmann::json;

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw copyro::Error("cannot open " + path);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i)
            h = (h ^ static_cast<unsigned char>(chunk[i])) * 0x100000001B3ULL;
        if (!in) break;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw copyro::Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw copyro::Error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, target);
}

json config_to_json(const ToolConfig& cfg) {
    json j;
    j["threads"] = cfg.threads;
    j["pca.threshold"] = cfg.pipeline.variance_threshold;
    j["pipeline.standardize"] = cfg.pipeline.standardize;
    j["cv.k"] = cfg.cv_k;
    j["pso"] = {{"swarm_size", cfg.pso.swarm_size},
                {"iterations", cfg.pso.iterations},
                {"inertia", cfg.pso.inertia},
                {"cognitive", cfg.pso.cognitive},
                {"social", cfg.pso.social},
                {"velocity_cap", cfg.pso.velocity_cap}};
    j["mopso"] = {{"swarm_size", cfg.mopso.swarm_size},
                  {"iterations", cfg.mopso.iterations},
                  {"inertia", cfg.mopso.inertia},
                  {"cognitive", cfg.mopso.cognitive},
                  {"social", cfg.mopso.social},
                  {"velocity_cap", cfg.mopso.velocity_cap},
                  {"archive_capacity", cfg.mopso.archive_capacity},
                  {"turbulence_prob", cfg.mopso.turbulence_prob}};
    j["tune"] = {{"swarm_size", cfg.tune_swarm},
                 {"iterations", cfg.tune_iterations},
                 {"k", cfg.tune_k}};
    return j;
}

// run context shared by the subcommands: resolved config, seed, hashes
struct RunContext {
    std::string command;
    ToolConfig config;
    std::uint64_t seed = 0;
    json extras;
    std::vector<std::pair<std::string, std::string>> input_hashes;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void note_input(const std::string& path) { input_hashes.emplace_back(path, hash_file(path)); }

    void write_output(const std::string& path, const std::string& content) {
        atomic_write(path, content);
        outputs.push_back(path);
    }

    void finish() {
        if (outputs.empty()) return;
        json manifest;
        manifest["command"] = command;
        manifest["artifact_version"] = kVersion;
        manifest["seed"] = seed;
        manifest["resolved_config"] = config_to_json(config);
        for (auto& [k, v] : extras.items()) manifest["resolved_config"][k] = v;
        json hashes = json::object();
        for (const auto& [path, hash] : input_hashes) hashes[path] = hash;
        manifest["input_hashes"] = hashes;
        manifest["outputs"] = outputs;
        manifest["duration_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        atomic_write(outputs.front() + ".manifest.json", manifest.dump(2) + "\n");
    }
};

json spec_to_json(const copyro::RegressorSpec& spec) {
    json j;
    j["format"] = "copyro-spec";
    j["version"] = 1;
    j["kind"] = copyro::to_string(spec.kind);
    j["params"] = spec.params;
    j["seed"] = spec.seed;
    return j;
}

copyro::RegressorSpec spec_from_json(const json& j) {
    copyro::RegressorSpec spec;
    spec.kind = copyro::regressor_kind_from_string(j.at("kind").get<std::string>());
    spec.params = j.at("params").get<std::map<std::string, double>>();
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
}

copyro::RegressorSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw copyro::Error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw copyro::ConfigTypeError("invalid JSON in " + path + ": " + e.what());
    }
    return spec_from_json(j);
}

json metric_to_json(const copyro::MetricSet& m) {
    return json{{"r2", m.r2}, {"mae", m.mae}, {"rmse", m.rmse}};
}

std::string cv_report_to_json(const copyro::CvReport& report) {
    json j;
    j["format"] = "copyro-cv-report";
    j["version"] = 1;
    j["model"] = copyro::to_string(report.kind());
    j["specs"] = {spec_to_json(report.specs[0]), spec_to_json(report.specs[1]),
                  spec_to_json(report.specs[2])};
    j["fold_plan"] = {{"k", report.plan.k},
                      {"seed", report.plan.seed},
                      {"fingerprint", report.plan.fingerprint()}};
    const char* outputs[3] = {"oil", "char", "syngas"};
    json folds = json::array();
    for (const auto& fold : report.folds) {
        json f;
        for (int o = 0; o < 3; ++o) {
            f[outputs[o]] = {{"train", metric_to_json(fold.train[o])},
                             {"test", metric_to_json(fold.test[o])},
                             {"train_raw", metric_to_json(fold.train_raw[o])},
                             {"test_raw", metric_to_json(fold.test_raw[o])}};
        }
        folds.push_back(f);
    }
    j["folds"] = folds;
    for (int o = 0; o < 3; ++o) {
        j["mean"][outputs[o]] = {{"train", metric_to_json(report.mean_train[o])},
                                 {"test", metric_to_json(report.mean_test[o])},
                                 {"train_raw", metric_to_json(report.mean_train_raw[o])},
                                 {"test_raw", metric_to_json(report.mean_test_raw[o])}};
        j["sd"][outputs[o]] = {{"train", metric_to_json(report.sd_train[o])},
                               {"test", metric_to_json(report.sd_test[o])}};
    }
    j["mean_test_r2_overall"] = report.mean_test_r2_overall();
    j["mean_test_rmse_overall"] = report.mean_test_rmse_overall();
    return j.dump(2) + "\n";
}

std::string cv_folds_csv(const copyro::CvReport& report) {
    std::ostringstream os;
    os << "fold,output,phase,r2,mae,rmse\n";
    const char* outputs[3] = {"oil", "char", "syngas"};
    for (std::size_t f = 0; f < report.folds.size(); ++f) {
        for (int o = 0; o < 3; ++o) {
            const auto& tr = report.folds[f].train[o];
            const auto& te = report.folds[f].test[o];
            os << (f + 1) << ',' << outputs[o] << ",train," << format_number(tr.r2) << ','
               << format_number(tr.mae) << ',' << format_number(tr.rmse) << '\n';
            os << (f + 1) << ',' << outputs[o] << ",test," << format_number(te.r2) << ','
               << format_number(te.mae) << ',' << format_number(te.rmse) << '\n';
        }
    }
    return os.str();
}

copyro::Bounds load_bounds_file(const std::string& path, const copyro::FeaturePipeline& pipeline) {
    std::ifstream in(path);
    if (!in) throw copyro::Error("cannot open " + path);
    copyro::Bounds bounds;
    bounds.lo = pipeline.raw_input_lo;
    bounds.hi = pipeline.raw_input_hi;
    std::string line;
    if (!std::getline(in, line)) throw copyro::EmptyDataset("bounds file has no header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "column,lo,hi")
        throw copyro::MissingColumn("bounds file header must be 'column,lo,hi'");
    const auto& names = copyro::input_column_names();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string column, lo_s, hi_s;
        std::getline(ls, column, ',');
        std::getline(ls, lo_s, ',');
        std::getline(ls, hi_s, ',');
        int idx = -1;
        for (int c = 0; c < copyro::kInputCount; ++c)
            if (names[c] == column) idx = c;
        if (idx < 0)
            throw copyro::MissingColumn("bounds line " + std::to_string(lineno) +
                                        ": unknown column '" + column + "'");
        try {
            bounds.lo[idx] = std::stod(lo_s);
            bounds.hi[idx] = std::stod(hi_s);
        } catch (const std::exception&) {
            throw copyro::MalformedNumber("bounds line " + std::to_string(lineno) +
                                          ": cannot parse lo/hi");
        }
    }
    return bounds;
}

// flag overrides land on top of config-file values
struct CommonFlags {
    std::string config_path;
    int threads = -1;

    ToolConfig resolve() const {
        ToolConfig cfg =
            config_path.empty() ? ToolConfig{} : copyro::load_config_file(config_path);
        if (threads > 0) cfg.threads = threads;
        return cfg;
    }
};

int run_cli(int argc, char** argv) {
    CLI::App app{"co-pyrolysis yield surrogate toolkit"};
    app.set_version_flag("--version", std::string("copyro ") + kVersion);
    app.require_subcommand(1);

    CommonFlags common;
    app.add_option("--config", common.config_path, "key = value configuration file");
    app.add_option("--threads", common.threads, "worker thread cap (results are invariant)");

    // ---- validate ----
    auto* validate = app.add_subcommand("validate", "check a dataset CSV against the schema");
    std::string validate_input;
    validate->add_option("--input", validate_input, "dataset CSV")->required();
    validate->callback([&] {
        const auto records = copyro::load_csv_file(validate_input);
        std::cout << records.size() << " records, 0 violations\n";
    });

    // ---- stats ----
    auto* stats = app.add_subcommand("stats", "per-column quantile summaries");
    std::string stats_input, stats_out;
    stats->add_option("--input", stats_input, "dataset CSV")->required();
    stats->add_option("--out", stats_out, "output CSV")->required();
    stats->callback([&] {
        RunContext ctx{"stats", common.resolve()};
        ctx.note_input(stats_input);
        const auto records = copyro::load_csv_file(stats_input);
        std::ostringstream os;
        os << "column,count,min,q1,median,q3,max,mean\n";
        auto emit = [&](const std::string& name, const copyro::QuantileSummary& s) {
            os << name << ',' << s.count << ',' << format_number(s.min) << ','
               << format_number(s.q1) << ',' << format_number(s.median) << ','
               << format_number(s.q3) << ',' << format_number(s.max) << ','
               << format_number(s.mean) << '\n';
        };
        for (int c = 0; c < copyro::kInputCount; ++c)
            emit(copyro::input_column_names()[c],
                 copyro::summarize(records, copyro::input_selector(c)));
        const bool any_yields =
            std::any_of(records.begin(), records.end(),
                        [](const copyro::CoPyrolysisRecord& r) { return r.yields.has_value(); });
        if (any_yields)
            for (int c = 0; c < copyro::kYieldCount; ++c)
                emit(copyro::yield_column_names()[c],
                     copyro::summarize(records, copyro::yield_selector(c)));
        ctx.write_output(stats_out, os.str());
        ctx.finish();
    });

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark dataset");
    std::size_t synth_n = 300;
    std::uint64_t synth_seed = 0;
    double synth_noise = 0.02;
    std::string synth_out;
    synth->add_option("--n", synth_n, "record count");
    synth->add_option("--seed", synth_seed, "root seed");
    synth->add_option("--noise-sd", synth_noise, "yield noise as a fraction of the 0-100 scale");
    synth->add_option("--out", synth_out, "output CSV")->required();
    synth->callback([&] {
        RunContext ctx{"synth", common.resolve(), synth_seed};
        ctx.extras = {{"n", synth_n}, {"noise_sd", synth_noise}};
        const auto records = copyro::synthesize_dataset(synth_n, synth_seed, synth_noise);
        ctx.write_output(synth_out, copyro::write_csv_string(records));
        ctx.finish();
    });

    // ---- features ----
    auto* features = app.add_subcommand(
        "features", "emit the constructed 35-column matrix and PCA scores");
    std::string features_input, features_out, scores_out, explain_out;
    double features_threshold = -1.0;
    bool features_raw = false;
    features->add_option("--input", features_input, "dataset CSV")->required();
    features->add_option("--out-features", features_out, "constructed matrix CSV");
    features->add_option("--out-scores", scores_out, "PCA score CSV");
    features->add_option("--explain", explain_out, "explained-variance JSON");
    features->add_option("--threshold", features_threshold, "PCA variance threshold");
    features->add_flag("--no-standardize", features_raw, "feed raw columns to PCA");
    features->callback([&] {
        RunContext ctx{"features", common.resolve()};
        if (features_threshold > 0) ctx.config.pipeline.variance_threshold = features_threshold;
        if (features_raw) ctx.config.pipeline.standardize = false;
        ctx.extras = {{"pca.threshold", ctx.config.pipeline.variance_threshold},
                      {"pipeline.standardize", ctx.config.pipeline.standardize}};
        ctx.note_input(features_input);
        const auto records = copyro::load_csv_file(features_input);
        const auto cf = copyro::construct_feature_matrix(records);

        if (!features_out.empty()) {
            std::ostringstream os;
            os << "id";
            for (const auto& label : cf.column_labels) os << ',' << label;
            os << '\n';
            for (std::size_t i = 0; i < records.size(); ++i) {
                os << records[i].id;
                for (int j = 0; j < copyro::kFeatureCount; ++j)
                    os << ',' << format_number(cf.matrix(static_cast<Eigen::Index>(i), j));
                os << '\n';
            }
            ctx.write_output(features_out, os.str());
        }
        if (!scores_out.empty() || !explain_out.empty()) {
            Eigen::MatrixXd staged = cf.matrix;
            if (ctx.config.pipeline.standardize) {
                const auto st = copyro::fit_standardizer(cf.matrix);
                staged = copyro::apply_standardizer(st, cf.matrix);
            }
            const auto pca = copyro::fit_pca(staged, ctx.config.pipeline.variance_threshold);
            if (!scores_out.empty()) {
                const Eigen::MatrixXd scores = copyro::project_rows(pca, staged);
                std::ostringstream os;
                os << "id";
                for (int j = 1; j <= pca.retained(); ++j) os << ",pc" << j;
                os << '\n';
                for (std::size_t i = 0; i < records.size(); ++i) {
                    os << records[i].id;
                    for (int j = 0; j < pca.retained(); ++j)
                        os << ',' << format_number(scores(static_cast<Eigen::Index>(i), j));
                    os << '\n';
                }
                ctx.write_output(scores_out, os.str());
            }
            if (!explain_out.empty()) {
                json j;
                j["retained"] = pca.retained();
                j["explained_variance_ratio"] = std::vector<double>(
                    pca.explained_variance_ratio.data(),
                    pca.explained_variance_ratio.data() + pca.explained_variance_ratio.size());
                j["eigenvalues"] = std::vector<double>(
                    pca.eigenvalues.data(), pca.eigenvalues.data() + pca.eigenvalues.size());
                ctx.write_output(explain_out, j.dump(2) + "\n");
            }
        }
        ctx.finish();
    });

    // ---- correlate ----
    auto* correlate = app.add_subcommand("correlate", "Spearman matrix of inputs and yields");
    std::string correlate_input, correlate_out;
    correlate->add_option("--input", correlate_input, "dataset CSV")->required();
    correlate->add_option("--out", correlate_out, "output CSV")->required();
    correlate->callback([&] {
        RunContext ctx{"correlate", common.resolve()};
        ctx.note_input(correlate_input);
        const auto records = copyro::load_csv_file(correlate_input);
        const auto cm = copyro::correlation_matrix(records);
        std::ostringstream os;
        os << "column";
        for (const auto& label : cm.labels) os << ',' << label;
        os << '\n';
        for (std::size_t a = 0; a < cm.labels.size(); ++a) {
            os << cm.labels[a];
            for (std::size_t b = 0; b < cm.labels.size(); ++b) {
                os << ',';
                if (cm.defined[a][b])
                    os << format_number(
                        cm.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
                else
                    os << "nan";
            }
            os << '\n';
        }
        ctx.write_output(correlate_out, os.str());
        ctx.finish();
    });

    // ---- ratios ----
    auto* ratios = app.add_subcommand("ratios", "van Krevelen molar ratios per feedstock");
    std::string ratios_input, ratios_out, ratios_which = "both";
    ratios->add_option("--input", ratios_input, "dataset CSV")->required();
    ratios->add_option("--out", ratios_out, "output CSV")->required();
    ratios->add_option("--which", ratios_which, "biomass|polymer|both");
    ratios->callback([&] {
        RunContext ctx{"ratios", common.resolve()};
        ctx.extras = {{"which", ratios_which}};
        if (ratios_which != "biomass" && ratios_which != "polymer" && ratios_which != "both")
            throw copyro::ConfigTypeError("--which must be biomass, polymer or both");
        ctx.note_input(ratios_input);
        const auto records = copyro::load_csv_file(ratios_input);
        std::ostringstream os;
        os << "id,feedstock,o_c,n_c,h_c_eff\n";
        auto emit = [&](const copyro::CoPyrolysisRecord& rec, const char* role,
                        const copyro::FeedstockComposition& comp) {
            const auto pt = copyro::molar_ratios(comp);
            os << rec.id << ',' << role << ',' << format_number(pt.o_c) << ','
               << format_number(pt.n_c) << ',' << format_number(pt.h_c_eff) << '\n';
        };
        for (const auto& rec : records) {
            if (ratios_which != "polymer") emit(rec, "biomass", rec.biomass);
            if (ratios_which != "biomass") emit(rec, "polymer", rec.polymer);
        }
        ctx.write_output(ratios_out, os.str());
        ctx.finish();
    });

    // ---- train ----
    auto* train = app.add_subcommand("train", "fit the pipeline and three per-output models");
    std::string train_input, train_out, train_model = "gpr", train_spec_path;
    std::uint64_t train_seed = 0;
    bool train_tune = false;
    train->add_option("--input", train_input, "labeled dataset CSV")->required();
    train->add_option("--out", train_out, "bundle JSON")->required();
    train->add_option("--model", train_model, "gpr|elm|mlp|svr|gam");
    train->add_option("--spec", train_spec_path, "hyperparameter spec JSON");
    train->add_option("--seed", train_seed, "root seed");
    train->add_flag("--tune", train_tune, "PSO-tune hyperparameters first");
    train->callback([&] {
        RunContext ctx{"train", common.resolve(), train_seed};
        ctx.note_input(train_input);
        const auto kind = copyro::regressor_kind_from_string(train_model);
        const auto records = copyro::load_csv_file(train_input);
        copyro::RegressorSpec spec = train_spec_path.empty()
                                         ? copyro::default_spec(kind, 12)
                                         : load_spec_file(train_spec_path);
        if (!train_spec_path.empty()) ctx.note_input(train_spec_path);
        spec.kind = kind;
        std::array<copyro::RegressorSpec, 3> specs = {spec, spec, spec};
        if (train_tune) {
            copyro::TuneConfig tc;
            tc.pso = ctx.config.pso;
            tc.pso.swarm_size = ctx.config.tune_swarm;
            tc.pso.iterations = ctx.config.tune_iterations;
            tc.cv_k = ctx.config.tune_k;
            tc.cv_seed = copyro::Rng(train_seed).substream("tune-folds").next_u64();
            tc.cv_options.pipeline = ctx.config.pipeline;
            for (int output = 0; output < 3; ++output) {
                tc.pso.seed = copyro::Rng(train_seed)
                                  .substream("tune", static_cast<std::uint64_t>(output))
                                  .next_u64();
                specs[static_cast<std::size_t>(output)] =
                    copyro::tune_hyperparameters(kind, records, tc, nullptr, output).spec;
            }
        }
        for (int output = 0; output < 3; ++output)
            specs[static_cast<std::size_t>(output)].seed =
                copyro::Rng(train_seed).substream("train").next_u64();
        const auto bundle = copyro::train_bundle(kind, specs, records, ctx.config.pipeline);
        ctx.extras = {{"model", train_model},
                      {"tuned", train_tune},
                      {"specs", {spec_to_json(specs[0]), spec_to_json(specs[1]),
                                 spec_to_json(specs[2])}}};
        ctx.write_output(train_out, copyro::bundle_to_json(bundle).dump(2) + "\n");
        ctx.finish();
    });

    // ---- cv ----
    auto* cv = app.add_subcommand("cv", "k-fold cross-validation report");
    std::string cv_input, cv_out, cv_folds_out, cv_model = "gpr", cv_spec_path;
    int cv_k = -1;
    std::uint64_t cv_seed = 0;
    bool cv_fit_on_all = false;
    bool cv_tune = false;
    cv->add_option("--input", cv_input, "labeled dataset CSV")->required();
    cv->add_option("--out", cv_out, "report JSON")->required();
    cv->add_option("--out-folds", cv_folds_out, "per-fold metric CSV");
    cv->add_option("--model", cv_model, "gpr|elm|mlp|svr|gam");
    cv->add_option("--spec", cv_spec_path, "hyperparameter spec JSON");
    cv->add_option("--k", cv_k, "fold count");
    cv->add_option("--seed", cv_seed, "fold shuffle seed");
    cv->add_flag("--fit-on-all", cv_fit_on_all,
                 "fit the pipeline once on every record instead of per fold");
    cv->add_flag("--tune", cv_tune,
                 "nested tuning: PSO search on each fold's training partition");
    cv->callback([&] {
        RunContext ctx{"cv", common.resolve(), cv_seed};
        ctx.note_input(cv_input);
        const auto kind = copyro::regressor_kind_from_string(cv_model);
        const auto records = copyro::load_csv_file(cv_input);
        copyro::RegressorSpec spec = cv_spec_path.empty() ? copyro::default_spec(kind, 12)
                                                          : load_spec_file(cv_spec_path);
        if (!cv_spec_path.empty()) ctx.note_input(cv_spec_path);
        spec.kind = kind;
        spec.seed = cv_seed;
        copyro::CvOptions options;
        options.fit_on_all = cv_fit_on_all;
        options.pipeline = ctx.config.pipeline;
        options.threads = ctx.config.threads;
        const int k = cv_k > 0 ? cv_k : ctx.config.cv_k;
        ctx.extras = {{"model", cv_model},
                      {"k", k},
                      {"fit_on_all", cv_fit_on_all},
                      {"tune", cv_tune},
                      {"spec", spec_to_json(spec)}};
        if (cv_tune) {
            copyro::TuneConfig nested;
            nested.pso = ctx.config.pso;
            nested.pso.swarm_size = ctx.config.tune_swarm;
            nested.pso.iterations = ctx.config.tune_iterations;
            nested.pso.seed = copyro::Rng(cv_seed).substream("nested").next_u64();
            nested.cv_k = ctx.config.tune_k;
            nested.cv_seed = copyro::Rng(cv_seed).substream("nested-folds").next_u64();
            nested.cv_options.pipeline = ctx.config.pipeline;
            const auto tuned =
                copyro::cross_validate_tuned(kind, records, k, cv_seed, nested, options);
            nlohmann::json j = nlohmann::json::parse(cv_report_to_json(tuned.report));
            nlohmann::json fold_specs = nlohmann::json::array();
            for (const auto& fs : tuned.fold_specs)
                fold_specs.push_back({spec_to_json(fs[0]), spec_to_json(fs[1]),
                                      spec_to_json(fs[2])});
            j["fold_specs"] = fold_specs;
            ctx.write_output(cv_out, j.dump(2) + "\n");
            if (!cv_folds_out.empty())
                ctx.write_output(cv_folds_out, cv_folds_csv(tuned.report));
        } else {
            const auto report = copyro::cross_validate(spec, records, k, cv_seed, options);
            ctx.write_output(cv_out, cv_report_to_json(report));
            if (!cv_folds_out.empty()) ctx.write_output(cv_folds_out, cv_folds_csv(report));
        }
        ctx.finish();
    });

    // ---- tune ----
    auto* tune = app.add_subcommand("tune", "PSO hyperparameter search");
    std::string tune_input, tune_out, tune_model = "gpr", tune_output = "mean";
    int tune_k = -1, tune_swarm = -1, tune_iters = -1;
    std::uint64_t tune_seed = 0;
    tune->add_option("--input", tune_input, "labeled dataset CSV")->required();
    tune->add_option("--out", tune_out, "tuned spec JSON")->required();
    tune->add_option("--model", tune_model, "gpr|elm|mlp|svr|gam");
    tune->add_option("--k", tune_k, "fold count of the tuning objective");
    tune->add_option("--swarm", tune_swarm, "swarm size");
    tune->add_option("--iters", tune_iters, "PSO iterations");
    tune->add_option("--seed", tune_seed, "root seed");
    tune->add_option("--output", tune_output, "oil|char|syngas|mean tuning target");
    tune->callback([&] {
        RunContext ctx{"tune", common.resolve(), tune_seed};
        ctx.note_input(tune_input);
        const auto kind = copyro::regressor_kind_from_string(tune_model);
        const auto records = copyro::load_csv_file(tune_input);
        copyro::TuneConfig tc;
        tc.pso = ctx.config.pso;
        tc.pso.swarm_size = tune_swarm > 0 ? tune_swarm : ctx.config.tune_swarm;
        tc.pso.iterations = tune_iters > 0 ? tune_iters : ctx.config.tune_iterations;
        tc.pso.seed = copyro::Rng(tune_seed).substream("tune").next_u64();
        tc.cv_k = tune_k > 0 ? tune_k : ctx.config.tune_k;
        tc.cv_seed = copyro::Rng(tune_seed).substream("tune-folds").next_u64();
        tc.cv_options.pipeline = ctx.config.pipeline;
        int target = -1;
        if (tune_output == "oil") target = 0;
        else if (tune_output == "char") target = 1;
        else if (tune_output == "syngas") target = 2;
        else if (tune_output != "mean")
            throw copyro::ConfigTypeError("--output must be oil, char, syngas or mean");
        const auto result = copyro::tune_hyperparameters(kind, records, tc, nullptr, target);
        ctx.extras = {{"model", tune_model},
                      {"output", tune_output},
                      {"tune.k", tc.cv_k},
                      {"tune.swarm_size", tc.pso.swarm_size},
                      {"tune.iterations", tc.pso.iterations},
                      {"objective_rmse", result.objective},
                      {"evaluations", result.evaluations}};
        json out = spec_to_json(result.spec);
        out["objective_rmse"] = result.objective;
        out["evaluations"] = result.evaluations;
        ctx.write_output(tune_out, out.dump(2) + "\n");
        ctx.finish();
    });

    // ---- optimize ----
    auto* optimize = app.add_subcommand(
        "optimize", "multi-objective search for oil-maximizing conditions");
    std::string optimize_model, optimize_out, optimize_bounds;
    int opt_swarm = -1, opt_iters = -1, opt_capacity = -1;
    std::uint64_t optimize_seed = 0;
    optimize->add_option("--model", optimize_model, "trained GPR bundle JSON")->required();
    optimize->add_option("--out", optimize_out, "Pareto member CSV")->required();
    optimize->add_option("--bounds", optimize_bounds, "bounds CSV (column,lo,hi)");
    optimize->add_option("--swarm", opt_swarm, "swarm size");
    optimize->add_option("--iters", opt_iters, "iterations");
    optimize->add_option("--capacity", opt_capacity, "archive capacity");
    optimize->add_option("--seed", optimize_seed, "root seed");
    optimize->callback([&] {
        RunContext ctx{"optimize", common.resolve(), optimize_seed};
        ctx.note_input(optimize_model);
        const auto bundle = copyro::load_bundle(optimize_model);
        if (bundle.kind != copyro::RegressorKind::Gpr)
            throw copyro::ConfigTypeError(
                "optimize needs a GPR bundle; retrain with --model gpr");
        copyro::MopsoConfig config = ctx.config.mopso;
        if (opt_swarm > 0) config.swarm_size = opt_swarm;
        if (opt_iters > 0) config.iterations = opt_iters;
        if (opt_capacity > 0) config.archive_capacity = static_cast<std::size_t>(opt_capacity);
        config.seed = optimize_seed;

        copyro::Bounds bounds;
        const copyro::Bounds* bounds_ptr = nullptr;
        if (!optimize_bounds.empty()) {
            ctx.note_input(optimize_bounds);
            bounds = load_bounds_file(optimize_bounds, bundle.pipeline);
            bounds_ptr = &bounds;
        }
        const auto report = copyro::optimize_copyrolysis(
            bundle.gpr[0], bundle.gpr[1], bundle.gpr[2], bundle.pipeline, config, bounds_ptr);

        std::ostringstream os;
        for (int c = 0; c < copyro::kInputCount; ++c)
            os << copyro::input_column_names()[c] << ',';
        os << "oil_pred,char_pred,syngas_pred\n";
        for (const auto& pt : report.points) {
            for (int c = 0; c < copyro::kInputCount; ++c)
                os << format_number(pt.inputs[static_cast<std::size_t>(c)]) << ',';
            os << format_number(pt.oil) << ',' << format_number(pt.char_) << ','
               << format_number(pt.syngas) << '\n';
        }
        ctx.extras = {{"mopso.swarm_size", config.swarm_size},
                      {"mopso.iterations", config.iterations},
                      {"mopso.archive_capacity", config.archive_capacity},
                      {"evaluation_count", report.evaluations},
                      {"archive_size", report.points.size()}};
        ctx.write_output(optimize_out, os.str());
        ctx.finish();
    });

    // ---- contour ----
    auto* contour = app.add_subcommand("contour", "two-variable response surface");
    std::string contour_model, contour_out, contour_x, contour_y, contour_fixed;
    int contour_steps = 25;
    contour->add_option("--model", contour_model, "trained GPR bundle JSON")->required();
    contour->add_option("--out", contour_out, "long-form CSV")->required();
    contour->add_option("--x", contour_x, "x-axis input column")->required();
    contour->add_option("--y", contour_y, "y-axis input column")->required();
    contour->add_option("--fixed", contour_fixed, "one-row CSV fixing the other inputs")
        ->required();
    contour->add_option("--steps", contour_steps, "lattice steps per axis");
    contour->callback([&] {
        RunContext ctx{"contour", common.resolve()};
        ctx.note_input(contour_model);
        ctx.note_input(contour_fixed);
        const auto bundle = copyro::load_bundle(contour_model);
        if (bundle.kind != copyro::RegressorKind::Gpr)
            throw copyro::ConfigTypeError("contour needs a GPR bundle");
        const auto fixed_records = copyro::load_csv_file(contour_fixed);
        const auto grid = copyro::contour_grid(bundle.gpr[0], bundle.gpr[1], bundle.gpr[2],
                                               bundle.pipeline, contour_x, contour_y,
                                               fixed_records.front(), contour_steps);
        std::ostringstream os;
        os << contour_x << ',' << contour_y << ",oil_pred,char_pred,syngas_pred\n";
        for (int iy = 0; iy < contour_steps; ++iy) {
            const double yv = grid.y_axis.lo + (grid.y_axis.hi - grid.y_axis.lo) * iy /
                                                   static_cast<double>(contour_steps - 1);
            for (int ix = 0; ix < contour_steps; ++ix) {
                const double xv = grid.x_axis.lo + (grid.x_axis.hi - grid.x_axis.lo) * ix /
                                                       static_cast<double>(contour_steps - 1);
                os << format_number(xv) << ',' << format_number(yv) << ','
                   << format_number(grid.oil(iy, ix)) << ',' << format_number(grid.char_(iy, ix))
                   << ',' << format_number(grid.syngas(iy, ix)) << '\n';
            }
        }
        ctx.extras = {{"x", contour_x}, {"y", contour_y}, {"steps", contour_steps}};
        ctx.write_output(contour_out, os.str());
        ctx.finish();
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints usage or help text
        return code == 0 ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const copyro::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
