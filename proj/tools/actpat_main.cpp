// actpat: activity-pattern study pipeline driver.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "actpat/embed.hpp"
#include "actpat/eval.hpp"
#include "actpat/infer.hpp"
#include "actpat/ingest.hpp"
#include "actpat/insight.hpp"
#include "actpat/learn.hpp"
#include "actpat/rng.hpp"
#include "actpat/synth.hpp"

namespace fs = std::filesystem;
using actpat::Attribute;
using json = nlohmann::json;

namespace {

// Exit codes: 0 success, 1 data error, 2 usage/config error. A `validate`
// run that finds violations also exits 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CliConfig {
    std::string config_path;
    std::string study;
    std::string uci;
    std::string uci_split = "test";
    std::string uci_accel = "total";
    std::string target = "gender";
    std::string algo = "svm";
    int folds = 5;
    int runs = 5;
    std::uint64_t seed = 42;
    std::string out;
    double perplexity = 30.0;
    int iterations = 1000;
    std::string preset = "separable";
    int classes = 4;
    int subjects = 28;
    double separation = 20.0;
    int samples = 3000;
    bool shuffle = false;
};

json load_config_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    return j;
}

// Config keys mirror the long flags; a flag passed on the command line wins
// over the config file. Unknown keys are rejected.
void apply_config(CLI::App* cmd, const json& j, CliConfig& cfg) {
    const auto passed = [&](const std::string& flag) {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    const auto want_string = [](const json& v, const std::string& key) {
        if (!v.is_string()) throw UsageError("config key '" + key + "' must be a string");
        return v.get<std::string>();
    };
    const auto want_int = [](const json& v, const std::string& key) {
        if (!v.is_number_integer()) throw UsageError("config key '" + key + "' must be an integer");
        return v.get<int>();
    };
    const auto want_double = [](const json& v, const std::string& key) {
        if (!v.is_number()) throw UsageError("config key '" + key + "' must be a number");
        return v.get<double>();
    };

    for (const auto& [key, value] : j.items()) {
        if (passed("--" + key)) continue;
        if (key == "study") cfg.study = want_string(value, key);
        else if (key == "uci") cfg.uci = want_string(value, key);
        else if (key == "uci-split") cfg.uci_split = want_string(value, key);
        else if (key == "uci-accel") cfg.uci_accel = want_string(value, key);
        else if (key == "target") cfg.target = want_string(value, key);
        else if (key == "algo") cfg.algo = want_string(value, key);
        else if (key == "folds") cfg.folds = want_int(value, key);
        else if (key == "runs") cfg.runs = want_int(value, key);
        else if (key == "seed") {
            if (!value.is_number_unsigned() && !value.is_number_integer())
                throw UsageError("config key 'seed' must be an integer");
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "out") cfg.out = want_string(value, key);
        else if (key == "perplexity") cfg.perplexity = want_double(value, key);
        else if (key == "iterations") cfg.iterations = want_int(value, key);
        else if (key == "preset") cfg.preset = want_string(value, key);
        else if (key == "classes") cfg.classes = want_int(value, key);
        else if (key == "subjects") cfg.subjects = want_int(value, key);
        else if (key == "separation") cfg.separation = want_double(value, key);
        else if (key == "samples") cfg.samples = want_int(value, key);
        else if (key == "shuffle") {
            if (!value.is_boolean()) throw UsageError("config key 'shuffle' must be a boolean");
            cfg.shuffle = value.get<bool>();
        } else {
            throw UsageError("unknown config key: " + key);
        }
    }
}

Attribute parse_target(const std::string& text, bool allow_activity) {
    const auto attr = actpat::attribute_from_string(text);
    if (!attr.has_value() || (*attr == Attribute::Activity && !allow_activity)) {
        std::string allowed = "gender, age, hand, app";
        if (allow_activity) allowed += ", activity";
        throw UsageError("unknown target '" + text + "' (expected one of: " + allowed + ")");
    }
    return *attr;
}

actpat::ClassifierSpec parse_algo(const std::string& text) {
    try {
        return actpat::spec_from_name(text);
    } catch (const actpat::ValueError&) {
        throw UsageError("unknown algo '" + text + "' (expected one of: svm, nb, mlp, knn, rf, lr, dt, all)");
    }
}

actpat::UciLayout parse_uci_layout(const CliConfig& cfg) {
    actpat::UciLayout layout;
    layout.root = cfg.uci;
    if (cfg.uci_split == "test") layout.split = actpat::UciSplit::Test;
    else if (cfg.uci_split == "train") layout.split = actpat::UciSplit::Train;
    else throw UsageError("unknown --uci-split '" + cfg.uci_split + "' (expected test or train)");
    if (cfg.uci_accel == "total") layout.accel = actpat::UciAccelSource::Total;
    else if (cfg.uci_accel == "body") layout.accel = actpat::UciAccelSource::Body;
    else throw UsageError("unknown --uci-accel '" + cfg.uci_accel + "' (expected total or body)");
    return layout;
}

// Sessions from --study (manifest path or its directory) or --uci.
std::vector<actpat::Session> load_sessions(const CliConfig& cfg) {
    const bool has_study = !cfg.study.empty();
    const bool has_uci = !cfg.uci.empty();
    if (has_study == has_uci) throw UsageError("exactly one of --study or --uci is required");
    if (has_study) {
        fs::path manifest = cfg.study;
        if (fs::is_directory(manifest)) manifest /= "manifest.csv";
        return actpat::load_study(actpat::read_manifest(manifest));
    }
    return actpat::load_uci_har(parse_uci_layout(cfg));
}

Attribute default_target(const CliConfig& cfg, CLI::App* cmd) {
    // A UCI source defaults the target to activity unless --target was given.
    const CLI::Option* opt = cmd->get_option_no_throw("--target");
    const bool passed = opt != nullptr && opt->count() > 0;
    if (!cfg.uci.empty() && !passed && cfg.target == "gender") return Attribute::Activity;
    return parse_target(cfg.target, !cfg.uci.empty());
}

std::string input_echo(const CliConfig& cfg) {
    if (!cfg.study.empty()) return "study=" + cfg.study;
    return "uci=" + cfg.uci + " uci-split=" + cfg.uci_split + " uci-accel=" + cfg.uci_accel;
}

void require_out(const CliConfig& cfg) {
    if (cfg.out.empty()) throw UsageError("--out is required");
}

actpat::Dataset dataset_from(const CliConfig& cfg, Attribute target) {
    const std::vector<actpat::Session> sessions = load_sessions(cfg);
    const actpat::FeatureSchema schema = actpat::FeatureSchema::for_sensors(actpat::common_sensors(sessions));
    return actpat::build_dataset(sessions, target, schema);
}

// --- subcommand handlers ----------------------------------------------------

int run_synth(const CliConfig& cfg) {
    require_out(cfg);
    std::vector<actpat::ClassProfile> profiles;
    if (cfg.preset == "separable") {
        profiles = actpat::separable_profiles(parse_target(cfg.target, false), cfg.classes, cfg.separation,
                                              cfg.samples);
    } else if (cfg.preset == "study") {
        profiles = actpat::study_profiles(cfg.samples);
    } else {
        throw UsageError("unknown preset '" + cfg.preset + "' (expected separable or study)");
    }
    std::vector<actpat::Session> sessions = actpat::generate_study(profiles, cfg.subjects, cfg.seed);
    if (cfg.shuffle) {
        actpat::shuffle_labels(sessions, parse_target(cfg.target, false),
                               actpat::derive_seed(cfg.seed, {0x5f5eu}));
    }
    std::ostringstream prov;
    prov << "actpat synth preset=" << cfg.preset << " target=" << cfg.target << " classes=" << cfg.classes
         << " subjects=" << cfg.subjects << " separation=" << cfg.separation << " samples=" << cfg.samples
         << " shuffle=" << (cfg.shuffle ? "true" : "false") << " seed=" << cfg.seed;
    actpat::write_study(cfg.out, sessions, prov.str());
    std::cout << "wrote " << sessions.size() << " sessions to " << cfg.out << '\n';
    return 0;
}

int run_validate(const CliConfig& cfg) {
    const std::vector<actpat::Session> sessions = load_sessions(cfg);
    size_t total = 0;
    for (const auto& s : sessions) {
        for (const auto& violation : actpat::validate_session(s)) {
            std::cout << s.subject_id << ": " << violation << '\n';
            ++total;
        }
    }
    std::cout << total << " violation(s) in " << sessions.size() << " session(s)\n";
    return total == 0 ? 0 : 1;
}

int run_featurize(const CliConfig& cfg, CLI::App* cmd) {
    require_out(cfg);
    const Attribute target = default_target(cfg, cmd);
    const actpat::Dataset ds = dataset_from(cfg, target);
    actpat::write_feature_csv(cfg.out, ds,
                              "actpat featurize " + input_echo(cfg) + " target=" + std::string(to_string(target)));
    std::cout << "wrote " << ds.rows() << " x " << ds.cols() << " feature matrix to " << cfg.out << '\n';
    return 0;
}

int run_cv(const CliConfig& cfg, CLI::App* cmd) {
    require_out(cfg);
    const Attribute target = default_target(cfg, cmd);
    std::vector<std::string> algos;
    if (cfg.algo == "all") {
        algos = actpat::all_spec_names();
    } else {
        parse_algo(cfg.algo);
        algos.push_back(cfg.algo);
    }
    const actpat::Dataset ds = dataset_from(cfg, target);

    std::vector<actpat::CvReport> reports;
    for (const auto& name : algos) {
        reports.push_back(actpat::cross_validate(actpat::spec_from_name(name), ds, cfg.folds, cfg.runs, cfg.seed));
        const auto& r = reports.back();
        std::cout << name << ": accuracy=" << r.grand_mean.accuracy << " f1_weighted=" << r.grand_mean.f1_weighted
                  << '\n';
    }
    std::ostringstream prov;
    prov << "actpat cv " << input_echo(cfg) << " target=" << to_string(target) << " algo=" << cfg.algo
         << " folds=" << cfg.folds << " runs=" << cfg.runs << " seed=" << cfg.seed;
    actpat::write_cv_table_csv(reports, cfg.out, {prov.str()});
    std::cout << "wrote report to " << cfg.out << '\n';
    return 0;
}

int run_infogain(const CliConfig& cfg, CLI::App* cmd) {
    require_out(cfg);
    const Attribute target = default_target(cfg, cmd);
    const actpat::Dataset ds = dataset_from(cfg, target);
    const actpat::IgReport report = actpat::information_gain(ds);
    actpat::write_ig_csv(report, cfg.out,
                         {"actpat infogain " + input_echo(cfg) + " target=" + std::string(to_string(target))});
    std::cout << "wrote " << report.entries.size() << " feature ranks to " << cfg.out << '\n';
    return 0;
}

int run_transfer(const CliConfig& cfg) {
    require_out(cfg);
    if (cfg.study.empty()) throw UsageError("--study (training data) is required");
    if (cfg.uci.empty()) throw UsageError("--uci (test data) is required");
    if (cfg.algo == "all") throw UsageError("transfer runs one algo per invocation");

    actpat::TransferPlan plan;
    plan.target = parse_target(cfg.target, false);
    plan.spec = parse_algo(cfg.algo);
    fs::path manifest = cfg.study;
    if (fs::is_directory(manifest)) manifest /= "manifest.csv";
    plan.train = actpat::load_study(actpat::read_manifest(manifest));
    plan.test = actpat::load_uci_har(parse_uci_layout(cfg));

    const actpat::TransferResult result = actpat::cross_predict(plan, cfg.seed);

    std::ostringstream prov;
    prov << "actpat transfer study=" << cfg.study << " uci=" << cfg.uci << " uci-split=" << cfg.uci_split
         << " uci-accel=" << cfg.uci_accel << " target=" << to_string(plan.target) << " algo=" << cfg.algo
         << " seed=" << cfg.seed;
    const fs::path out_dir = cfg.out;
    fs::create_directories(out_dir);
    actpat::write_predictions_csv(result, plan.target, out_dir / "predictions.csv", {prov.str()});
    actpat::write_contingency_csv(result.table, out_dir / "contingency.csv", {prov.str()});
    actpat::write_ig_csv(result.ig, out_dir / "infogain.csv", {prov.str()});

    std::cout << actpat::contingency_csv(result.table);
    std::cout << "wrote " << result.predicted.size() << " predictions to " << out_dir.string() << '\n';
    return 0;
}

int run_tsne(const CliConfig& cfg, CLI::App* cmd) {
    require_out(cfg);
    const Attribute target = default_target(cfg, cmd);
    const actpat::Dataset ds = dataset_from(cfg, target);
    actpat::TsneParams params;
    params.perplexity = cfg.perplexity;
    params.iterations = cfg.iterations;
    params.seed = cfg.seed;
    const actpat::Embedding emb = actpat::tsne(ds.x, params, ds.row_ids);
    std::ostringstream prov;
    prov << "actpat tsne " << input_echo(cfg) << " target=" << to_string(target)
         << " perplexity=" << cfg.perplexity << " iterations=" << cfg.iterations << " seed=" << cfg.seed;
    actpat::write_embedding_csv(emb, ds.targets, cfg.out, {prov.str()});
    std::cout << "wrote " << ds.rows() << " embedded rows to " << cfg.out << " (final KL " << emb.kl_final << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"activity-pattern study pipeline"};
    app.require_subcommand(1);
    CliConfig cfg;

    const auto add_common = [&](CLI::App* cmd, bool with_uci = true) {
        cmd->add_option("--config", cfg.config_path, "JSON config file; explicit flags override it");
        cmd->add_option("--seed", cfg.seed, "master seed");
        cmd->add_option("--out", cfg.out, "output file or directory");
        cmd->add_option("--study", cfg.study, "study manifest (or its directory)");
        if (with_uci) {
            cmd->add_option("--uci", cfg.uci, "UCI HAR dataset root directory");
            cmd->add_option("--uci-split", cfg.uci_split, "UCI split: test or train")->capture_default_str();
            cmd->add_option("--uci-accel", cfg.uci_accel, "UCI accel source: total or body")->capture_default_str();
        }
    };
    const auto add_target = [&](CLI::App* cmd) {
        cmd->add_option("--target", cfg.target, "target attribute: gender, age, hand, app")
            ->capture_default_str();
    };

    CLI::App* synth = app.add_subcommand("synth", "generate a labeled synthetic study");
    synth->add_option("--config", cfg.config_path, "JSON config file; explicit flags override it");
    synth->add_option("--seed", cfg.seed, "master seed");
    synth->add_option("--out", cfg.out, "output directory");
    synth->add_option("--preset", cfg.preset, "separable or study")->capture_default_str();
    synth->add_option("--classes", cfg.classes, "class count (separable preset)")->capture_default_str();
    synth->add_option("--subjects", cfg.subjects, "subjects per profile")->capture_default_str();
    synth->add_option("--separation", cfg.separation, "baseline separation in noise sigmas")
        ->capture_default_str();
    synth->add_option("--samples", cfg.samples, "samples per session")->capture_default_str();
    synth->add_flag("--shuffle", cfg.shuffle, "shuffle the target labels (permutation null)");
    CLI::App* synth_target = synth;
    add_target(synth_target);

    CLI::App* validate = app.add_subcommand("validate", "check a study against the data invariants");
    add_common(validate);

    CLI::App* featurize = app.add_subcommand("featurize", "write the feature matrix CSV");
    add_common(featurize);
    add_target(featurize);

    CLI::App* cv = app.add_subcommand("cv", "repeated stratified cross-validation report");
    add_common(cv);
    add_target(cv);
    cv->add_option("--algo", cfg.algo, "svm, nb, mlp, knn, rf, lr, dt, or all")->capture_default_str();
    cv->add_option("--folds", cfg.folds, "fold count")->capture_default_str();
    cv->add_option("--runs", cfg.runs, "repetitions")->capture_default_str();

    CLI::App* infogain = app.add_subcommand("infogain", "information-gain feature ranking CSV");
    add_common(infogain);
    add_target(infogain);

    CLI::App* transfer = app.add_subcommand("transfer", "train on a study, predict a foreign activity dataset");
    add_common(transfer);
    add_target(transfer);
    transfer->add_option("--algo", cfg.algo, "svm, nb, mlp, knn, rf, lr, dt")->capture_default_str();

    CLI::App* tsne_cmd = app.add_subcommand("tsne", "2-D embedding CSV");
    add_common(tsne_cmd);
    add_target(tsne_cmd);
    tsne_cmd->add_option("--perplexity", cfg.perplexity, "t-SNE perplexity")->capture_default_str();
    tsne_cmd->add_option("--iterations", cfg.iterations, "gradient iterations")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        if (!cfg.config_path.empty()) apply_config(active, load_config_json(cfg.config_path), cfg);

        if (active == synth) return run_synth(cfg);
        if (active == validate) return run_validate(cfg);
        if (active == featurize) return run_featurize(cfg, active);
        if (active == cv) return run_cv(cfg, active);
        if (active == infogain) return run_infogain(cfg, active);
        if (active == transfer) return run_transfer(cfg);
        return run_tsne(cfg, active);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
