// lccd command-line tool: extract -> fit -> encode -> train-eval, plus a
// report pretty-printer. Exit codes: 0 success, 2 configuration error,
// 3 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lccd/errors.hpp"
#include "lccd/manifest.hpp"
#include "lccd/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct CommonArgs {
    std::string config_path;
    std::string manifest_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
};

lccd::PipelineConfig load(const CommonArgs& args) {
    lccd::PipelineConfig config = args.config_path.empty()
                                      ? lccd::PipelineConfig{}
                                      : lccd::load_config(args.config_path);
    if (args.seed) config.seed = *args.seed;
    lccd::validate_config(config);
    return config;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_manifest = true) {
    cmd->add_option("--config", args.config_path, "Pipeline config file (key=value)");
    auto* m = cmd->add_option("--manifest", args.manifest_path,
                              "Label manifest CSV: image_path,label,split[,partition]");
    if (needs_manifest) m->required();
    cmd->add_option("--out-dir", args.out_dir, "Directory for outputs");
    cmd->add_option("--seed", args.seed, "Overrides the config seed");
}

std::vector<lccd::StreamSpec> build_streams(const std::string& out_dir,
                                            const std::string& streams_arg,
                                            const std::string& spatial_path,
                                            const std::string& channel_path,
                                            const std::vector<std::string>& external) {
    std::vector<lccd::StreamSpec> specs;
    std::stringstream ss(streams_arg);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty() || name == "none") continue;
        if (name == "spatial") {
            specs.push_back({"spatial", spatial_path.empty()
                                            ? (fs::path(out_dir) / "spatial.dsc").string()
                                            : spatial_path});
        } else if (name == "channel") {
            specs.push_back({"channel", channel_path.empty()
                                            ? (fs::path(out_dir) / "channel.dsc").string()
                                            : channel_path});
        } else {
            throw lccd::InvalidConfigError("unknown stream '" + name +
                                           "' (expected spatial, channel or none)");
        }
    }
    for (const std::string& path : external) {
        const std::string stem = fs::path(path).stem().string();
        if (stem.empty() || stem == "spatial" || stem == "channel")
            throw lccd::InvalidConfigError("external stream file '" + path +
                                           "' needs a distinct basename");
        specs.push_back({stem, path});
    }
    if (specs.empty())
        throw lccd::InvalidConfigError("no streams selected");
    return specs;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local color contrastive descriptor pipeline"};
    app.require_subcommand(1);

    // extract
    CommonArgs extract_args;
    bool strict = false;
    CLI::App* extract = app.add_subcommand(
        "extract", "Extract spatial and channel descriptor streams");
    add_common(extract, extract_args);
    extract->add_flag("--strict", strict, "Fail if any image cannot be processed");

    // fit
    CommonArgs fit_args;
    std::string fit_spatial, fit_channel;
    std::vector<std::string> fit_external;
    int fit_partition = 0;
    CLI::App* fit = app.add_subcommand(
        "fit", "Fit per-stream PCA and GMM models on the train split");
    add_common(fit, fit_args);
    fit->add_option("--spatial", fit_spatial, "Spatial descriptor file");
    fit->add_option("--channel", fit_channel, "Channel descriptor file");
    fit->add_option("--external", fit_external, "External descriptor file(s)");
    fit->add_option("--partition", fit_partition,
                    "Manifest partition whose train split is used");

    // encode
    CommonArgs encode_args;
    std::string encode_spatial, encode_channel, encode_out, encode_streams = "spatial,channel";
    std::vector<std::string> encode_external;
    std::string encoder_override;
    CLI::App* encode = app.add_subcommand(
        "encode", "Encode every image against the fitted models");
    add_common(encode, encode_args);
    encode->add_option("--spatial", encode_spatial, "Spatial descriptor file");
    encode->add_option("--channel", encode_channel, "Channel descriptor file");
    encode->add_option("--external", encode_external, "External descriptor file(s)");
    encode->add_option("--streams", encode_streams,
                       "Built-in streams to include (default spatial,channel; 'none' for externals only)");
    encode->add_option("--encoder", encoder_override, "Override the encoder (fv or bow)");
    encode->add_option("--out", encode_out, "Output encodings file (default <out-dir>/encodings.enc)");

    // train-eval
    CommonArgs eval_args;
    std::string eval_encodings;
    CLI::App* train_eval = app.add_subcommand(
        "train-eval", "Train the classifier and write evaluation reports");
    add_common(train_eval, eval_args);
    train_eval->add_option("--encodings", eval_encodings,
                           "Encodings file (default <out-dir>/encodings.enc)");

    // report
    std::string report_path, report_out_dir;
    CLI::App* report = app.add_subcommand(
        "report", "Pretty-print a report.json and emit its CSV artifacts");
    report->add_option("--report", report_path, "report.json to read")->required();
    report->add_option("--out-dir", report_out_dir, "Directory for the CSV artifacts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (extract->parsed()) {
            const lccd::PipelineConfig config = load(extract_args);
            const lccd::Manifest manifest = lccd::load_manifest(extract_args.manifest_path);
            const lccd::ExtractResult result =
                lccd::run_extract(config, manifest, extract_args.out_dir);
            if (!result.skipped.empty()) {
                std::cerr << "lccd: extract: skipped " << result.skipped.size()
                          << " image(s); see extract_errors.txt\n";
                if (strict) return kExitData;
            }
        } else if (fit->parsed()) {
            const lccd::PipelineConfig config = load(fit_args);
            const lccd::Manifest manifest = lccd::load_manifest(fit_args.manifest_path);
            const auto streams = build_streams(fit_args.out_dir, "spatial,channel",
                                               fit_spatial, fit_channel, fit_external);
            lccd::run_fit(config, manifest, streams, fit_args.out_dir, fit_partition);
        } else if (encode->parsed()) {
            lccd::PipelineConfig config = load(encode_args);
            if (!encoder_override.empty()) {
                config.encoder = encoder_override;
                lccd::validate_config(config);
            }
            const lccd::Manifest manifest = lccd::load_manifest(encode_args.manifest_path);
            const auto streams = build_streams(encode_args.out_dir, encode_streams,
                                               encode_spatial, encode_channel,
                                               encode_external);
            const std::string out_path =
                encode_out.empty() ? (fs::path(encode_args.out_dir) / "encodings.enc").string()
                                   : encode_out;
            lccd::run_encode(config, manifest, streams, encode_args.out_dir, out_path);
        } else if (train_eval->parsed()) {
            const lccd::PipelineConfig config = load(eval_args);
            const lccd::Manifest manifest = lccd::load_manifest(eval_args.manifest_path);
            const std::string enc_path =
                eval_encodings.empty()
                    ? (fs::path(eval_args.out_dir) / "encodings.enc").string()
                    : eval_encodings;
            const lccd::EvalResult result =
                lccd::run_train_eval(config, manifest, enc_path);
            lccd::write_eval_outputs(result, eval_args.out_dir);
            std::cout << result.json.at("summary").dump(2) << "\n";
        } else if (report->parsed()) {
            std::ifstream in(report_path);
            if (!in) throw lccd::InvalidInputError("cannot open report: " + report_path);
            nlohmann::ordered_json j;
            in >> j;
            std::cout << j.dump(2) << "\n";
            if (!report_out_dir.empty()) lccd::write_report_artifacts(j, report_out_dir);
        }
    } catch (const lccd::InvalidConfigError& e) {
        std::cerr << "lccd: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const lccd::InvalidInputError& e) {
        std::cerr << "lccd: data error: " << e.what() << "\n";
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "lccd: data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "lccd: error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
