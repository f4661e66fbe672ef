#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lccd/classify.hpp"
#include "lccd/config.hpp"
#include "lccd/manifest.hpp"

namespace lccd {

/// A named descriptor stream backed by an LCCDDSC1 file. Built-in streams are
/// "spatial" and "channel"; externally produced files (e.g. gradient
/// descriptors) join under their own names.
struct StreamSpec {
    std::string name;
    std::string descriptor_path;
};

/// The spatial+channel stream pair under their conventional names in out_dir.
std::vector<StreamSpec> default_streams(const std::string& out_dir);

struct ExtractResult {
    std::string spatial_path;
    std::string channel_path;
    std::vector<std::pair<std::string, std::string>> skipped; // (path, error)
};

/// Extracts both descriptor streams for every manifest image, in manifest
/// order. Unreadable images are skipped and recorded (and listed in
/// extract_errors.txt in out_dir); deciding whether that is fatal is the
/// caller's job (the CLI's --strict flag).
ExtractResult run_extract(const PipelineConfig& config, const Manifest& manifest,
                          const std::string& out_dir);

struct FittedStream {
    std::string pca_path;
    std::string gmm_path;
};

/// Fits the per-stream PCA and GMM models on the train split of `partition`
/// only, and writes <out_dir>/<stream>.pca and <out_dir>/<stream>.gmm.
/// Missing train images in a stream file are a hard error.
std::map<std::string, FittedStream> run_fit(const PipelineConfig& config,
                                            const Manifest& manifest,
                                            const std::vector<StreamSpec>& streams,
                                            const std::string& out_dir,
                                            int partition = 0);

/// Encodes every manifest image: per stream, project the image's descriptors
/// with the stream's PCA and encode against its GMM (Fisher vector or BoW per
/// config), then concatenate the stream encodings and re-normalize. Writes an
/// LCCDENC1 file at out_path and returns it. Ids missing from any stream file
/// are a hard error listing the missing ids.
std::string run_encode(const PipelineConfig& config, const Manifest& manifest,
                       const std::vector<StreamSpec>& streams,
                       const std::string& models_dir, const std::string& out_path);

struct EvalResult {
    std::vector<int> partition_ids;
    std::vector<Report> reports; // one per partition
    nlohmann::ordered_json json; // per-partition reports plus the summary
};

/// Trains and evaluates the classifier per partition from an encodings file.
EvalResult run_train_eval(const PipelineConfig& config, const Manifest& manifest,
                          const std::string& encodings_path);

/// Writes report.json plus per-partition confusion_p<k>.csv and
/// per_class_p<k>.csv into out_dir.
void write_eval_outputs(const EvalResult& result, const std::string& out_dir);

/// Re-emits the CSV artifacts from a previously written report.json.
void write_report_artifacts(const nlohmann::ordered_json& report_json,
                            const std::string& out_dir);

} // namespace lccd
