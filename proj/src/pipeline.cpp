#include "lccd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>

#include "lccd/descriptor.hpp"
#include "lccd/encoding.hpp"
#include "lccd/errors.hpp"
#include "lccd/formats.hpp"
#include "lccd/gmm.hpp"
#include "lccd/pca.hpp"
#include "lccd/rng.hpp"

namespace fs = std::filesystem;

namespace lccd {

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

// Rows of a descriptor block as a double matrix (patches x dim).
Eigen::MatrixXd block_as_matrix(const std::vector<float>& values, std::size_t dim) {
    const std::size_t rows = values.size() / dim;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                values[r * dim + c];
    return m;
}

std::vector<std::string> missing_ids(const DescriptorFile& file,
                                     const std::vector<std::string>& wanted) {
    std::set<std::string> have(file.ids.begin(), file.ids.end());
    std::vector<std::string> missing;
    for (const std::string& id : wanted)
        if (!have.contains(id)) missing.push_back(id);
    return missing;
}

std::string format_id_list(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < 10; ++i) {
        if (i > 0) out += ", ";
        out += ids[i];
    }
    if (ids.size() > 10) out += ", ... (" + std::to_string(ids.size()) + " total)";
    return out;
}

double stddev(const std::vector<double>& values, double mean) {
    if (values.empty()) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size()));
}

} // namespace

std::vector<StreamSpec> default_streams(const std::string& out_dir) {
    return {{"spatial", join(out_dir, "spatial.dsc")},
            {"channel", join(out_dir, "channel.dsc")}};
}

ExtractResult run_extract(const PipelineConfig& config, const Manifest& manifest,
                          const std::string& out_dir) {
    validate_config(config);
    fs::create_directories(out_dir);
    const DescriptorOptions opts = descriptor_options(config);

    ExtractResult result;
    result.spatial_path = join(out_dir, "spatial.dsc");
    result.channel_path = join(out_dir, "channel.dsc");

    const auto patch_rows = static_cast<std::uint32_t>(opts.grid_rows - 2);
    const auto patch_cols = static_cast<std::uint32_t>(opts.grid_cols - 2);
    DescriptorFileWriter spatial(result.spatial_path,
                                 static_cast<std::uint8_t>(Stream::Spatial),
                                 static_cast<std::uint32_t>(spatial_dim(opts)),
                                 patch_rows, patch_cols);
    DescriptorFileWriter channel(result.channel_path,
                                 static_cast<std::uint8_t>(Stream::Channel),
                                 static_cast<std::uint32_t>(channel_dim(opts)),
                                 patch_rows, patch_cols);

    const std::vector<std::string> images = manifest.images();
    std::size_t done = 0;
    for (const std::string& path : images) {
        ++done;
        try {
            const RasterImage img = load_image(path);
            const ExtractedImage extracted = extract_image(img, opts, path);
            spatial.add(extracted.spatial);
            channel.add(extracted.channel);
            std::cerr << "lccd: extract [" << done << "/" << images.size() << "] "
                      << path << "\n";
        } catch (const InvalidInputError& e) {
            result.skipped.emplace_back(path, e.what());
            std::cerr << "lccd: extract [" << done << "/" << images.size() << "] "
                      << path << " SKIPPED: " << e.what() << "\n";
        }
    }
    spatial.close();
    channel.close();

    if (!result.skipped.empty()) {
        std::ofstream err(join(out_dir, "extract_errors.txt"), std::ios::trunc);
        for (const auto& [path, message] : result.skipped)
            err << path << "\t" << message << "\n";
    }
    return result;
}

std::map<std::string, FittedStream> run_fit(const PipelineConfig& config,
                                            const Manifest& manifest,
                                            const std::vector<StreamSpec>& streams,
                                            const std::string& out_dir, int partition) {
    validate_config(config);
    if (streams.empty()) throw InvalidConfigError("run_fit: no streams given");
    fs::create_directories(out_dir);

    const std::vector<std::string> train = manifest.split_images(partition, true);
    if (train.empty())
        throw InvalidInputError("run_fit: empty train split in partition " +
                                std::to_string(partition));

    std::map<std::string, FittedStream> fitted;
    for (const StreamSpec& stream : streams) {
        const DescriptorFile file = load_descriptor_file(stream.descriptor_path);
        const std::vector<std::string> absent = missing_ids(file, train);
        if (!absent.empty())
            throw InvalidInputError("run_fit: stream '" + stream.name +
                                    "' is missing train images: " +
                                    format_id_list(absent));
        if (config.pca_dim > static_cast<int>(file.dim))
            throw InvalidConfigError("run_fit: pca_dim " + std::to_string(config.pca_dim) +
                                     " exceeds stream '" + stream.name + "' dim " +
                                     std::to_string(file.dim));

        // Train-split descriptor rows in manifest order, uniformly subsampled
        // to the cap. Models never see the test split.
        const std::size_t per_image = file.patches_per_image();
        const std::size_t total = per_image * train.size();
        const std::vector<std::size_t> picked = sample_indices(
            total, static_cast<std::size_t>(config.pca_sample_cap),
            derive_seed(config.seed, "pca-sample:" + stream.name));

        Eigen::MatrixXd samples(static_cast<Eigen::Index>(picked.size()),
                                static_cast<Eigen::Index>(file.dim));
        std::size_t out_row = 0;
        std::size_t cursor = 0; // index into picked
        for (std::size_t t = 0; t < train.size() && cursor < picked.size(); ++t) {
            const int idx = file.find(train[t]);
            const std::vector<float>& block =
                file.values[static_cast<std::size_t>(idx)];
            const std::size_t base = t * per_image;
            while (cursor < picked.size() && picked[cursor] < base + per_image) {
                const std::size_t local = picked[cursor] - base;
                for (std::size_t c = 0; c < file.dim; ++c)
                    samples(static_cast<Eigen::Index>(out_row),
                            static_cast<Eigen::Index>(c)) =
                        block[local * file.dim + c];
                ++out_row;
                ++cursor;
            }
        }

        const PcaModel pca =
            fit_pca(samples, config.pca_dim, config.pca_sample_cap,
                    derive_seed(config.seed, "pca:" + stream.name), config.pca_whiten);
        Eigen::MatrixXd projected = project_rows(pca, samples);

        if (projected.rows() > config.gmm_sample_cap) {
            const std::vector<std::size_t> keep = sample_indices(
                static_cast<std::size_t>(projected.rows()),
                static_cast<std::size_t>(config.gmm_sample_cap),
                derive_seed(config.seed, "gmm-sample:" + stream.name));
            Eigen::MatrixXd reduced(static_cast<Eigen::Index>(keep.size()),
                                    projected.cols());
            for (std::size_t i = 0; i < keep.size(); ++i)
                reduced.row(static_cast<Eigen::Index>(i)) =
                    projected.row(static_cast<Eigen::Index>(keep[i]));
            projected = std::move(reduced);
        }

        GmmFitOptions gmm_opts;
        gmm_opts.max_iter = config.gmm_max_iter;
        gmm_opts.tol = config.gmm_tol;
        gmm_opts.seed = derive_seed(config.seed, "gmm:" + stream.name);
        const GmmFitResult gmm = fit_gmm(projected, config.gmm_components, gmm_opts);
        std::cerr << "lccd: fit '" << stream.name << "': pca " << file.dim << "->"
                  << config.pca_dim << ", gmm " << config.gmm_components
                  << " components, " << gmm.log_likelihood.size() << " EM iterations"
                  << (gmm.converged ? "" : " (max_iter reached)") << "\n";

        FittedStream paths;
        paths.pca_path = join(out_dir, stream.name + ".pca");
        paths.gmm_path = join(out_dir, stream.name + ".gmm");
        save_pca(paths.pca_path, pca);
        save_gmm(paths.gmm_path, gmm.model);
        fitted.emplace(stream.name, std::move(paths));
    }
    return fitted;
}

std::string run_encode(const PipelineConfig& config, const Manifest& manifest,
                       const std::vector<StreamSpec>& streams,
                       const std::string& models_dir, const std::string& out_path) {
    validate_config(config);
    if (streams.empty()) throw InvalidConfigError("run_encode: no streams given");

    const std::vector<std::string> images = manifest.images();
    std::vector<std::vector<EncodedImage>> parts(images.size());

    for (const StreamSpec& stream : streams) {
        const DescriptorFile file = load_descriptor_file(stream.descriptor_path);
        const std::vector<std::string> absent = missing_ids(file, images);
        if (!absent.empty())
            throw InvalidInputError("run_encode: stream '" + stream.name +
                                    "' is missing images: " + format_id_list(absent));

        const PcaModel pca = load_pca(join(models_dir, stream.name + ".pca"));
        const GmmModel gmm = load_gmm(join(models_dir, stream.name + ".gmm"));
        if (pca.input_dim() != static_cast<int>(file.dim))
            throw InvalidInputError("run_encode: stream '" + stream.name +
                                    "' dim " + std::to_string(file.dim) +
                                    " does not match PCA input dim " +
                                    std::to_string(pca.input_dim()));
        if (gmm.dim() != pca.output_dim())
            throw InvalidInputError("run_encode: stream '" + stream.name +
                                    "' PCA output dim " +
                                    std::to_string(pca.output_dim()) +
                                    " does not match GMM dim " +
                                    std::to_string(gmm.dim()));

        for (std::size_t i = 0; i < images.size(); ++i) {
            const int idx = file.find(images[i]);
            const Eigen::MatrixXd descriptors = block_as_matrix(
                file.values[static_cast<std::size_t>(idx)], file.dim);
            const Eigen::MatrixXd projected = project_rows(pca, descriptors);
            parts[i].push_back(config.encoder == "bow"
                                   ? bow_encode(gmm, projected, images[i])
                                   : fisher_vector(gmm, projected, images[i]));
        }
        std::cerr << "lccd: encode: stream '" << stream.name << "' done ("
                  << images.size() << " images)\n";
    }

    std::vector<EncodedImage> fused;
    fused.reserve(images.size());
    for (std::size_t i = 0; i < images.size(); ++i)
        fused.push_back(concat_encodings(parts[i]));

    fs::create_directories(fs::path(out_path).parent_path());
    save_encodings(out_path, fused);
    return out_path;
}

EvalResult run_train_eval(const PipelineConfig& config, const Manifest& manifest,
                          const std::string& encodings_path) {
    validate_config(config);
    const std::vector<EncodedImage> encodings = load_encodings(encodings_path);
    std::map<std::string, const EncodedImage*> by_id;
    for (const EncodedImage& e : encodings) by_id[e.image_id] = &e;

    const auto fetch = [&](const std::vector<std::string>& ids) {
        if (ids.empty()) throw InvalidInputError("run_train_eval: empty split");
        const auto dim = static_cast<Eigen::Index>(by_id.begin()->second->values.size());
        Eigen::MatrixXd x(static_cast<Eigen::Index>(ids.size()), dim);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto it = by_id.find(ids[i]);
            if (it == by_id.end())
                throw InvalidInputError("run_train_eval: image '" + ids[i] +
                                        "' missing from " + encodings_path);
            for (Eigen::Index c = 0; c < dim; ++c)
                x(static_cast<Eigen::Index>(i), c) = it->second->values[c];
        }
        return x;
    };

    EvalResult result;
    result.json["partitions"] = nlohmann::ordered_json::array();
    std::vector<double> accuracies;
    std::vector<double> maps;

    for (int partition : manifest.partitions()) {
        const std::vector<std::string> train_ids = manifest.split_images(partition, true);
        const std::vector<std::string> test_ids = manifest.split_images(partition, false);
        if (train_ids.empty() || test_ids.empty())
            throw InvalidInputError("run_train_eval: partition " +
                                    std::to_string(partition) +
                                    " needs both train and test images");

        std::vector<std::string> train_labels;
        std::vector<std::string> test_labels;
        for (const std::string& id : train_ids) train_labels.push_back(manifest.label_of(id));
        for (const std::string& id : test_ids) test_labels.push_back(manifest.label_of(id));

        // Dataset invariant: every class present on both sides of the split.
        std::set<std::string> train_classes(train_labels.begin(), train_labels.end());
        std::set<std::string> test_classes(test_labels.begin(), test_labels.end());
        for (const std::string& c : train_classes)
            if (!test_classes.contains(c))
                throw InvalidInputError("run_train_eval: class '" + c +
                                        "' has no test items in partition " +
                                        std::to_string(partition));
        for (const std::string& c : test_classes)
            if (!train_classes.contains(c))
                throw InvalidInputError("run_train_eval: class '" + c +
                                        "' has no train items in partition " +
                                        std::to_string(partition));

        TrainOptions train_opts;
        train_opts.l2 = config.svm_l2;
        train_opts.epochs = config.svm_epochs;
        train_opts.learning_rate = config.svm_learning_rate;
        train_opts.seed = derive_seed(config.seed, "svm:" + std::to_string(partition));

        const LinearModel model = train(fetch(train_ids), train_labels, train_opts);
        const Report report = evaluate(model, fetch(test_ids), test_labels);
        std::cerr << "lccd: train-eval: partition " << partition << ": accuracy "
                  << report.accuracy << ", mAP " << report.mean_ap << "\n";

        nlohmann::ordered_json pj = report_to_json(report);
        pj["partition"] = partition;
        result.json["partitions"].push_back(pj);
        result.partition_ids.push_back(partition);
        result.reports.push_back(report);
        accuracies.push_back(report.accuracy);
        maps.push_back(report.mean_ap);
    }

    const double acc_mean =
        std::accumulate(accuracies.begin(), accuracies.end(), 0.0) /
        static_cast<double>(accuracies.size());
    const double map_mean = std::accumulate(maps.begin(), maps.end(), 0.0) /
                            static_cast<double>(maps.size());
    nlohmann::ordered_json summary;
    summary["partition_count"] = accuracies.size();
    summary["accuracy_mean"] = acc_mean;
    summary["accuracy_stddev"] = stddev(accuracies, acc_mean);
    summary["map_mean"] = map_mean;
    summary["map_stddev"] = stddev(maps, map_mean);
    result.json["summary"] = summary;
    return result;
}

void write_eval_outputs(const EvalResult& result, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ofstream json_out(join(out_dir, "report.json"), std::ios::trunc);
    json_out << result.json.dump(2) << "\n";
    if (!json_out) throw InvalidInputError("cannot write report.json in " + out_dir);
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
        const std::string suffix = "_p" + std::to_string(result.partition_ids[i]);
        std::ofstream conf(join(out_dir, "confusion" + suffix + ".csv"), std::ios::trunc);
        conf << confusion_csv(result.reports[i]);
        std::ofstream per_class(join(out_dir, "per_class" + suffix + ".csv"),
                                std::ios::trunc);
        per_class << per_class_csv(result.reports[i]);
    }
}

void write_report_artifacts(const nlohmann::ordered_json& report_json,
                            const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (const auto& pj : report_json.at("partitions")) {
        const Report report = report_from_json(pj);
        const std::string suffix = "_p" + pj.at("partition").dump();
        std::ofstream conf(join(out_dir, "confusion" + suffix + ".csv"), std::ios::trunc);
        conf << confusion_csv(report);
        std::ofstream per_class(join(out_dir, "per_class" + suffix + ".csv"),
                                std::ios::trunc);
        per_class << per_class_csv(report);
    }
}

} // namespace lccd
