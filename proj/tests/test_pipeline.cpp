#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lccd/config.hpp"
#include "lccd/errors.hpp"
#include "lccd/formats.hpp"
#include "lccd/image.hpp"
#include "lccd/manifest.hpp"
#include "lccd/pipeline.hpp"
#include "support/synthetic.hpp"

using testsupport::TempDir;

namespace {

lccd::PipelineConfig tiny_config() {
    lccd::PipelineConfig config;
    config.resize_width = 48;
    config.resize_height = 48;
    config.grid_rows = 6;
    config.grid_cols = 6;
    config.bins = 10;
    config.subspace_window = 3;
    config.pca_dim = 8;
    config.gmm_components = 2;
    config.gmm_max_iter = 30;
    config.svm_epochs = 80;
    config.seed = 99;
    return config;
}

// Writes `per_class` images for two texture classes plus a manifest; the
// first `train_per_class` of each class are the train split.
std::string write_tiny_dataset(const TempDir& tmp, int per_class, int train_per_class) {
    std::ostringstream manifest;
    for (int cls = 0; cls < 2; ++cls) {
        for (int i = 0; i < per_class; ++i) {
            const std::string name =
                "img_c" + std::to_string(cls) + "_" + std::to_string(i) + ".lccdimg";
            lccd::write_raw_image(tmp.path(name), testsupport::color_texture(cls, i, 48, 48));
            manifest << name << ",class" << cls << ","
                     << (i < train_per_class ? "train" : "test") << "\n";
        }
    }
    const std::string path = tmp.path("manifest.csv");
    std::ofstream out(path);
    out << manifest.str();
    return path;
}

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("tiny end-to-end pipeline produces coherent artifacts") {
    const TempDir tmp("e2e");
    const lccd::PipelineConfig config = tiny_config();
    const std::string manifest_path = write_tiny_dataset(tmp, 8, 6);
    const lccd::Manifest manifest = lccd::load_manifest(manifest_path);

    const lccd::ExtractResult extracted = lccd::run_extract(config, manifest, tmp.path());
    CHECK(extracted.skipped.empty());

    const lccd::DescriptorFile spatial = lccd::load_descriptor_file(extracted.spatial_path);
    CHECK(spatial.dim == 192); // 3 * 8 * (10 - 3 + 1)
    CHECK(spatial.patch_rows == 4);
    CHECK(spatial.ids.size() == 16);
    const lccd::DescriptorFile channel = lccd::load_descriptor_file(extracted.channel_path);
    CHECK(channel.dim == 144); // 2 * 9 * 8

    const auto fitted =
        lccd::run_fit(config, manifest, lccd::default_streams(tmp.path()), tmp.path());
    REQUIRE(fitted.count("spatial") == 1);
    REQUIRE(fitted.count("channel") == 1);
    const lccd::PcaModel pca = lccd::load_pca(fitted.at("spatial").pca_path);
    CHECK(pca.input_dim() == 192);
    CHECK(pca.output_dim() == 8);

    const std::string enc_path =
        lccd::run_encode(config, manifest, lccd::default_streams(tmp.path()), tmp.path(),
                         tmp.path("encodings.enc"));
    const std::vector<lccd::EncodedImage> encodings = lccd::load_encodings(enc_path);
    REQUIRE(encodings.size() == 16);
    CHECK(encodings[0].values.size() == 2u * 2u * 2u * 8u); // streams*2*K*dim
    for (const auto& e : encodings) {
        double norm = 0.0;
        for (float v : e.values) norm += static_cast<double>(v) * v;
        CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-6));
    }

    const lccd::EvalResult result = lccd::run_train_eval(config, manifest, enc_path);
    REQUIRE(result.reports.size() == 1);
    CHECK(result.reports[0].test_count == 4);
    CHECK(result.reports[0].accuracy >= 0.5); // two very distinct color classes
    lccd::write_eval_outputs(result, tmp.path("out"));
    CHECK(std::filesystem::exists(tmp.path("out/report.json")));
    CHECK(std::filesystem::exists(tmp.path("out/confusion_p0.csv")));
    CHECK(std::filesystem::exists(tmp.path("out/per_class_p0.csv")));
}

TEST_CASE("models are fitted on the train split only (no leakage)") {
    const TempDir tmp("leak");
    const lccd::PipelineConfig config = tiny_config();
    write_tiny_dataset(tmp, 8, 6);

    // Two manifests sharing the train split but differing in the test split.
    std::string base;
    for (int cls = 0; cls < 2; ++cls)
        for (int i = 0; i < 6; ++i)
            base += "img_c" + std::to_string(cls) + "_" + std::to_string(i) +
                    ".lccdimg,class" + std::to_string(cls) + ",train\n";
    std::ofstream(tmp.path("m_full.csv"))
        << base << "img_c0_6.lccdimg,class0,test\nimg_c0_7.lccdimg,class0,test\n"
        << "img_c1_6.lccdimg,class1,test\n";
    std::ofstream(tmp.path("m_small.csv")) << base << "img_c0_6.lccdimg,class0,test\n"
                                           << "img_c1_6.lccdimg,class1,test\n";

    const lccd::Manifest full = lccd::load_manifest(tmp.path("m_full.csv"));
    const lccd::Manifest small = lccd::load_manifest(tmp.path("m_small.csv"));

    lccd::run_extract(config, full, tmp.path("a"));
    lccd::run_extract(config, small, tmp.path("b"));
    lccd::run_fit(config, full, lccd::default_streams(tmp.path("a")), tmp.path("a"));
    lccd::run_fit(config, small, lccd::default_streams(tmp.path("b")), tmp.path("b"));

    // Removing a held-out image changes nothing about the fitted models.
    for (const char* name : {"spatial.pca", "spatial.gmm", "channel.pca", "channel.gmm"})
        CHECK(slurp(tmp.path("a/") + name) == slurp(tmp.path("b/") + name));

    // And the shared test image encodes identically under both fits.
    lccd::run_encode(config, full, lccd::default_streams(tmp.path("a")), tmp.path("a"),
                     tmp.path("a/enc.enc"));
    lccd::run_encode(config, small, lccd::default_streams(tmp.path("b")), tmp.path("b"),
                     tmp.path("b/enc.enc"));
    const auto enc_a = lccd::load_encodings(tmp.path("a/enc.enc"));
    const auto enc_b = lccd::load_encodings(tmp.path("b/enc.enc"));
    for (const auto& ea : enc_a) {
        for (const auto& eb : enc_b) {
            if (ea.image_id == eb.image_id) CHECK(ea.values == eb.values);
        }
    }
}

TEST_CASE("full pipeline reruns are byte-identical") {
    const TempDir tmp("determinism");
    const lccd::PipelineConfig config = tiny_config();
    const std::string manifest_path = write_tiny_dataset(tmp, 6, 4);
    const lccd::Manifest manifest = lccd::load_manifest(manifest_path);

    for (const char* dir : {"run1", "run2"}) {
        lccd::run_extract(config, manifest, tmp.path(dir));
        lccd::run_fit(config, manifest, lccd::default_streams(tmp.path(dir)), tmp.path(dir));
        lccd::run_encode(config, manifest, lccd::default_streams(tmp.path(dir)),
                         tmp.path(dir), tmp.path(std::string(dir) + "/encodings.enc"));
        const lccd::EvalResult result = lccd::run_train_eval(
            config, manifest, tmp.path(std::string(dir) + "/encodings.enc"));
        lccd::write_eval_outputs(result, tmp.path(dir));
    }
    for (const char* name : {"spatial.dsc", "channel.dsc", "spatial.pca", "spatial.gmm",
                             "channel.pca", "channel.gmm", "encodings.enc", "report.json",
                             "confusion_p0.csv", "per_class_p0.csv"})
        CHECK(slurp(tmp.path("run1/") + name) == slurp(tmp.path("run2/") + name));
}

TEST_CASE("identical partitions give zero stddev in the summary") {
    const TempDir tmp("partitions");
    const lccd::PipelineConfig config = tiny_config();
    write_tiny_dataset(tmp, 6, 4);
    std::string text;
    for (int p = 0; p < 2; ++p)
        for (int cls = 0; cls < 2; ++cls)
            for (int i = 0; i < 6; ++i)
                text += "img_c" + std::to_string(cls) + "_" + std::to_string(i) +
                        ".lccdimg,class" + std::to_string(cls) + "," +
                        (i < 4 ? "train" : "test") + "," + std::to_string(p) + "\n";
    std::ofstream(tmp.path("m.csv")) << text;
    const lccd::Manifest manifest = lccd::load_manifest(tmp.path("m.csv"));

    lccd::run_extract(config, manifest, tmp.path());
    lccd::run_fit(config, manifest, lccd::default_streams(tmp.path()), tmp.path());
    lccd::run_encode(config, manifest, lccd::default_streams(tmp.path()), tmp.path(),
                     tmp.path("encodings.enc"));
    const lccd::EvalResult result =
        lccd::run_train_eval(config, manifest, tmp.path("encodings.enc"));
    REQUIRE(result.reports.size() == 2);
    CHECK(result.json.at("summary").at("accuracy_stddev").get<double>() == 0.0);
    CHECK(result.json.at("summary").at("map_stddev").get<double>() == 0.0);
}

TEST_CASE("external stream ingestion and id mismatch errors") {
    const TempDir tmp("external");
    const lccd::PipelineConfig config = tiny_config();
    const std::string manifest_path = write_tiny_dataset(tmp, 6, 4);
    const lccd::Manifest manifest = lccd::load_manifest(manifest_path);
    lccd::run_extract(config, manifest, tmp.path());

    // External gradient stream for all images.
    testsupport::write_gradient_stream(tmp.path("grad.dsc"), manifest.images(),
                                       config.resize_width, config.resize_height,
                                       config.grid_rows, config.grid_cols);
    std::vector<lccd::StreamSpec> streams = lccd::default_streams(tmp.path());
    streams.push_back({"grad", tmp.path("grad.dsc")});
    lccd::run_fit(config, manifest, streams, tmp.path());
    const std::string enc = lccd::run_encode(config, manifest, streams, tmp.path(),
                                             tmp.path("fused.enc"));
    const auto encodings = lccd::load_encodings(enc);
    CHECK(encodings[0].values.size() == 3u * 2u * 2u * 8u);

    // A stream missing a train image breaks fit; missing any manifest image
    // breaks encode, naming the absent ids.
    std::vector<std::string> no_train = manifest.images();
    no_train.erase(no_train.begin()); // first image is a train image
    testsupport::write_gradient_stream(tmp.path("partial.dsc"), no_train,
                                       config.resize_width, config.resize_height,
                                       config.grid_rows, config.grid_cols);
    std::vector<lccd::StreamSpec> broken = lccd::default_streams(tmp.path());
    broken.push_back({"partial", tmp.path("partial.dsc")});
    CHECK_THROWS_WITH_AS(
        lccd::run_fit(config, manifest, broken, tmp.path("broken")),
        doctest::Contains("missing"), lccd::InvalidInputError);

    std::vector<std::string> no_test = manifest.images();
    no_test.pop_back(); // last image is a test image: fit fine, encode not
    testsupport::write_gradient_stream(tmp.path("partial2.dsc"), no_test,
                                       config.resize_width, config.resize_height,
                                       config.grid_rows, config.grid_cols);
    std::vector<lccd::StreamSpec> broken2 = lccd::default_streams(tmp.path());
    broken2.push_back({"partial2", tmp.path("partial2.dsc")});
    lccd::run_fit(config, manifest, broken2, tmp.path("broken2"));
    CHECK_THROWS_WITH_AS(
        lccd::run_encode(config, manifest, broken2, tmp.path("broken2"),
                         tmp.path("broken2/enc.enc")),
        doctest::Contains(manifest.images().back().c_str()), lccd::InvalidInputError);
}

TEST_CASE("extract records unreadable images and continues") {
    const TempDir tmp("skip");
    std::string text = "ok.lccdimg,a,train\nmissing.lccdimg,a,test\nok2.lccdimg,b,train\n"
                       "ok3.lccdimg,b,test\n";
    lccd::write_raw_image(tmp.path("ok.lccdimg"), testsupport::color_texture(0, 0, 48, 48));
    lccd::write_raw_image(tmp.path("ok2.lccdimg"), testsupport::color_texture(1, 0, 48, 48));
    lccd::write_raw_image(tmp.path("ok3.lccdimg"), testsupport::color_texture(1, 1, 48, 48));
    std::ofstream(tmp.path("m.csv")) << text;
    const lccd::Manifest manifest = lccd::load_manifest(tmp.path("m.csv"));

    const lccd::ExtractResult result =
        lccd::run_extract(tiny_config(), manifest, tmp.path());
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0].first == tmp.path("missing.lccdimg"));
    CHECK(std::filesystem::exists(tmp.path("extract_errors.txt")));
    const lccd::DescriptorFile file = lccd::load_descriptor_file(result.spatial_path);
    CHECK(file.ids.size() == 3);
}

#ifdef LCCD_CLI_PATH
TEST_CASE("command-line interface end to end with exit codes") {
    const TempDir tmp("cli");
    const std::string manifest_path = write_tiny_dataset(tmp, 6, 4);
    lccd::save_config(tmp.path("desk.cfg"), tiny_config());

    const std::string cli = LCCD_CLI_PATH;
    const auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > " + tmp.path("stdout.txt") +
                                " 2> " + tmp.path("stderr.txt");
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };

    CHECK(run("extract --config " + tmp.path("desk.cfg") + " --manifest " + manifest_path +
              " --out-dir " + tmp.path("work")) == 0);
    CHECK(run("fit --config " + tmp.path("desk.cfg") + " --manifest " + manifest_path +
              " --out-dir " + tmp.path("work")) == 0);
    CHECK(run("encode --config " + tmp.path("desk.cfg") + " --manifest " + manifest_path +
              " --out-dir " + tmp.path("work")) == 0);
    CHECK(run("train-eval --config " + tmp.path("desk.cfg") + " --manifest " +
              manifest_path + " --out-dir " + tmp.path("work")) == 0);

    // Bag-of-words encoder mode: K-dim vectors per stream instead of 2*K*dim.
    CHECK(run("encode --config " + tmp.path("desk.cfg") + " --manifest " + manifest_path +
              " --out-dir " + tmp.path("work") + " --encoder bow --out " +
              tmp.path("work/bow.enc")) == 0);
    const auto bow = lccd::load_encodings(tmp.path("work/bow.enc"));
    CHECK(bow.at(0).values.size() == 2u * 2u); // 2 streams x K components
    CHECK(run("train-eval --config " + tmp.path("desk.cfg") + " --manifest " +
              manifest_path + " --out-dir " + tmp.path("bowout") + " --encodings " +
              tmp.path("work/bow.enc")) == 0);
    CHECK(std::filesystem::exists(tmp.path("work/report.json")));
    CHECK(run("report --report " + tmp.path("work/report.json") + " --out-dir " +
              tmp.path("summary")) == 0);
    CHECK(std::filesystem::exists(tmp.path("summary/confusion_p0.csv")));
    CHECK(std::filesystem::exists(tmp.path("summary/per_class_p0.csv")));

    // Config errors exit 2.
    std::ofstream(tmp.path("bad.cfg")) << "bins = 1\n";
    CHECK(run("extract --config " + tmp.path("bad.cfg") + " --manifest " + manifest_path +
              " --out-dir " + tmp.path("work")) == 2);
    CHECK(run("encode --config " + tmp.path("desk.cfg") + " --manifest " + manifest_path +
              " --out-dir " + tmp.path("work") + " --encoder vlad") == 2);

    // Data errors exit 3: strict extract with an unreadable image.
    std::ofstream(tmp.path("m_missing.csv"))
        << "img_c0_0.lccdimg,a,train\nnope.lccdimg,a,test\n"
        << "img_c1_0.lccdimg,b,train\nimg_c1_1.lccdimg,b,test\n";
    CHECK(run("extract --config " + tmp.path("desk.cfg") + " --manifest " +
              tmp.path("m_missing.csv") + " --out-dir " + tmp.path("strictwork") +
              " --strict") == 3);
    // Without --strict the same run succeeds and records the skip.
    CHECK(run("extract --config " + tmp.path("desk.cfg") + " --manifest " +
              tmp.path("m_missing.csv") + " --out-dir " + tmp.path("laxwork")) == 0);
    CHECK(run("train-eval --config " + tmp.path("desk.cfg") + " --manifest " +
              manifest_path + " --out-dir " + tmp.path("nowhere") + " --encodings " +
              tmp.path("nowhere/none.enc")) == 3);
}
#endif
