// Acceptance suite: exercises the pipeline's contract end to end and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lccd/classify.hpp"
#include "lccd/colorgrid.hpp"
#include "lccd/config.hpp"
#include "lccd/descriptor.hpp"
#include "lccd/divergence.hpp"
#include "lccd/encoding.hpp"
#include "lccd/formats.hpp"
#include "lccd/gmm.hpp"
#include "lccd/image.hpp"
#include "lccd/manifest.hpp"
#include "lccd/pca.hpp"
#include "lccd/pipeline.hpp"
#include "lccd/rng.hpp"
#include "support/synthetic.hpp"

namespace {

using lccd::DivergenceFamily;
using lccd::DivergenceKind;

struct Checker {
    int checks = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.push_back(what);
    }
};

const std::vector<DivergenceKind> kAllKinds = {
    {DivergenceFamily::Bhattacharyya, 0.5},
    {DivergenceFamily::KullbackLeibler, 0.5},
    {DivergenceFamily::SymmetricKullbackLeibler, 0.5},
    {DivergenceFamily::Hellinger, 0.5},
    {DivergenceFamily::TotalVariation, 0.5},
    {DivergenceFamily::Pearson, 0.5},
    {DivergenceFamily::Alpha, 0.5},
};

// Brute-force re-evaluation of one window straight from the definitions,
// with plain left-to-right summation (independent of the library path).
double oracle_window(const DivergenceKind& kind, const std::vector<double>& p,
                     const std::vector<double>& q, std::size_t begin, std::size_t len) {
    const double inf = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t k = begin; k < begin + len; ++k) {
        switch (kind.family) {
        case DivergenceFamily::Bhattacharyya:
            sum += std::sqrt(p[k] * q[k]);
            break;
        case DivergenceFamily::KullbackLeibler:
            if (p[k] > 0.0) sum += q[k] > 0.0 ? p[k] * std::log(p[k] / q[k]) : inf;
            break;
        case DivergenceFamily::SymmetricKullbackLeibler:
            if (p[k] > 0.0) sum += q[k] > 0.0 ? p[k] * std::log(p[k] / q[k]) : inf;
            if (q[k] > 0.0) sum += p[k] > 0.0 ? q[k] * std::log(q[k] / p[k]) : inf;
            break;
        case DivergenceFamily::Hellinger: {
            const double t = std::sqrt(p[k]) - std::sqrt(q[k]);
            sum += 0.5 * t * t;
            break;
        }
        case DivergenceFamily::TotalVariation:
            sum += std::abs(p[k] - q[k]);
            break;
        case DivergenceFamily::Pearson:
            if (q[k] > 0.0)
                sum += (p[k] - q[k]) * (p[k] - q[k]) / q[k];
            else if (p[k] > 0.0)
                sum += inf;
            break;
        case DivergenceFamily::Alpha:
            if (p[k] > 0.0 && q[k] > 0.0)
                sum += std::pow(p[k], kind.alpha) * std::pow(q[k], 1.0 - kind.alpha);
            else if (p[k] > 0.0 && kind.alpha > 1.0)
                sum += inf;
            else if (q[k] > 0.0 && kind.alpha < 0.0)
                sum += inf;
            break;
        }
    }
    if (kind.family == DivergenceFamily::Bhattacharyya) return -std::log(sum);
    if (kind.family == DivergenceFamily::Alpha)
        return (1.0 - sum) / (kind.alpha * (1.0 - kind.alpha));
    return sum;
}

bool close_or_both_inf(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol;
}

// ---------------------------------------------------------------- criterion 1
void divergence_axioms(Checker& check) {
    lccd::SplitMix64 rng(1001);
    const DivergenceKind hellinger = DivergenceKind::hellinger();
    for (int trial = 0; trial < 1000; ++trial) {
        const std::vector<double> p = testsupport::random_distribution(rng, 20, trial % 7 == 0);
        const std::vector<double> q = testsupport::random_distribution(rng, 20, trial % 9 == 0);
        std::vector<std::size_t> perm(20);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = 19; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
        std::vector<double> sp(20);
        std::vector<double> sq(20);
        for (std::size_t i = 0; i < 20; ++i) {
            sp[i] = p[perm[i]];
            sq[i] = q[perm[i]];
        }

        for (const DivergenceKind& kind : kAllKinds) {
            check.expect(std::abs(lccd::divergence(kind, p, p)) <= 1e-12,
                         "identity not zero for " + kind.to_string());
            const double d = lccd::divergence(kind, p, q);
            check.expect(d >= 0.0, "negative divergence for " + kind.to_string());
            check.expect(d == lccd::divergence(kind, sp, sq),
                         "bin permutation changed " + kind.to_string());
        }
        const double pq = lccd::divergence(hellinger, p, q);
        check.expect(pq == lccd::divergence(hellinger, q, p), "hellinger asymmetry");
        check.expect(pq >= 0.0 && pq <= 1.0, "hellinger bound violated");
    }
}

// ---------------------------------------------------------------- criterion 2
void subspace_oracle(Checker& check) {
    lccd::SplitMix64 rng(2002);
    const std::vector<int> expected_lengths = {8, 18, 28};
    const std::vector<int> dims = {10, 20, 30};
    for (std::size_t di = 0; di < dims.size(); ++di) {
        const int d = dims[di];
        for (int trial = 0; trial < 200; ++trial) {
            const std::vector<double> p = testsupport::random_distribution(rng, d, trial % 6 == 0);
            const std::vector<double> q = testsupport::random_distribution(rng, d, trial % 8 == 0);
            for (const DivergenceKind& kind : kAllKinds) {
                const std::vector<double> got = lccd::subspace_divergence(kind, p, q, {3});
                check.expect(got.size() == static_cast<std::size_t>(expected_lengths[di]),
                             "wrong subspace count for d=" + std::to_string(d));
                for (std::size_t j = 0; j < got.size(); ++j) {
                    check.expect(
                        close_or_both_inf(got[j], oracle_window(kind, p, q, j, 3), 1e-12),
                        "window mismatch for " + kind.to_string() + " at d=" +
                            std::to_string(d) + " j=" + std::to_string(j));
                }
            }
        }
    }
}

// ---------------------------------------------------------------- criterion 3
void shape_contract(Checker& check) {
    const lccd::DescriptorOptions opts; // library defaults
    const lccd::RasterImage img = testsupport::random_image(512, 400, 3003);
    const lccd::ExtractedImage out = lccd::extract_image(img, opts, "img");

    check.expect(out.spatial.patch_count() == 2304, "spatial patch count != 48*48");
    check.expect(out.channel.patch_count() == 2304, "channel patch count != 48*48");
    check.expect(out.spatial.dim == 432, "spatial dim != 432");
    check.expect(out.channel.dim == 324, "channel dim != 324");

    // Fused encoding dimensionality at K=32, PCA 80 per stream.
    lccd::SplitMix64 rng(3);
    std::vector<lccd::EncodedImage> parts;
    for (const lccd::DescriptorSet* set : {&out.spatial, &out.channel}) {
        Eigen::MatrixXd rows(set->patch_count(), set->dim);
        for (int p = 0; p < set->patch_count(); ++p)
            for (int c = 0; c < set->dim; ++c)
                rows(p, c) = set->values[static_cast<std::size_t>(p) * set->dim + c];
        const lccd::PcaModel pca = lccd::fit_pca(rows, 80, 1 << 20, 7);
        const Eigen::MatrixXd projected = lccd::project_rows(pca, rows);

        lccd::GmmModel gmm;
        gmm.weights = Eigen::VectorXd::Constant(32, 1.0 / 32.0);
        gmm.means.resize(32, 80);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 80; ++c) gmm.means(r, c) = rng.normal();
        gmm.variances = Eigen::MatrixXd::Ones(32, 80);
        parts.push_back(lccd::fisher_vector(gmm, projected, "img"));
        check.expect(parts.back().values.size() == 5120, "per-stream FV dim != 2*32*80");
    }
    const lccd::EncodedImage fused = lccd::concat_encodings(parts);
    check.expect(fused.values.size() == 10240, "fused encoding dim != 10240");
    double norm = 0.0;
    for (float v : fused.values) norm += static_cast<double>(v) * v;
    check.expect(std::abs(std::sqrt(norm) - 1.0) <= 1e-6, "fused encoding not unit norm");
}

// ---------------------------------------------------------------- criterion 4
void degeneracy(Checker& check) {
    const lccd::DescriptorOptions opts; // defaults
    const auto encode_streams = [&](const lccd::ExtractedImage& extracted) {
        std::vector<lccd::EncodedImage> parts;
        for (const lccd::DescriptorSet* set : {&extracted.spatial, &extracted.channel}) {
            Eigen::MatrixXd rows(set->patch_count(), set->dim);
            for (int p = 0; p < set->patch_count(); ++p)
                for (int c = 0; c < set->dim; ++c)
                    rows(p, c) = set->values[static_cast<std::size_t>(p) * set->dim + c];
            const lccd::PcaModel pca = lccd::fit_pca(rows, 80, 1 << 20, 11);
            const Eigen::MatrixXd projected = lccd::project_rows(pca, rows);
            const lccd::GmmFitResult gmm = lccd::fit_gmm(projected, 32, {50, 1e-5, 13});
            parts.push_back(lccd::fisher_vector(gmm.model, projected, set->image_id));
        }
        return lccd::concat_encodings(parts);
    };

    // Both streams vanish for a constant gray image; a constant colored image
    // still zeroes the spatial stream (no spatial contrast anywhere) but keeps
    // its genuine cross-channel contrast.
    const lccd::ExtractedImage constant = lccd::extract_image(
        testsupport::constant_image(470, 380, 120, 120, 120), opts, "const");
    for (float v : constant.spatial.values)
        check.expect(v == 0.0f, "constant image spatial stream not zero");
    for (float v : constant.channel.values)
        check.expect(v == 0.0f, "constant image channel stream not zero");
    const lccd::EncodedImage const_enc = encode_streams(constant);
    for (float v : const_enc.values)
        check.expect(std::isfinite(v), "constant image encoding not finite");

    const lccd::ExtractedImage colored = lccd::extract_image(
        testsupport::constant_image(470, 380, 120, 60, 200), opts, "colored");
    for (float v : colored.spatial.values)
        check.expect(v == 0.0f, "constant colored image spatial stream not zero");

    const lccd::ExtractedImage gray =
        lccd::extract_image(testsupport::gray_image(470, 380, 4004), opts, "gray");
    for (float v : gray.channel.values)
        check.expect(v == 0.0f, "grayscale channel stream not zero");
    const lccd::EncodedImage gray_enc = encode_streams(gray);
    for (float v : gray_enc.values)
        check.expect(std::isfinite(v), "grayscale encoding not finite");
}

// ---------------------------------------------------------------- criterion 5
void em_monotonic(Checker& check) {
    lccd::SplitMix64 rng(5005);
    const int k = 8;
    const int dim = 80;
    Eigen::MatrixXd centers(k, dim);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < dim; ++c) centers(r, c) = rng.uniform(0.0, 100.0);

    Eigen::MatrixXd samples(10000, dim);
    std::vector<double> radius(static_cast<std::size_t>(k), 0.0);
    for (int n = 0; n < 10000; ++n) {
        const int cluster = n % k;
        double d2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            const double noise = rng.normal();
            samples(n, c) = centers(cluster, c) + noise;
            d2 += noise * noise;
        }
        radius[static_cast<std::size_t>(cluster)] =
            std::max(radius[static_cast<std::size_t>(cluster)], std::sqrt(d2));
    }

    const lccd::GmmFitResult fit = lccd::fit_gmm(samples, k, {100, 1e-6, 50});
    check.expect(fit.log_likelihood.size() >= 2, "EM stopped before two iterations");
    for (std::size_t i = 1; i < fit.log_likelihood.size(); ++i)
        check.expect(fit.log_likelihood[i] >= fit.log_likelihood[i - 1] - 1e-8,
                     "log-likelihood decreased at iteration " + std::to_string(i));
    for (int c = 0; c < k; ++c) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < k; ++j)
            best = std::min(best, (fit.model.means.row(j) - centers.row(c)).norm());
        check.expect(best <= radius[static_cast<std::size_t>(c)],
                     "planted center " + std::to_string(c) + " not recovered (" +
                         std::to_string(best) + " > " +
                         std::to_string(radius[static_cast<std::size_t>(c)]) + ")");
    }
}

// ---------------------------------------------------------------- criterion 6
void fv_gradient_sanity(Checker& check) {
    lccd::GmmModel model;
    model.weights = Eigen::Vector4d(0.1, 0.2, 0.3, 0.4);
    model.means.resize(4, 5);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 5; ++c) model.means(r, c) = 50.0 * r + 3.0 * c;
    model.variances = Eigen::MatrixXd::Ones(4, 5);

    Eigen::MatrixXd at_means(10, 5);
    int row = 0;
    for (int r = 0; r < 4; ++r)
        for (int i = 0; i < r + 1; ++i) at_means.row(row++) = model.means.row(r);
    const Eigen::VectorXd raw = lccd::fisher_vector_raw(model, at_means);
    check.expect(raw.head(20).norm() < 1e-6,
                 "mean-gradient norm " + std::to_string(raw.head(20).norm()) +
                     " not < 1e-6 at the model optimum");

    lccd::GmmModel single;
    single.weights = Eigen::VectorXd::Ones(1);
    single.means.resize(1, 3);
    single.means << 1.0, -2.0, 0.5;
    single.variances.resize(1, 3);
    single.variances << 4.0, 0.25, 1.0;
    Eigen::MatrixXd x(1, 3);
    x << 3.0, -1.0, 0.5;
    const Eigen::VectorXd fv = lccd::fisher_vector_raw(single, x);
    for (int d = 0; d < 3; ++d) {
        const double sigma = std::sqrt(single.variances(0, d));
        const double u = (x(0, d) - single.means(0, d)) / sigma;
        check.expect(std::abs(fv(d) - u) <= 1e-10, "closed-form mean gradient mismatch");
        check.expect(std::abs(fv(3 + d) - (u * u - 1.0) / std::sqrt(2.0)) <= 1e-10,
                     "closed-form variance gradient mismatch");
    }
}

// ---------------------------------------------------------------- criterion 7
void pca_suite(Checker& check) {
    lccd::SplitMix64 rng(7007);
    Eigen::MatrixXd x(300, 16);
    for (Eigen::Index r = 0; r < x.rows(); ++r)
        for (Eigen::Index c = 0; c < x.cols(); ++c)
            x(r, c) = rng.normal() * (1.0 + static_cast<double>(c));

    const lccd::PcaModel model = lccd::fit_pca(x, 10, 1 << 20, 1);
    const Eigen::MatrixXd gram = model.components * model.components.transpose();
    check.expect((gram - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-6,
                 "components not orthonormal");
    check.expect(lccd::project(model, model.mean).cwiseAbs().maxCoeff() <= 1e-10,
                 "mean does not project to zero");

    const lccd::PcaModel full = lccd::fit_pca(x, 16, 1 << 20, 1);
    const Eigen::MatrixXd projected = lccd::project_rows(full, x);
    for (int i = 0; i < 40; ++i) {
        for (int j = i + 1; j < 40; ++j) {
            const double orig = (x.row(i) - x.row(j)).norm();
            const double proj = (projected.row(i) - projected.row(j)).norm();
            check.expect(std::abs(orig - proj) <= 1e-6 * std::max(1.0, orig),
                         "K=D projection is not an isometry");
        }
    }

    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 16; ++k) {
        const lccd::PcaModel m = lccd::fit_pca(x, k, 1 << 20, 1);
        const Eigen::MatrixXd p = lccd::project_rows(m, x);
        const Eigen::MatrixXd back = (p * m.components).rowwise() + m.mean.transpose();
        const double err = (back - x).norm();
        check.expect(err <= prev + 1e-9, "reconstruction error increased at K=" +
                                             std::to_string(k));
        prev = err;
    }
}

// ---------------------------------------------------------------- criterion 8
void synthetic_benchmark(Checker& check) {
    namespace fs = std::filesystem;
    const testsupport::TempDir tmp("acceptance_bench");

    lccd::PipelineConfig config;
    config.resize_width = 120;
    config.resize_height = 120;
    config.grid_rows = 20;
    config.grid_cols = 20;
    config.bins = 20;
    config.subspace_window = 3;
    config.pca_dim = 40;
    config.gmm_components = 8;
    config.svm_epochs = 200;
    config.seed = 8008;

    // 5 classes x 40 color-texture images, 30/10 split.
    std::string manifest_text;
    for (int cls = 0; cls < 5; ++cls) {
        for (int i = 0; i < 40; ++i) {
            const std::string name =
                "tex_c" + std::to_string(cls) + "_" + std::to_string(i) + ".lccdimg";
            lccd::write_raw_image(tmp.path(name),
                                  testsupport::color_texture(cls, i, 160, 140));
            manifest_text += name + ",class" + std::to_string(cls) + "," +
                             (i < 30 ? "train" : "test") + "\n";
        }
    }
    std::ofstream(tmp.path("manifest.csv")) << manifest_text;
    const lccd::Manifest manifest = lccd::load_manifest(tmp.path("manifest.csv"));

    const lccd::ExtractResult extracted = lccd::run_extract(config, manifest, tmp.path());
    check.expect(extracted.skipped.empty(), "benchmark extraction skipped images");

    // Provided external stream: luminance-gradient orientation histograms.
    testsupport::write_gradient_stream(tmp.path("grad.dsc"), manifest.images(),
                                       config.resize_width, config.resize_height,
                                       config.grid_rows, config.grid_cols);

    std::vector<lccd::StreamSpec> all_streams = lccd::default_streams(tmp.path());
    all_streams.push_back({"grad", tmp.path("grad.dsc")});
    lccd::run_fit(config, manifest, all_streams, tmp.path());

    const auto accuracy_of = [&](const std::vector<lccd::StreamSpec>& streams,
                                 const std::string& out_name) {
        const std::string enc = lccd::run_encode(config, manifest, streams, tmp.path(),
                                                 tmp.path(out_name));
        const lccd::EvalResult result = lccd::run_train_eval(config, manifest, enc);
        return result.reports.at(0).accuracy;
    };

    const double acc_lccd = accuracy_of(lccd::default_streams(tmp.path()), "lccd.enc");
    const double acc_grad =
        accuracy_of({{"grad", tmp.path("grad.dsc")}}, "grad.enc");
    const double acc_fused = accuracy_of(all_streams, "fused.enc");

    std::fprintf(stderr,
                 "acceptance: benchmark accuracies: color contrast %.3f, gradient %.3f, "
                 "fused %.3f\n",
                 acc_lccd, acc_grad, acc_fused);
    check.expect(acc_lccd >= 0.90, "color-contrast accuracy " + std::to_string(acc_lccd) +
                                       " below 0.90");
    check.expect(acc_fused >= std::max(acc_lccd, acc_grad) - 1e-12,
                 "fusion (" + std::to_string(acc_fused) +
                     ") below the better single stream (" +
                     std::to_string(std::max(acc_lccd, acc_grad)) + ")");
}

// ---------------------------------------------------------------- criterion 9
void determinism(Checker& check) {
    const testsupport::TempDir tmp("acceptance_det");
    lccd::PipelineConfig config;
    config.resize_width = 60;
    config.resize_height = 60;
    config.grid_rows = 10;
    config.grid_cols = 10;
    config.bins = 12;
    config.subspace_window = 3;
    config.pca_dim = 16;
    config.gmm_components = 4;
    config.seed = 424242;

    std::string manifest_text;
    for (int cls = 0; cls < 2; ++cls) {
        for (int i = 0; i < 6; ++i) {
            const std::string name =
                "det_c" + std::to_string(cls) + "_" + std::to_string(i) + ".lccdimg";
            lccd::write_raw_image(tmp.path(name),
                                  testsupport::color_texture(cls, i, 80, 70));
            manifest_text += name + ",class" + std::to_string(cls) + "," +
                             (i < 4 ? "train" : "test") + "\n";
        }
    }
    std::ofstream(tmp.path("manifest.csv")) << manifest_text;
    const lccd::Manifest manifest = lccd::load_manifest(tmp.path("manifest.csv"));

    for (const char* dir : {"r1", "r2"}) {
        lccd::run_extract(config, manifest, tmp.path(dir));
        lccd::run_fit(config, manifest, lccd::default_streams(tmp.path(dir)), tmp.path(dir));
        lccd::run_encode(config, manifest, lccd::default_streams(tmp.path(dir)),
                         tmp.path(dir), tmp.path(std::string(dir) + "/encodings.enc"));
        const lccd::EvalResult result = lccd::run_train_eval(
            config, manifest, tmp.path(std::string(dir) + "/encodings.enc"));
        lccd::write_eval_outputs(result, tmp.path(dir));
    }

    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
    };
    for (const char* name :
         {"spatial.dsc", "channel.dsc", "spatial.pca", "spatial.gmm", "channel.pca",
          "channel.gmm", "encodings.enc", "report.json", "confusion_p0.csv",
          "per_class_p0.csv"}) {
        const std::string a = slurp(tmp.path(std::string("r1/") + name));
        const std::string b = slurp(tmp.path(std::string("r2/") + name));
        check.expect(!a.empty() && a == b,
                     std::string(name) + " differs between identical runs");
    }
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds; // 0 = no stated budget
    std::function<void(Checker&)> fn;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "divergence-axioms", 5.0, divergence_axioms},
        {2, "subspace-oracle-equivalence", 5.0, subspace_oracle},
        {3, "shape-contract", 0.0, shape_contract},
        {4, "degeneracy-suite", 0.0, degeneracy},
        {5, "em-monotonicity-and-recovery", 30.0, em_monotonic},
        {6, "fisher-vector-gradient-sanity", 0.0, fv_gradient_sanity},
        {7, "pca-suite", 0.0, pca_suite},
        {8, "synthetic-benchmark", 600.0, synthetic_benchmark},
        {9, "pipeline-determinism", 0.0, determinism},
    };

    int failed = 0;
    for (const Criterion& criterion : criteria) {
        Checker check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.fn(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criterion.budget_seconds > 0.0 && seconds > criterion.budget_seconds)
            check.failures.push_back("runtime " + std::to_string(seconds) +
                                     "s exceeds budget " +
                                     std::to_string(criterion.budget_seconds) + "s");

        const bool ok = check.failures.empty();
        std::printf("%s  %d  %-32s (%d checks, %.2fs)\n", ok ? "PASS" : "FAIL",
                    criterion.id, criterion.name, check.checks, seconds);
        if (!ok) {
            ++failed;
            const std::size_t shown = std::min<std::size_t>(check.failures.size(), 5);
            for (std::size_t i = 0; i < shown; ++i)
                std::printf("      - %s\n", check.failures[i].c_str());
            if (check.failures.size() > shown)
                std::printf("      - ... and %zu more\n", check.failures.size() - shown);
        }
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
