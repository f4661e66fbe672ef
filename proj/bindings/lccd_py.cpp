// Python bindings for the core operations: color transforms, region
// histograms, divergences, dense descriptor extraction, PCA, GMM codebooks
// and Fisher-vector / bag-of-words encoding.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lccd/colorgrid.hpp"
#include "lccd/descriptor.hpp"
#include "lccd/divergence.hpp"
#include "lccd/encoding.hpp"
#include "lccd/errors.hpp"
#include "lccd/formats.hpp"
#include "lccd/gmm.hpp"
#include "lccd/image.hpp"
#include "lccd/pca.hpp"

namespace py = pybind11;

namespace {

lccd::RasterImage image_from_array(const py::array_t<std::uint8_t>& array) {
    const py::buffer_info info = array.request();
    if (info.ndim != 3 || info.shape[2] != 3)
        throw lccd::InvalidInputError("expected an image array of shape (H, W, 3)");
    lccd::RasterImage img;
    img.height = static_cast<int>(info.shape[0]);
    img.width = static_cast<int>(info.shape[1]);
    img.data.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    const auto view = array.unchecked<3>();
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = view(y, x, c);
    return img;
}

py::array_t<std::uint8_t> image_to_array(const lccd::RasterImage& img) {
    py::array_t<std::uint8_t> out({img.height, img.width, 3});
    auto view = out.mutable_unchecked<3>();
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) view(y, x, c) = img.at(x, y, c);
    return out;
}

py::array_t<double> plane_to_array(const lccd::ChannelPlane& plane) {
    py::array_t<double> out({plane.height, plane.width});
    auto view = out.mutable_unchecked<2>();
    for (int y = 0; y < plane.height; ++y)
        for (int x = 0; x < plane.width; ++x) view(y, x) = plane.at(x, y);
    return out;
}

lccd::ChannelPlane plane_from_array(const py::array_t<double>& array, double lo,
                                    double hi) {
    const py::buffer_info info = array.request();
    if (info.ndim != 2)
        throw lccd::InvalidInputError("expected a plane array of shape (H, W)");
    lccd::ChannelPlane plane;
    plane.height = static_cast<int>(info.shape[0]);
    plane.width = static_cast<int>(info.shape[1]);
    plane.lo = lo;
    plane.hi = hi;
    plane.values.resize(static_cast<std::size_t>(plane.width) * plane.height);
    const auto view = array.unchecked<2>();
    for (int y = 0; y < plane.height; ++y)
        for (int x = 0; x < plane.width; ++x)
            plane.values[static_cast<std::size_t>(y) * plane.width + x] = view(y, x);
    return plane;
}

// Descriptor stream as a (patch_rows, patch_cols, dim) float32 array.
py::array_t<float> set_to_array(const lccd::DescriptorSet& set) {
    py::array_t<float> out({set.patch_rows, set.patch_cols, set.dim});
    std::copy(set.values.begin(), set.values.end(), out.mutable_data());
    return out;
}

lccd::DescriptorOptions options_from_kwargs(int resize_width, int resize_height,
                                            int grid_rows, int grid_cols, int bins,
                                            int window, const std::string& divergence,
                                            const std::vector<std::string>& pairs) {
    lccd::DescriptorOptions opts;
    opts.resize_width = resize_width;
    opts.resize_height = resize_height;
    opts.grid_rows = grid_rows;
    opts.grid_cols = grid_cols;
    opts.bins = bins;
    opts.subspace.window = window;
    opts.kind = lccd::DivergenceKind::parse(divergence);
    opts.pairs.clear();
    for (const std::string& p : pairs) opts.pairs.push_back(lccd::parse_channel_pair(p));
    return opts;
}

} // namespace

PYBIND11_MODULE(_lccd, m) {
    m.doc() = "Local color contrastive descriptor pipeline (native core)";
    m.attr("__version__") = "0.1.0";

    py::register_exception<lccd::InvalidInputError>(m, "InvalidInputError",
                                                    PyExc_ValueError);
    py::register_exception<lccd::InvalidConfigError>(m, "InvalidConfigError",
                                                     PyExc_ValueError);

    m.def(
        "load_image",
        [](const std::string& path) { return image_to_array(lccd::load_image(path)); },
        py::arg("path"), "Loads a PNG/JPEG or raw-dump image as a (H, W, 3) uint8 array");
    m.def(
        "write_raw_image",
        [](const std::string& path, const py::array_t<std::uint8_t>& img) {
            lccd::write_raw_image(path, image_from_array(img));
        },
        py::arg("path"), py::arg("image"));

    m.def(
        "resize",
        [](const py::array_t<std::uint8_t>& img, int width, int height) {
            return image_to_array(lccd::resize_image(image_from_array(img), width, height));
        },
        py::arg("image"), py::arg("width"), py::arg("height"),
        "Bilinear resize to exactly (height, width)");

    m.def(
        "opponent_planes",
        [](const py::array_t<std::uint8_t>& img) {
            const lccd::OpponentPlanes opp = lccd::to_opponent(image_from_array(img));
            return py::make_tuple(plane_to_array(opp.o1), plane_to_array(opp.o2),
                                  plane_to_array(opp.o3));
        },
        py::arg("image"), "Opponent color planes (O1, O2, O3) as float64 arrays");

    m.def("opponent_ranges", [] {
        const lccd::OpponentPlanes opp =
            lccd::to_opponent(lccd::RasterImage{1, 1, {0, 0, 0}});
        return py::make_tuple(py::make_tuple(opp.o1.lo, opp.o1.hi),
                              py::make_tuple(opp.o2.lo, opp.o2.hi),
                              py::make_tuple(opp.o3.lo, opp.o3.hi));
    });

    m.def(
        "split_planes",
        [](const py::array_t<std::uint8_t>& img) {
            const lccd::RgbPlanes rgb = lccd::split_rgb(image_from_array(img));
            return py::make_tuple(plane_to_array(rgb.r), plane_to_array(rgb.g),
                                  plane_to_array(rgb.b));
        },
        py::arg("image"));

    m.def(
        "region_histograms",
        [](const py::array_t<double>& plane, double lo, double hi, int grid_rows,
           int grid_cols, int bins) {
            const lccd::HistogramGrid grid = lccd::compute_region_histograms(
                plane_from_array(plane, lo, hi), grid_rows, grid_cols, bins);
            py::array_t<double> out({grid.rows, grid.cols, grid.bins});
            std::copy(grid.values.begin(), grid.values.end(), out.mutable_data());
            return out;
        },
        py::arg("plane"), py::arg("lo"), py::arg("hi"), py::arg("grid_rows"),
        py::arg("grid_cols"), py::arg("bins"),
        "Per-region probability histograms, binned uniformly over [lo, hi]");

    m.def(
        "divergence",
        [](const std::string& kind, const std::vector<double>& p,
           const std::vector<double>& q) {
            return lccd::divergence(lccd::DivergenceKind::parse(kind), p, q);
        },
        py::arg("kind"), py::arg("p"), py::arg("q"),
        "Divergence between two discrete distributions; kind is one of "
        "hellinger, kl, symkl, bhattacharyya, tv, pearson or alpha:<value>");

    m.def(
        "subspace_divergence",
        [](const std::string& kind, const std::vector<double>& p,
           const std::vector<double>& q, int window) {
            return lccd::subspace_divergence(lccd::DivergenceKind::parse(kind), p, q,
                                             {window});
        },
        py::arg("kind"), py::arg("p"), py::arg("q"), py::arg("window") = 3,
        "Windowed divergences over all length-`window` bin runs");

    m.def(
        "extract",
        [](const py::array_t<std::uint8_t>& img, int resize_width, int resize_height,
           int grid_rows, int grid_cols, int bins, int window,
           const std::string& divergence, const std::vector<std::string>& pairs) {
            const lccd::ExtractedImage out = lccd::extract_image(
                image_from_array(img),
                options_from_kwargs(resize_width, resize_height, grid_rows, grid_cols,
                                    bins, window, divergence, pairs),
                "array");
            return py::make_tuple(set_to_array(out.spatial), set_to_array(out.channel));
        },
        py::arg("image"), py::arg("resize_width") = 470, py::arg("resize_height") = 380,
        py::arg("grid_rows") = 50, py::arg("grid_cols") = 50, py::arg("bins") = 20,
        py::arg("window") = 3, py::arg("divergence") = "hellinger",
        py::arg("pairs") = std::vector<std::string>{"rg", "rb"},
        "Dense spatial/channel contrast descriptors as "
        "(patch_rows, patch_cols, dim) float32 arrays");

    py::class_<lccd::PcaModel>(m, "PcaModel")
        .def_static(
            "fit",
            [](const Eigen::MatrixXd& samples, int output_dim, std::int64_t sample_cap,
               std::uint64_t seed, bool whiten) {
                return lccd::fit_pca(samples, output_dim, sample_cap, seed, whiten);
            },
            py::arg("samples"), py::arg("output_dim"), py::arg("sample_cap") = 200000,
            py::arg("seed") = 0, py::arg("whiten") = false)
        .def_static("load", &lccd::load_pca, py::arg("path"))
        .def("save", [](const lccd::PcaModel& model,
                        const std::string& path) { lccd::save_pca(path, model); },
             py::arg("path"))
        .def("project",
             [](const lccd::PcaModel& model, const Eigen::MatrixXd& rows) {
                 return lccd::project_rows(model, rows);
             },
             py::arg("rows"), "Projects each row of an (N, D) array to (N, K)")
        .def_property_readonly("mean",
                               [](const lccd::PcaModel& m) { return m.mean; })
        .def_property_readonly("components",
                               [](const lccd::PcaModel& m) { return m.components; })
        .def_property_readonly("input_dim", &lccd::PcaModel::input_dim)
        .def_property_readonly("output_dim", &lccd::PcaModel::output_dim);

    py::class_<lccd::GmmModel>(m, "GmmModel")
        .def_static(
            "fit",
            [](const Eigen::MatrixXd& samples, int components, int max_iter, double tol,
               std::uint64_t seed) {
                lccd::GmmFitOptions opts;
                opts.max_iter = max_iter;
                opts.tol = tol;
                opts.seed = seed;
                lccd::GmmFitResult result = lccd::fit_gmm(samples, components, opts);
                return py::make_tuple(result.model, result.log_likelihood,
                                      result.converged);
            },
            py::arg("samples"), py::arg("components"), py::arg("max_iter") = 100,
            py::arg("tol") = 1e-5, py::arg("seed") = 0,
            "Fits a diagonal GMM; returns (model, per-iteration mean "
            "log-likelihood, converged)")
        .def_static("load", &lccd::load_gmm, py::arg("path"))
        .def("save", [](const lccd::GmmModel& model,
                        const std::string& path) { lccd::save_gmm(path, model); },
             py::arg("path"))
        .def_property_readonly("weights",
                               [](const lccd::GmmModel& m) { return m.weights; })
        .def_property_readonly("means", [](const lccd::GmmModel& m) { return m.means; })
        .def_property_readonly("variances",
                               [](const lccd::GmmModel& m) { return m.variances; })
        .def_property_readonly("components", &lccd::GmmModel::components)
        .def_property_readonly("dim", &lccd::GmmModel::dim);

    m.def("responsibilities", &lccd::responsibilities, py::arg("model"),
          py::arg("samples"));
    m.def("mean_log_likelihood", &lccd::mean_log_likelihood, py::arg("model"),
          py::arg("samples"));

    m.def(
        "fisher_vector",
        [](const lccd::GmmModel& model, const Eigen::MatrixXd& descriptors) {
            const lccd::EncodedImage enc = lccd::fisher_vector(model, descriptors, "py");
            return py::array_t<float>(static_cast<py::ssize_t>(enc.values.size()),
                                      enc.values.data());
        },
        py::arg("model"), py::arg("descriptors"),
        "Power- and L2-normalized Fisher vector of the descriptor rows");
    m.def("fisher_vector_raw", &lccd::fisher_vector_raw, py::arg("model"),
          py::arg("descriptors"), "Fisher vector before any normalization");
    m.def(
        "bow_encode",
        [](const lccd::GmmModel& model, const Eigen::MatrixXd& descriptors) {
            const lccd::EncodedImage enc = lccd::bow_encode(model, descriptors, "py");
            return py::array_t<float>(static_cast<py::ssize_t>(enc.values.size()),
                                      enc.values.data());
        },
        py::arg("model"), py::arg("descriptors"),
        "L2-normalized hard-assignment histogram over the codebook");
}
