#include "lccd/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lccd/errors.hpp"

namespace lccd {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfigError("config: bad integer for " + key + ": '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfigError("config: bad integer for " + key + ": '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfigError("config: bad number for " + key + ": '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw InvalidConfigError("config: bad boolean for " + key + ": '" + value + "'");
}

std::vector<ChannelPair> parse_pairs(const std::string& value) {
    std::vector<ChannelPair> pairs;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) pairs.push_back(parse_channel_pair(t));
    }
    if (pairs.empty()) throw InvalidConfigError("config: channel_pairs is empty");
    return pairs;
}

std::string pairs_to_string(const std::vector<ChannelPair>& pairs) {
    std::string out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i > 0) out += ",";
        out += to_string(pairs[i]);
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

DescriptorOptions descriptor_options(const PipelineConfig& config) {
    DescriptorOptions opts;
    opts.resize_width = config.resize_width;
    opts.resize_height = config.resize_height;
    opts.grid_rows = config.grid_rows;
    opts.grid_cols = config.grid_cols;
    opts.bins = config.bins;
    opts.subspace.window = config.subspace_window;
    opts.kind = config.divergence;
    opts.pairs = config.pairs;
    return opts;
}

void validate_config(const PipelineConfig& c) {
    if (c.grid_rows < 3 || c.grid_cols < 3)
        throw InvalidConfigError("config: grid must be at least 3x3");
    if (c.resize_width < c.grid_cols || c.resize_height < c.grid_rows)
        throw InvalidConfigError("config: resize dimensions smaller than the grid");
    if (c.bins < 2) throw InvalidConfigError("config: bins must be >= 2");
    if (c.subspace_window < 1 || c.subspace_window > c.bins)
        throw InvalidConfigError("config: subspace_window must be in [1, bins]");
    if (c.divergence.family == DivergenceFamily::Alpha &&
        (c.divergence.alpha == 0.0 || c.divergence.alpha == 1.0))
        throw InvalidConfigError("config: alpha parameter must be outside {0, 1}");
    if (c.pairs.empty()) throw InvalidConfigError("config: channel_pairs is empty");
    if (c.pca_dim < 1) throw InvalidConfigError("config: pca_dim must be >= 1");
    if (c.pca_sample_cap < 1 || c.gmm_sample_cap < 1)
        throw InvalidConfigError("config: sample caps must be >= 1");
    if (c.gmm_components < 1) throw InvalidConfigError("config: gmm_components must be >= 1");
    if (c.gmm_max_iter < 1) throw InvalidConfigError("config: gmm_max_iter must be >= 1");
    if (!(c.gmm_tol > 0.0)) throw InvalidConfigError("config: gmm_tol must be > 0");
    if (c.encoder != "fv" && c.encoder != "bow")
        throw InvalidConfigError("config: encoder must be 'fv' or 'bow', got '" +
                                 c.encoder + "'");
    if (c.svm_epochs < 1) throw InvalidConfigError("config: svm_epochs must be >= 1");
    if (c.svm_l2 < 0.0) throw InvalidConfigError("config: svm_l2 must be >= 0");
    if (!(c.svm_learning_rate > 0.0))
        throw InvalidConfigError("config: svm_learning_rate must be > 0");
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig c;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidConfigError("config line " + std::to_string(line_no) +
                                     ": expected key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));

        if (key == "resize_width") c.resize_width = static_cast<int>(parse_int(key, value));
        else if (key == "resize_height") c.resize_height = static_cast<int>(parse_int(key, value));
        else if (key == "grid_rows") c.grid_rows = static_cast<int>(parse_int(key, value));
        else if (key == "grid_cols") c.grid_cols = static_cast<int>(parse_int(key, value));
        else if (key == "bins") c.bins = static_cast<int>(parse_int(key, value));
        else if (key == "subspace_window") c.subspace_window = static_cast<int>(parse_int(key, value));
        else if (key == "divergence") c.divergence = DivergenceKind::parse(value);
        else if (key == "channel_pairs") c.pairs = parse_pairs(value);
        else if (key == "pca_dim") c.pca_dim = static_cast<int>(parse_int(key, value));
        else if (key == "pca_whiten") c.pca_whiten = parse_bool(key, value);
        else if (key == "pca_sample_cap") c.pca_sample_cap = parse_int(key, value);
        else if (key == "gmm_components") c.gmm_components = static_cast<int>(parse_int(key, value));
        else if (key == "gmm_sample_cap") c.gmm_sample_cap = parse_int(key, value);
        else if (key == "gmm_max_iter") c.gmm_max_iter = static_cast<int>(parse_int(key, value));
        else if (key == "gmm_tol") c.gmm_tol = parse_double(key, value);
        else if (key == "encoder") c.encoder = value;
        else if (key == "svm_l2") c.svm_l2 = parse_double(key, value);
        else if (key == "svm_epochs") c.svm_epochs = static_cast<int>(parse_int(key, value));
        else if (key == "svm_learning_rate") c.svm_learning_rate = parse_double(key, value);
        else if (key == "seed") c.seed = parse_u64(key, value);
        else throw InvalidConfigError("config line " + std::to_string(line_no) +
                                      ": unknown key '" + key + "'");
    }
    validate_config(c);
    return c;
}

std::string serialize_config(const PipelineConfig& c) {
    std::string out;
    out += "# image geometry\n";
    out += "resize_width = " + std::to_string(c.resize_width) + "\n";
    out += "resize_height = " + std::to_string(c.resize_height) + "\n";
    out += "grid_rows = " + std::to_string(c.grid_rows) + "\n";
    out += "grid_cols = " + std::to_string(c.grid_cols) + "\n";
    out += "# contrast features\n";
    out += "bins = " + std::to_string(c.bins) + "\n";
    out += "subspace_window = " + std::to_string(c.subspace_window) + "\n";
    out += "divergence = " + c.divergence.to_string() + "\n";
    out += "channel_pairs = " + pairs_to_string(c.pairs) + "\n";
    out += "# reduction\n";
    out += "pca_dim = " + std::to_string(c.pca_dim) + "\n";
    out += "pca_whiten = " + std::string(c.pca_whiten ? "true" : "false") + "\n";
    out += "pca_sample_cap = " + std::to_string(c.pca_sample_cap) + "\n";
    out += "# codebook and encoding\n";
    out += "gmm_components = " + std::to_string(c.gmm_components) + "\n";
    out += "gmm_sample_cap = " + std::to_string(c.gmm_sample_cap) + "\n";
    out += "gmm_max_iter = " + std::to_string(c.gmm_max_iter) + "\n";
    out += "gmm_tol = " + fmt_double(c.gmm_tol) + "\n";
    out += "encoder = " + c.encoder + "\n";
    out += "# classifier\n";
    out += "svm_l2 = " + fmt_double(c.svm_l2) + "\n";
    out += "svm_epochs = " + std::to_string(c.svm_epochs) + "\n";
    out += "svm_learning_rate = " + fmt_double(c.svm_learning_rate) + "\n";
    out += "seed = " + std::to_string(c.seed) + "\n";
    return out;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfigError("cannot open config: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void save_config(const std::string& path, const PipelineConfig& config) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InvalidConfigError("cannot open config for writing: " + path);
    out << serialize_config(config);
    if (!out) throw InvalidConfigError("config write failed: " + path);
}

} // namespace lccd
