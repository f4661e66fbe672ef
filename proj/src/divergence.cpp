#include "lccd/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <vector>

#include "lccd/errors.hpp"

namespace lccd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTolerance = 1e-9;

void validate_kind(const DivergenceKind& kind) {
    if (kind.family == DivergenceFamily::Alpha) {
        if (!std::isfinite(kind.alpha) || kind.alpha == 0.0 || kind.alpha == 1.0)
            throw InvalidConfigError(
                "alpha divergence parameter must be finite and outside {0, 1}");
    }
}

void validate_pair(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw InvalidInputError("divergence: distribution lengths differ (" +
                                std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()) + ")");
    if (p.empty()) throw InvalidInputError("divergence: empty distributions");
    for (std::span<const double> d : {p, q}) {
        double sum = 0.0;
        for (double v : d) {
            if (!(v >= 0.0))
                throw InvalidInputError("divergence: negative or NaN bin value");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kMassTolerance)
            throw InvalidInputError("divergence: distribution mass " +
                                    std::to_string(sum) + " is not 1");
    }
}

double kl_term(double p, double q) {
    if (p <= 0.0) return 0.0; // 0*log(0/q) and 0*log(0/0) contribute nothing
    if (q <= 0.0) return kInf;
    return p * std::log(p / q);
}

double bin_term(const DivergenceKind& kind, double p, double q) {
    switch (kind.family) {
    case DivergenceFamily::Bhattacharyya:
        return std::sqrt(p * q);
    case DivergenceFamily::KullbackLeibler:
        return kl_term(p, q);
    case DivergenceFamily::SymmetricKullbackLeibler:
        return kl_term(p, q) + kl_term(q, p);
    case DivergenceFamily::Hellinger: {
        const double d = std::sqrt(p) - std::sqrt(q);
        return 0.5 * d * d;
    }
    case DivergenceFamily::TotalVariation:
        return std::abs(p - q);
    case DivergenceFamily::Pearson: {
        if (q <= 0.0) return p <= 0.0 ? 0.0 : kInf;
        const double d = p - q;
        return d * d / q;
    }
    case DivergenceFamily::Alpha: {
        const double a = kind.alpha;
        if (p <= 0.0 && q <= 0.0) return 0.0;
        if (p <= 0.0) return a > 0.0 ? 0.0 : kInf;
        if (q <= 0.0) return a < 1.0 ? 0.0 : kInf;
        return std::pow(p, a) * std::pow(q, 1.0 - a);
    }
    }
    return 0.0;
}

// Bhattacharyya and Alpha wrap their bin sums in an outer transform; every
// other family is a plain sum of per-bin terms.
double finish(const DivergenceKind& kind, double term_sum) {
    switch (kind.family) {
    case DivergenceFamily::Bhattacharyya:
        return -std::log(term_sum);
    case DivergenceFamily::Alpha:
        return (1.0 - term_sum) / (kind.alpha * (1.0 - kind.alpha));
    default:
        return term_sum;
    }
}

// Sums after sorting, so the result does not depend on the order the terms
// were produced in. This is what makes bin-permutation invariance exact
// rather than approximate.
double ordered_sum(double* begin, double* end) {
    std::sort(begin, end);
    double s = 0.0;
    for (double* it = begin; it != end; ++it) s += *it;
    return s;
}

double eval_window(const DivergenceKind& kind, std::span<const double> p,
                   std::span<const double> q, std::size_t offset, std::size_t len,
                   std::vector<double>& scratch) {
    scratch.resize(len);
    for (std::size_t i = 0; i < len; ++i)
        scratch[i] = bin_term(kind, p[offset + i], q[offset + i]);
    return finish(kind, ordered_sum(scratch.data(), scratch.data() + len));
}

} // namespace

DivergenceKind DivergenceKind::parse(const std::string& text) {
    if (text == "hellinger") return {DivergenceFamily::Hellinger, 0.5};
    if (text == "kl") return {DivergenceFamily::KullbackLeibler, 0.5};
    if (text == "symkl") return {DivergenceFamily::SymmetricKullbackLeibler, 0.5};
    if (text == "bhattacharyya") return {DivergenceFamily::Bhattacharyya, 0.5};
    if (text == "tv") return {DivergenceFamily::TotalVariation, 0.5};
    if (text == "pearson") return {DivergenceFamily::Pearson, 0.5};
    if (text.rfind("alpha:", 0) == 0) {
        char* end = nullptr;
        const std::string num = text.substr(6);
        const double a = std::strtod(num.c_str(), &end);
        if (end == num.c_str() || *end != '\0')
            throw InvalidConfigError("cannot parse alpha parameter in '" + text + "'");
        DivergenceKind kind{DivergenceFamily::Alpha, a};
        validate_kind(kind);
        return kind;
    }
    throw InvalidConfigError("unknown divergence kind '" + text + "'");
}

std::string DivergenceKind::to_string() const {
    switch (family) {
    case DivergenceFamily::Bhattacharyya: return "bhattacharyya";
    case DivergenceFamily::KullbackLeibler: return "kl";
    case DivergenceFamily::SymmetricKullbackLeibler: return "symkl";
    case DivergenceFamily::Hellinger: return "hellinger";
    case DivergenceFamily::TotalVariation: return "tv";
    case DivergenceFamily::Pearson: return "pearson";
    case DivergenceFamily::Alpha: {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "alpha:%.17g", alpha);
        return buf;
    }
    }
    return "hellinger";
}

double divergence(const DivergenceKind& kind, std::span<const double> p,
                  std::span<const double> q) {
    validate_kind(kind);
    validate_pair(p, q);
    std::vector<double> scratch;
    return eval_window(kind, p, q, 0, p.size(), scratch);
}

std::vector<double> subspace_divergence(const DivergenceKind& kind,
                                        std::span<const double> p,
                                        std::span<const double> q,
                                        const SubspaceConfig& cfg) {
    validate_kind(kind);
    validate_pair(p, q);
    if (cfg.window < 1 || static_cast<std::size_t>(cfg.window) > p.size())
        throw InvalidConfigError("subspace window " + std::to_string(cfg.window) +
                                 " out of range for " + std::to_string(p.size()) +
                                 " bins");
    std::vector<double> out;
    out.reserve(p.size() - cfg.window + 1);
    subspace_divergence_append(kind, p, q, cfg, out);
    return out;
}

void subspace_divergence_append(const DivergenceKind& kind,
                                std::span<const double> p,
                                std::span<const double> q,
                                const SubspaceConfig& cfg,
                                std::vector<double>& out) {
    const std::size_t d = p.size();
    const std::size_t w = static_cast<std::size_t>(cfg.window);
    std::vector<double> scratch;
    for (std::size_t j = 0; j + w <= d; ++j)
        out.push_back(eval_window(kind, p, q, j, w, scratch));
}

} // namespace lccd
