#pragma once

#include <span>
#include <string>
#include <vector>

namespace lccd {

/// The divergence family used to measure contrast between two histograms.
enum class DivergenceFamily {
    Bhattacharyya,
    KullbackLeibler,
    SymmetricKullbackLeibler,
    Hellinger,
    TotalVariation,
    Pearson,
    Alpha,
};

/// A divergence family plus its parameter (only Alpha has one).
/// Alpha requires a finite parameter outside {0, 1}.
struct DivergenceKind {
    DivergenceFamily family = DivergenceFamily::Hellinger;
    double alpha = 0.5;

    bool operator==(const DivergenceKind&) const = default;

    static DivergenceKind hellinger() { return {}; }

    /// Parses "hellinger", "kl", "symkl", "bhattacharyya", "tv", "pearson"
    /// or "alpha:<value>". Throws InvalidConfigError on anything else.
    static DivergenceKind parse(const std::string& text);
    std::string to_string() const;
};

/// Sliding-window configuration for the subspace extension: a window of
/// `window` consecutive bins moved densely over a d-bin histogram yields
/// d - window + 1 windowed contrast values.
struct SubspaceConfig {
    int window = 3;

    bool operator==(const SubspaceConfig&) const = default;
};

/// Divergence between two discrete probability distributions of equal length.
///
/// Each distribution must be nonnegative and sum to 1 within 1e-9. Kinds with
/// logarithmic or rational terms return +infinity when the support of p is not
/// contained in the support of q; 0*log(0) style terms contribute 0.
///
/// Per-bin terms are accumulated in value order, which makes the result
/// exactly invariant under any simultaneous permutation of the bins of p and q.
double divergence(const DivergenceKind& kind, std::span<const double> p,
                  std::span<const double> q);

/// Windowed divergences: element j (0-based) applies `kind` to the raw,
/// unrenormalized bins j .. j+window-1 of p and q. Output length is
/// p.size() - window + 1. Throws InvalidConfigError when window is out of
/// range, InvalidInputError on malformed distributions.
std::vector<double> subspace_divergence(const DivergenceKind& kind,
                                        std::span<const double> p,
                                        std::span<const double> q,
                                        const SubspaceConfig& cfg);

/// As above but appends into `out` (avoids per-call allocations in the
/// descriptor hot loop). Inputs are assumed validated by the caller.
void subspace_divergence_append(const DivergenceKind& kind,
                                std::span<const double> p,
                                std::span<const double> q,
                                const SubspaceConfig& cfg,
                                std::vector<double>& out);

} // namespace lccd
