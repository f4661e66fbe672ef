#pragma once

#include <string>
#include <vector>

namespace lccd {

/// One manifest row: an image, its class label, and its split assignment
/// within one partition.
struct ManifestEntry {
    std::string path;  // resolved against the manifest's directory
    std::string label;
    bool is_train = false;
    int partition = 0;
};

/// Parsed label manifest. CSV columns: image_path,label,split[,partition].
/// `split` is "train" or "test"; `partition` defaults to 0 and allows the
/// same image set to carry several train/test splits for multi-run averaging.
struct Manifest {
    std::vector<ManifestEntry> entries;

    /// Distinct image paths in first-appearance order.
    std::vector<std::string> images() const;
    /// Label of an image (consistent across partitions by construction).
    std::string label_of(const std::string& path) const;
    /// Sorted distinct partition ids.
    std::vector<int> partitions() const;
    /// Paths of the train (or test) images of one partition, manifest order.
    std::vector<std::string> split_images(int partition, bool train) const;
};

/// Loads and validates a manifest. A header row and #-comment lines are
/// ignored. Within a partition an image must appear exactly once; an image's
/// label must agree across partitions. Throws InvalidInputError on violations.
Manifest load_manifest(const std::string& path);

/// Parses manifest text; relative image paths are resolved against base_dir.
Manifest parse_manifest(const std::string& text, const std::string& base_dir);

} // namespace lccd
