#include "lccd/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
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

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    return fields;
}

} // namespace

std::vector<std::string> Manifest::images() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const ManifestEntry& e : entries) {
        if (seen.insert(e.path).second) out.push_back(e.path);
    }
    return out;
}

std::string Manifest::label_of(const std::string& path) const {
    for (const ManifestEntry& e : entries)
        if (e.path == path) return e.label;
    throw InvalidInputError("manifest: unknown image '" + path + "'");
}

std::vector<int> Manifest::partitions() const {
    std::set<int> s;
    for (const ManifestEntry& e : entries) s.insert(e.partition);
    return {s.begin(), s.end()};
}

std::vector<std::string> Manifest::split_images(int partition, bool train) const {
    std::vector<std::string> out;
    for (const ManifestEntry& e : entries)
        if (e.partition == partition && e.is_train == train) out.push_back(e.path);
    return out;
}

Manifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open manifest: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_manifest(buffer.str(),
                          std::filesystem::path(path).parent_path().string());
}

Manifest parse_manifest(const std::string& text, const std::string& base_dir) {
    Manifest manifest;
    std::map<std::string, std::string> labels;
    std::set<std::pair<int, std::string>> seen; // (partition, path)

    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (line_no == 1 && t.rfind("image_path", 0) == 0) continue; // header

        const std::vector<std::string> fields = split_csv(t);
        if (fields.size() < 3 || fields.size() > 4)
            throw InvalidInputError("manifest line " + std::to_string(line_no) +
                                    ": expected image_path,label,split[,partition]");
        ManifestEntry entry;
        std::filesystem::path p(fields[0]);
        entry.path = (p.is_absolute() || base_dir.empty())
                         ? p.string()
                         : (std::filesystem::path(base_dir) / p).string();
        entry.label = fields[1];
        if (fields[2] == "train") {
            entry.is_train = true;
        } else if (fields[2] == "test") {
            entry.is_train = false;
        } else {
            throw InvalidInputError("manifest line " + std::to_string(line_no) +
                                    ": split must be 'train' or 'test', got '" +
                                    fields[2] + "'");
        }
        if (fields.size() == 4) {
            try {
                entry.partition = std::stoi(fields[3]);
            } catch (const std::exception&) {
                throw InvalidInputError("manifest line " + std::to_string(line_no) +
                                        ": bad partition '" + fields[3] + "'");
            }
        }
        if (entry.path.empty() || entry.label.empty())
            throw InvalidInputError("manifest line " + std::to_string(line_no) +
                                    ": empty image path or label");

        if (!seen.insert({entry.partition, entry.path}).second)
            throw InvalidInputError("manifest: image '" + entry.path +
                                    "' listed twice in partition " +
                                    std::to_string(entry.partition));
        const auto [it, inserted] = labels.try_emplace(entry.path, entry.label);
        if (!inserted && it->second != entry.label)
            throw InvalidInputError("manifest: image '" + entry.path +
                                    "' has conflicting labels '" + it->second +
                                    "' and '" + entry.label + "'");
        manifest.entries.push_back(std::move(entry));
    }
    if (manifest.entries.empty()) throw InvalidInputError("manifest: no entries");
    return manifest;
}

} // namespace lccd
