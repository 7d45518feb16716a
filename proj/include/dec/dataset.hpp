#pragma once

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dec/error.hpp"
#include "dec/image.hpp"
#include "dec/mask.hpp"
#include "dec/taxonomy.hpp"

namespace dec {

struct ResolutionPolicy {
    enum class Kind { none, resize, crop };
    Kind kind = Kind::none;
    int width = 0;
    int height = 0;
};

struct DatasetItem {
    std::string id;
    std::string image_path;
    std::string label_path; // empty when the item is unlabeled
    std::string source_tag;
};

// An ordered list of (image, label?) refs sharing one taxonomy. Loading is
// pure per item; shuffling belongs to the training loop.
struct Dataset {
    std::string source_tag;
    std::string taxonomy_hash;
    ResolutionPolicy policy;
    std::vector<DatasetItem> items;

    std::size_t size() const { return items.size(); }
};

struct Sample {
    Image image;
    std::optional<LabelMask> label;
};

// Layout: <root>/images/<id>.png, <root>/labels/<id>.png, <root>/manifest.
inline Dataset open_dataset(const std::string& root, const ClassTaxonomy& taxonomy) {
    namespace fs = std::filesystem;
    const std::string manifest_path = root + "/manifest";
    if (!fs::exists(manifest_path)) throw IoError("dataset: no manifest under " + root);

    Dataset ds;
    ds.taxonomy_hash = taxonomy.hash();
    std::istringstream in(read_file(manifest_path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "source_tag") {
            ls >> ds.source_tag;
        } else if (key == "taxonomy") {
            // informational; the caller supplies the taxonomy object
        } else if (key == "item") {
            std::string id;
            ls >> id;
            DatasetItem item;
            item.id = id;
            item.image_path = root + "/images/" + id + ".png";
            const std::string label = root + "/labels/" + id + ".png";
            if (fs::exists(label)) item.label_path = label;
            item.source_tag = ds.source_tag;
            ds.items.push_back(std::move(item));
        } else {
            throw DataError("dataset: unknown manifest key '" + key + "' in " + manifest_path);
        }
    }
    for (auto& item : ds.items) item.source_tag = ds.source_tag;
    return ds;
}

inline void write_manifest(const Dataset& ds, const std::string& root,
                           const std::string& taxonomy_ref) {
    std::string out;
    out += "taxonomy " + taxonomy_ref + "\n";
    out += "source_tag " + ds.source_tag + "\n";
    for (const auto& item : ds.items) out += "item " + item.id + "\n";
    write_file(root + "/manifest", out);
}

// Concatenation preserving per-item source tags and order.
inline Dataset compose_sources(const std::vector<Dataset>& datasets) {
    if (datasets.empty()) throw ContractError("compose_sources: no datasets");
    Dataset out;
    out.taxonomy_hash = datasets.front().taxonomy_hash;
    out.policy = datasets.front().policy;
    out.source_tag = "composite";
    for (const auto& ds : datasets) {
        if (ds.taxonomy_hash != out.taxonomy_hash)
            throw ContractError("compose_sources: taxonomy mismatch between '" +
                                datasets.front().source_tag + "' and '" + ds.source_tag + "'");
        out.items.insert(out.items.end(), ds.items.begin(), ds.items.end());
    }
    if (datasets.size() == 1) out.source_tag = datasets.front().source_tag;
    return out;
}

inline Sample load_sample(const Dataset& ds, std::size_t index, const ClassTaxonomy& taxonomy) {
    if (index >= ds.size())
        throw RangeError("load_sample: index " + std::to_string(index) + " out of range [0, " +
                         std::to_string(ds.size()) + ")");
    const DatasetItem& item = ds.items[index];

    Sample sample;
    sample.image = image_from_png(read_png(item.image_path));
    if (!item.label_path.empty()) {
        LabelMask label = mask_from_png(read_png(item.label_path));
        if (label.height != sample.image.height || label.width != sample.image.width)
            throw DataError("load_sample: image/label dimension mismatch for item " + item.id);
        for (auto v : label.values)
            if (!taxonomy.is_valid_value(v))
                throw DataError("load_sample: invalid label value " + std::to_string(v) +
                                " in item " + item.id);
        sample.label = std::move(label);
    }

    const auto& pol = ds.policy;
    if (pol.kind == ResolutionPolicy::Kind::resize) {
        sample.image = resize_bilinear(sample.image, pol.width, pol.height);
        if (sample.label) sample.label = resize_nearest(*sample.label, pol.width, pol.height);
    } else if (pol.kind == ResolutionPolicy::Kind::crop) {
        if (pol.width > sample.image.width || pol.height > sample.image.height)
            throw ContractError("load_sample: crop larger than image for item " + item.id);
        const int x0 = (sample.image.width - pol.width) / 2;
        const int y0 = (sample.image.height - pol.height) / 2;
        sample.image = crop(sample.image, x0, y0, pol.width, pol.height);
        if (sample.label) sample.label = crop(*sample.label, x0, y0, pol.width, pol.height);
    }
    return sample;
}

// Preload every sample once; datasets at desk scale fit in memory and the
// training loops index into this repeatedly.
inline std::vector<Sample> load_all(const Dataset& ds, const ClassTaxonomy& taxonomy) {
    std::vector<Sample> out;
    out.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) out.push_back(load_sample(ds, i, taxonomy));
    return out;
}

} // namespace dec
