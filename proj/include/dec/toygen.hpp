#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dec/dataset.hpp"
#include "dec/error.hpp"
#include "dec/image.hpp"
#include "dec/presets.hpp"
#include "dec/util.hpp"

namespace dec {

struct DomainParams {
    double noise_sigma = 0.0;  // additive Gaussian, [0,1] intensity units
    double hue_shift = 0.0;    // degrees
    double brightness = 1.0;   // multiplicative
};

// Procedural street-scene generator. Scenes share the 19-class taxonomy so the
// published division presets apply unchanged. Domain parameters perturb pixel
// appearance only; geometry and labels depend solely on (seed, index).
struct SceneSpec {
    int width = 64;
    int height = 64;
    std::map<std::string, std::pair<int, int>> n_shapes_per_category = {
        {"Vehicle", {1, 3}}, {"Human/Cycle", {1, 3}}, {"Traffic", {1, 2}}};
    std::pair<int, int> shape_size = {6, 16}; // pixels
    DomainParams domain;
    std::uint64_t seed = 1;
    std::string source_tag = "toy";

    void validate() const {
        if (width < 32 || height < 32)
            throw ContractError("scene spec: canvas must be at least 32x32, got " +
                                std::to_string(width) + "x" + std::to_string(height));
        for (const auto& [name, range] : n_shapes_per_category) {
            if (name != "Vehicle" && name != "Human/Cycle" && name != "Traffic")
                throw DataError("scene spec: unknown shape category '" + name + "'");
            if (range.first < 0 || range.second < range.first)
                throw DataError("scene spec: bad count range for '" + name + "'");
        }
        if (shape_size.first < 2 || shape_size.second < shape_size.first)
            throw DataError("scene spec: bad shape size range");
        if (domain.noise_sigma < 0) throw DataError("scene spec: noise_sigma must be >= 0");
    }
};

struct ToyScene {
    Image image;
    LabelMask label;
};

namespace toydetail {

inline std::uint64_t item_seed(std::uint64_t seed, int index, const char* tag) {
    return substream_seed(seed ^ 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1), tag);
}

struct Painter {
    Image& image;
    LabelMask& label;
    const ClassTaxonomy& taxonomy;

    void paint(int class_id, int x, int y, double jitter) {
        if (x < 0 || y < 0 || x >= image.width || y >= image.height) return;
        label.at(y, x) = class_id;
        const auto& col = taxonomy.class_by_id(class_id).color;
        for (int c = 0; c < 3; ++c)
            image.at(c, y, x) = std::clamp(col[static_cast<std::size_t>(c)] / 255.0 * jitter, 0.0, 1.0);
    }

    void rect(int class_id, int x0, int y0, int w, int h, double jitter) {
        for (int y = y0; y < y0 + h; ++y)
            for (int x = x0; x < x0 + w; ++x) paint(class_id, x, y, jitter);
    }

    void ellipse(int class_id, double cx, double cy, double rx, double ry, double jitter) {
        for (int y = static_cast<int>(cy - ry); y <= static_cast<int>(cy + ry) + 1; ++y)
            for (int x = static_cast<int>(cx - rx); x <= static_cast<int>(cx + rx) + 1; ++x) {
                const double dx = (x - cx) / rx, dy = (y - cy) / ry;
                if (dx * dx + dy * dy <= 1.0) paint(class_id, x, y, jitter);
            }
    }
};

inline int pick_member(Rng& rng, const std::vector<int>& members) {
    return members[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(members.size()) - 1))];
}

} // namespace toydetail

inline ToyScene generate_toy_scene(const SceneSpec& spec, int index, const ClassTaxonomy& taxonomy) {
    spec.validate();
    const int w = spec.width, h = spec.height;
    Rng geom(toydetail::item_seed(spec.seed, index, "geom"));
    Rng pix(toydetail::item_seed(spec.seed, index, "pix"));

    ToyScene scene{Image(h, w), LabelMask(h, w, 0)};
    toydetail::Painter p{scene.image, scene.label, taxonomy};

    // Background layers, Table I category order: background first, then the
    // foreground categories, so the label equals the last class painted.
    const int horizon = static_cast<int>(h * geom.uniform(0.35, 0.5));
    p.rect(10, 0, 0, w, horizon, geom.uniform(0.9, 1.1));        // sky
    p.rect(0, 0, horizon, w, h - horizon, geom.uniform(0.9, 1.1)); // road

    const int sidewalk_h = std::max(2, static_cast<int>(h * geom.uniform(0.06, 0.14)));
    p.rect(1, 0, horizon, w, sidewalk_h, geom.uniform(0.9, 1.1)); // sidewalk band

    const int n_buildings = static_cast<int>(geom.uniform_int(1, 3));
    for (int i = 0; i < n_buildings; ++i) {
        const int bw = static_cast<int>(geom.uniform_int(w / 8, w / 3));
        const int bh = static_cast<int>(geom.uniform_int(horizon / 2, std::max(horizon / 2 + 1, horizon - 2)));
        const int bx = static_cast<int>(geom.uniform_int(0, std::max(0, w - bw)));
        p.rect(2, bx, horizon - bh, bw, bh, geom.uniform(0.85, 1.15)); // building
    }

    const int n_veg = static_cast<int>(geom.uniform_int(1, 3));
    for (int i = 0; i < n_veg; ++i) {
        const double rx = geom.uniform(w / 16.0, w / 8.0);
        const double ry = geom.uniform(h / 20.0, h / 10.0);
        const double cx = geom.uniform(0, w);
        p.ellipse(8, cx, horizon - ry * 0.5, rx, ry, geom.uniform(0.85, 1.15)); // vegetation
    }

    if (geom.uniform() < 0.7) { // terrain patch on the lower band
        const int tw = static_cast<int>(geom.uniform_int(w / 6, w / 3));
        const int th = static_cast<int>(geom.uniform_int(2, std::max(3, h / 10)));
        const int tx = static_cast<int>(geom.uniform_int(0, std::max(0, w - tw)));
        const int ty = static_cast<int>(geom.uniform_int(horizon + sidewalk_h, h - th));
        p.rect(9, tx, ty, tw, th, geom.uniform(0.9, 1.1));
    }
    if (geom.uniform() < 0.6) { // wall strip above the sidewalk
        const int ww = static_cast<int>(geom.uniform_int(w / 4, w / 2));
        const int wx = static_cast<int>(geom.uniform_int(0, std::max(0, w - ww)));
        p.rect(3, wx, horizon - 2, ww, 2, geom.uniform(0.9, 1.1));
    }
    if (geom.uniform() < 0.6) { // fence strip on the sidewalk edge
        const int fw = static_cast<int>(geom.uniform_int(w / 4, w / 2));
        const int fx = static_cast<int>(geom.uniform_int(0, std::max(0, w - fw)));
        p.rect(4, fx, horizon + sidewalk_h, fw, 2, geom.uniform(0.9, 1.1));
    }

    auto count_for = [&](const char* name) -> int {
        auto it = spec.n_shapes_per_category.find(name);
        if (it == spec.n_shapes_per_category.end()) return 0;
        return static_cast<int>(geom.uniform_int(it->second.first, it->second.second));
    };
    const auto size_of = [&]() {
        return static_cast<int>(geom.uniform_int(spec.shape_size.first, spec.shape_size.second));
    };

    // Vehicles: wide boxes resting in the road band.
    const int n_vehicles = count_for("Vehicle");
    static const std::vector<int> vehicle_ids = {13, 14, 15, 16};
    for (int i = 0; i < n_vehicles; ++i) {
        const int cls = toydetail::pick_member(geom, vehicle_ids);
        const int sh = std::max(3, size_of() / 2);
        const int sw = static_cast<int>(sh * geom.uniform(1.4, 2.4));
        const int x0 = static_cast<int>(geom.uniform_int(0, std::max(0, w - sw)));
        const int y0 = static_cast<int>(geom.uniform_int(horizon, std::max(horizon + 1, h - sh)));
        p.rect(cls, x0, y0, sw, sh, geom.uniform(0.85, 1.15));
    }

    // People and cycles: tall thin ellipses.
    const int n_humans = count_for("Human/Cycle");
    static const std::vector<int> human_ids = {11, 12, 17, 18};
    for (int i = 0; i < n_humans; ++i) {
        const int cls = toydetail::pick_member(geom, human_ids);
        const double ry = std::max(2.5, size_of() / 2.0);
        const double rx = std::max(1.2, ry * geom.uniform(0.25, 0.45));
        const double cx = geom.uniform(rx, w - rx);
        const double cy = geom.uniform(horizon, h - ry);
        p.ellipse(cls, cx, cy, rx, ry, geom.uniform(0.85, 1.15));
    }

    // Traffic items: a pole bar, optionally capped by a light disc or sign box.
    const int n_traffic = count_for("Traffic");
    for (int i = 0; i < n_traffic; ++i) {
        const int bar_h = std::max(5, size_of());
        const int bx = static_cast<int>(geom.uniform_int(1, w - 3));
        const int by = static_cast<int>(geom.uniform_int(std::max(0, horizon - bar_h / 2),
                                                         std::max(1, h - bar_h)));
        const double jit = geom.uniform(0.85, 1.15);
        p.rect(5, bx, by, 2, bar_h, jit); // pole
        const int head = static_cast<int>(geom.uniform_int(0, 2));
        if (head == 1)
            p.ellipse(6, bx + 1, by, 2.2, 2.2, jit); // traffic light
        else if (head == 2)
            p.rect(7, bx - 1, by, 4, 4, jit); // traffic sign
    }

    apply_domain_shift(scene.image, spec.domain.hue_shift, spec.domain.brightness,
                       spec.domain.noise_sigma, pix);
    return scene;
}

// Materializes n_items scenes under <out_root>/{images,labels} plus a manifest
// and returns the opened dataset.
inline Dataset generate_toy_dataset(const SceneSpec& spec, int n_items, const std::string& out_root,
                                    const ClassTaxonomy& taxonomy,
                                    const std::string& taxonomy_ref = "taxonomy.json") {
    if (n_items < 1) throw ContractError("generate_toy_dataset: n_items must be >= 1");
    spec.validate();
    namespace fs = std::filesystem;
    fs::create_directories(out_root + "/images");
    fs::create_directories(out_root + "/labels");

    Dataset ds;
    ds.source_tag = spec.source_tag;
    ds.taxonomy_hash = taxonomy.hash();
    for (int i = 0; i < n_items; ++i) {
        char id[16];
        std::snprintf(id, sizeof(id), "%06d", i);
        const auto scene = generate_toy_scene(spec, i, taxonomy);
        write_png(out_root + "/images/" + id + ".png", image_to_png(scene.image));
        write_png(out_root + "/labels/" + id + ".png", mask_to_png(scene.label));
        DatasetItem item;
        item.id = id;
        ds.items.push_back(item);
    }
    write_manifest(ds, out_root, taxonomy_ref);
    return open_dataset(out_root, taxonomy);
}

inline nlohmann::json scene_spec_to_json(const SceneSpec& s) {
    nlohmann::json j;
    j["width"] = s.width;
    j["height"] = s.height;
    j["n_shapes"] = nlohmann::json::object();
    for (const auto& [name, range] : s.n_shapes_per_category)
        j["n_shapes"][name] = {range.first, range.second};
    j["shape_size"] = {s.shape_size.first, s.shape_size.second};
    j["domain"] = {{"noise_sigma", s.domain.noise_sigma},
                   {"hue_shift", s.domain.hue_shift},
                   {"brightness", s.domain.brightness}};
    j["seed"] = s.seed;
    j["source_tag"] = s.source_tag;
    return j;
}

inline SceneSpec scene_spec_from_json(const nlohmann::json& j) {
    SceneSpec s;
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    if (j.contains("n_shapes")) {
        s.n_shapes_per_category.clear();
        for (const auto& [name, range] : j.at("n_shapes").items())
            s.n_shapes_per_category[name] = {range.at(0).get<int>(), range.at(1).get<int>()};
    }
    if (j.contains("shape_size"))
        s.shape_size = {j["shape_size"].at(0).get<int>(), j["shape_size"].at(1).get<int>()};
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        s.domain.noise_sigma = d.value("noise_sigma", 0.0);
        s.domain.hue_shift = d.value("hue_shift", 0.0);
        s.domain.brightness = d.value("brightness", 1.0);
    }
    s.seed = j.value("seed", s.seed);
    s.source_tag = j.value("source_tag", s.source_tag);
    s.validate();
    return s;
}

inline SceneSpec load_scene_spec(const std::string& path) {
    return scene_spec_from_json(nlohmann::json::parse(read_file(path)));
}

} // namespace dec
