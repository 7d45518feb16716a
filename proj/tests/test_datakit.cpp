#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>

#include <dec/dataset.hpp>
#include <dec/presets.hpp>
#include <dec/toygen.hpp>

using namespace dec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    std::string path;
    explicit TempDir(const std::string& p) : path(p) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Dataset meta_dataset(const std::string& tag, std::size_t n, const std::string& tax_hash) {
    Dataset ds;
    ds.source_tag = tag;
    ds.taxonomy_hash = tax_hash;
    for (std::size_t i = 0; i < n; ++i) {
        DatasetItem item;
        item.id = tag + "-" + std::to_string(i);
        item.source_tag = tag;
        ds.items.push_back(item);
    }
    return ds;
}

SceneSpec small_spec(std::uint64_t seed = 3) {
    SceneSpec spec;
    spec.width = 48;
    spec.height = 48;
    spec.seed = seed;
    spec.domain.noise_sigma = 0.01;
    return spec;
}

} // namespace

TEST_CASE("compose_sources concatenates in order and preserves tags") {
    const auto hash = default_taxonomy().hash();
    const auto a = meta_dataset("A", 3, hash);
    const auto b = meta_dataset("B", 5, hash);

    const auto ab = compose_sources({a, b});
    CHECK(ab.size() == 8);
    CHECK(ab.items[0].source_tag == "A");
    CHECK(ab.items[2].source_tag == "A");
    CHECK(ab.items[3].source_tag == "B");
    CHECK(ab.items[7].id == "B-4");

    const auto single = compose_sources({a});
    CHECK(single.size() == 3);
    CHECK(single.source_tag == "A");

    auto c = meta_dataset("C", 2, "deadbeef");
    CHECK_THROWS_AS(compose_sources({a, c}), ContractError);
}

TEST_CASE("composite length matches the published dataset sizes") {
    const auto hash = default_taxonomy().hash();
    const auto gta5 = meta_dataset("gta5", 24966, hash);
    const auto synscapes = meta_dataset("synscapes", 25000, hash);
    const auto urbansyn = meta_dataset("urbansyn", 7539, hash);
    CHECK(compose_sources({gta5, synscapes, urbansyn}).size() == 57505);
}

TEST_CASE("toy generation is deterministic and labels are domain-invariant") {
    const auto tax = default_taxonomy();
    const auto spec = small_spec();

    SUBCASE("same spec twice, byte-identical files") {
        TempDir d1("./toy_det_1"), d2("./toy_det_2");
        generate_toy_dataset(spec, 3, d1.path, tax);
        generate_toy_dataset(spec, 3, d2.path, tax);
        for (int i = 0; i < 3; ++i) {
            char id[16];
            std::snprintf(id, sizeof(id), "%06d", i);
            CHECK(read_file(d1.path + "/images/" + std::string(id) + ".png") ==
                  read_file(d2.path + "/images/" + std::string(id) + ".png"));
            CHECK(read_file(d1.path + "/labels/" + std::string(id) + ".png") ==
                  read_file(d2.path + "/labels/" + std::string(id) + ".png"));
        }
    }

    SUBCASE("same seed, shifted domain: identical labels, different images") {
        auto target = spec;
        target.domain.noise_sigma = 0.06;
        target.domain.hue_shift = 60.0;
        target.domain.brightness = 0.8;
        for (int i = 0; i < 4; ++i) {
            const auto src = generate_toy_scene(spec, i, tax);
            const auto tgt = generate_toy_scene(target, i, tax);
            CHECK(src.label == tgt.label);
            CHECK(src.image.data != tgt.image.data);
        }
    }

    SUBCASE("no foreground shapes leaves only background classes") {
        auto bare = spec;
        for (auto& [name, range] : bare.n_shapes_per_category) range = {0, 0};
        const std::set<std::int32_t> background = {0, 1, 2, 3, 4, 8, 9, 10};
        for (int i = 0; i < 4; ++i) {
            const auto scene = generate_toy_scene(bare, i, tax);
            for (auto v : scene.label.values) CHECK(background.count(v) == 1);
        }
    }
}

TEST_CASE("load_sample round-trips labels bit-exactly") {
    const auto tax = default_taxonomy();
    TempDir dir("./toy_load");
    const auto ds = generate_toy_dataset(small_spec(), 2, dir.path, tax);
    REQUIRE(ds.size() == 2);

    const auto scene = generate_toy_scene(small_spec(), 1, tax);
    const auto sample = load_sample(ds, 1, tax);
    REQUIRE(sample.label.has_value());
    CHECK(*sample.label == scene.label);

    CHECK_THROWS_AS(load_sample(ds, 2, tax), RangeError);
}

TEST_CASE("resolution policies") {
    const auto tax = default_taxonomy();
    TempDir dir("./toy_resize");
    SceneSpec spec = small_spec();
    spec.width = 256;
    spec.height = 128;
    auto ds = generate_toy_dataset(spec, 1, dir.path, tax);

    SUBCASE("resize halves dimensions, label values stay in the original set") {
        ds.policy = {ResolutionPolicy::Kind::resize, 128, 64};
        const auto sample = load_sample(ds, 0, tax);
        CHECK(sample.image.width == 128);
        CHECK(sample.image.height == 64);
        REQUIRE(sample.label.has_value());
        CHECK(sample.label->width == 128);
        CHECK(sample.label->height == 64);

        const auto full = generate_toy_scene(spec, 0, tax);
        std::set<std::int32_t> full_set(full.label.values.begin(), full.label.values.end());
        for (auto v : sample.label->values) CHECK(full_set.count(v) == 1);
    }

    SUBCASE("center crop") {
        ds.policy = {ResolutionPolicy::Kind::crop, 64, 64};
        const auto sample = load_sample(ds, 0, tax);
        CHECK(sample.image.width == 64);
        CHECK(sample.image.height == 64);
    }
}

TEST_CASE("invalid label values are rejected at load") {
    const auto tax = default_taxonomy();
    TempDir dir("./toy_badlabel");
    const auto ds = generate_toy_dataset(small_spec(), 1, dir.path, tax);

    auto png = read_png(dir.path + "/labels/000000.png");
    png.data[0] = 30; // not a class id, not ignore
    write_png(dir.path + "/labels/000000.png", png);
    const auto reopened = open_dataset(dir.path, tax);
    CHECK_THROWS_AS(load_sample(reopened, 0, tax), DataError);
}

TEST_CASE("spec validation") {
    SceneSpec spec;
    spec.width = 8;
    CHECK_THROWS_AS(spec.validate(), ContractError);
    spec.width = 64;
    spec.n_shapes_per_category["Spaceship"] = {1, 2};
    CHECK_THROWS_AS(spec.validate(), DataError);

    SceneSpec ok = SceneSpec();
    const auto j = scene_spec_to_json(ok);
    const auto back = scene_spec_from_json(j);
    CHECK(back.width == ok.width);
    CHECK(back.n_shapes_per_category == ok.n_shapes_per_category);
    CHECK(back.domain.brightness == ok.domain.brightness);
}

TEST_CASE("generated labels only contain taxonomy values and generation is pure") {
    const auto tax = default_taxonomy();
    const auto spec = small_spec(11);
    const auto a = generate_toy_scene(spec, 5, tax);
    const auto b = generate_toy_scene(spec, 5, tax);
    CHECK(a.label == b.label);
    CHECK(a.image.data == b.image.data);
    for (auto v : a.label.values) CHECK(tax.is_valid_value(v));
    for (auto v : a.image.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}
