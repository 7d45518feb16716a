#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include <dec/presets.hpp>
#include <dec/taxonomy.hpp>
#include <dec/util.hpp>

using namespace dec;

namespace {

LabelMask random_label(Rng& rng, int h, int w, int n_classes, double ignore_frac = 0.0) {
    LabelMask m(h, w);
    for (auto& v : m.values) {
        if (ignore_frac > 0.0 && rng.uniform() < ignore_frac)
            v = 255;
        else
            v = static_cast<std::int32_t>(rng.uniform_int(0, n_classes - 1));
    }
    return m;
}

std::vector<CategoryMask> remap_all(const LabelMask& label, const ClassTaxonomy& tax,
                                    const DivisionStrategy& strategy) {
    std::vector<CategoryMask> masks;
    for (int j = 0; j < strategy.n_categories(); ++j)
        masks.push_back(remap_label(label, build_remap_table(tax, strategy, j)));
    return masks;
}

} // namespace

TEST_CASE("default taxonomy is valid and matches the 19-class convention") {
    const auto tax = default_taxonomy();
    tax.validate();
    CHECK(tax.n_classes() == 19);
    CHECK(tax.ignore_id == 255);
    CHECK(tax.id_by_name("road") == 0);
    CHECK(tax.id_by_name("car") == 13);
    CHECK(tax.id_by_name("bicycle") == 18);
}

TEST_CASE("validate_strategy accepts the four-category division") {
    const auto tax = default_taxonomy();
    const auto report = validate_strategy(tax, preset_strategy("B+V+H+T"));
    CHECK(report.ok());
}

TEST_CASE("validate_strategy enumerates violations") {
    const auto tax = default_taxonomy();

    SUBCASE("missing class") {
        auto s = preset_strategy("B+V+H+T");
        auto& vehicle = s.categories[1].members;
        vehicle.erase(std::find(vehicle.begin(), vehicle.end(), 16)); // drop `train`
        const auto report = validate_strategy(tax, s);
        REQUIRE_FALSE(report.ok());
        bool found = false;
        for (const auto& v : report.violations) found |= v.find("missing id 16") != std::string::npos;
        CHECK(found);
    }

    SUBCASE("duplicate class") {
        auto s = preset_strategy("B+V+H+T");
        s.categories[0].members.push_back(13); // `car` already in Vehicle
        const auto report = validate_strategy(tax, s);
        REQUIRE_FALSE(report.ok());
        bool found = false;
        for (const auto& v : report.violations) found |= v.find("duplicate id 13") != std::string::npos;
        CHECK(found);
    }

    SUBCASE("empty category and unknown id") {
        DivisionStrategy s;
        s.name = "bad";
        s.categories = {{"empty", {}}, {"weird", {40}}};
        const auto report = validate_strategy(tax, s);
        std::string all;
        for (const auto& v : report.violations) all += v + "\n";
        CHECK(all.find("empty category") != std::string::npos);
        CHECK(all.find("unknown id 40") != std::string::npos);
    }
}

TEST_CASE("build_remap_table: vehicle category") {
    const auto tax = default_taxonomy();
    const auto s = preset_strategy("B+V+H+T");
    const auto table = build_remap_table(tax, s, 1);
    CHECK(table.n_out == 5);
    CHECK(table.other_index == 4);
    CHECK(table.map_value(13) == 0);
    CHECK(table.map_value(14) == 1);
    CHECK(table.map_value(15) == 2);
    CHECK(table.map_value(16) == 3);
    CHECK(table.map_value(255) == 255);
    for (int id = 0; id < 19; ++id)
        if (id < 13 || id > 16) CHECK(table.map_value(id) == 4);
}

TEST_CASE("build_remap_table: background size and degenerate single category") {
    const auto tax = default_taxonomy();
    const auto s = preset_strategy("B+V+H+T");
    const auto bg = build_remap_table(tax, s, 0);
    CHECK(bg.n_out == 9);
    CHECK(bg.other_index == 8);

    DivisionStrategy all_in_one;
    all_in_one.name = "single";
    Category cat;
    cat.name = "everything";
    for (int id = 0; id < 19; ++id) cat.members.push_back(id);
    all_in_one.categories.push_back(cat);
    const auto table = build_remap_table(tax, all_in_one, 0);
    CHECK(table.n_out == 20);
    CHECK(table.other_index == 19);
    for (int id = 0; id < 19; ++id) CHECK(table.map_value(id) == id);

    CHECK_THROWS_AS(build_remap_table(tax, s, 4), RangeError);
    CHECK_THROWS_AS(build_remap_table(tax, s, -1), RangeError);
}

TEST_CASE("remap_label applies the lookup per pixel") {
    const auto tax = default_taxonomy();
    const auto table = build_remap_table(tax, preset_strategy("B+V+H+T"), 1);

    LabelMask label(1, 4);
    label.values = {0, 13, 16, 255};
    const auto out = remap_label(label, table);
    CHECK(out.category_index == 1);
    CHECK(out.mask.values == std::vector<std::int32_t>{4, 0, 3, 255});

    LabelMask ignored(3, 3, 255);
    const auto all_ignore = remap_label(ignored, table);
    for (auto v : all_ignore.mask.values) CHECK(v == 255);

    LabelMask bad(1, 1);
    bad.values = {19};
    CHECK_THROWS_AS(remap_label(bad, table), DataError);
    try {
        remap_label(bad, table);
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("19") != std::string::npos);
    }
}

TEST_CASE("remap_label conserves histogram mass (brute-force oracle)") {
    const auto tax = default_taxonomy();
    const auto s = preset_strategy("B+V+H+T");
    Rng rng(7);
    const auto label = random_label(rng, 64, 64, 19, 0.05);
    for (int j = 0; j < s.n_categories(); ++j) {
        const auto table = build_remap_table(tax, s, j);
        const auto out = remap_label(label, table);
        // Count non-member non-ignore input pixels the slow way.
        std::size_t expected_other = 0;
        for (auto v : label.values) {
            if (v == 255) continue;
            bool member = false;
            for (int m : s.categories[static_cast<std::size_t>(j)].members) member |= (m == v);
            if (!member) ++expected_other;
        }
        std::size_t got_other = 0;
        for (auto v : out.mask.values)
            if (v == table.other_index) ++got_other;
        CHECK(got_other == expected_other);
    }
}

TEST_CASE("remapping commutes with pixel permutation") {
    const auto tax = default_taxonomy();
    const auto table = build_remap_table(tax, preset_strategy("B+V+H+T"), 2);
    Rng rng(11);
    auto label = random_label(rng, 16, 16, 19);

    LabelMask reversed = label;
    std::reverse(reversed.values.begin(), reversed.values.end());

    auto a = remap_label(label, table).mask.values;
    std::reverse(a.begin(), a.end());
    const auto b = remap_label(reversed, table).mask.values;
    CHECK(a == b);
}

TEST_CASE("overlay_fuse: conflicts, fallback, errors") {
    const auto tax = default_taxonomy();
    const auto s = preset_strategy("B+V+H+T");

    SUBCASE("later categories overwrite earlier ones") {
        std::vector<CategoryMask> masks;
        for (int j = 0; j < 4; ++j) {
            CategoryMask cm;
            cm.category_index = j;
            cm.mask = Mask(1, 1, static_cast<std::int32_t>(s.categories[static_cast<std::size_t>(j)].members.size()));
            masks.push_back(cm);
        }
        masks[0].mask.values[0] = 0; // Background says road
        masks[1].mask.values[0] = 0; // Vehicle says car
        const auto fused = overlay_fuse(masks, s);
        CHECK(fused.values[0] == 13); // car wins, Vehicle comes later
    }

    SUBCASE("all-other pixel falls back to category 0 first member") {
        std::vector<CategoryMask> masks;
        for (int j = 0; j < 4; ++j) {
            CategoryMask cm;
            cm.category_index = j;
            cm.mask = Mask(2, 2, static_cast<std::int32_t>(s.categories[static_cast<std::size_t>(j)].members.size()));
            masks.push_back(cm);
        }
        const auto fused = overlay_fuse(masks, s);
        for (auto v : fused.values) CHECK(v == 0); // road
    }

    SUBCASE("dimension mismatch and missing category") {
        const auto label = LabelMask(4, 4, 0);
        auto masks = remap_all(label, tax, s);
        masks[2].mask = Mask(4, 5, 0);
        CHECK_THROWS_AS(overlay_fuse(masks, s), ContractError);

        auto fewer = remap_all(label, tax, s);
        fewer.pop_back();
        CHECK_THROWS_AS(overlay_fuse(fewer, s), ContractError);

        auto swapped = remap_all(label, tax, s);
        std::swap(swapped[0], swapped[1]);
        CHECK_THROWS_AS(overlay_fuse(swapped, s), ContractError);
    }
}

TEST_CASE("partition round-trip and exactly-one-vote over all presets") {
    const auto tax = default_taxonomy();
    Rng rng(99);
    for (const auto& name : preset_strategy_names()) {
        const auto s = preset_strategy(name);
        REQUIRE(validate_strategy(tax, s).ok());
        for (int trial = 0; trial < 5; ++trial) {
            const auto label = random_label(rng, 24, 24, 19);
            const auto masks = remap_all(label, tax, s);

            // Exactly one category claims each pixel.
            for (std::size_t i = 0; i < label.values.size(); ++i) {
                int votes = 0;
                for (int j = 0; j < s.n_categories(); ++j) {
                    const auto other = static_cast<std::int32_t>(s.categories[static_cast<std::size_t>(j)].members.size());
                    if (masks[static_cast<std::size_t>(j)].mask.values[i] != other) ++votes;
                }
                REQUIRE(votes == 1);
            }

            const auto fused = overlay_fuse(masks, s);
            REQUIRE(fused == label);
            for (auto v : fused.values) REQUIRE((v >= 0 && v < 19));
        }
    }
}

TEST_CASE("preset member counts match the published divisions") {
    auto counts = [](const DivisionStrategy& s) {
        std::vector<std::size_t> c;
        for (const auto& cat : s.categories) c.push_back(cat.members.size());
        return c;
    };

    CHECK(counts(preset_strategy("B+V+H+T")) == std::vector<std::size_t>{8, 4, 4, 3});
    CHECK(counts(preset_strategy("BV+HT")) == std::vector<std::size_t>{12, 7});
    CHECK(counts(preset_strategy("BT+VH")) == std::vector<std::size_t>{11, 8});
    CHECK(counts(preset_strategy("B+V+HT")) == std::vector<std::size_t>{8, 4, 7});
    CHECK(counts(preset_strategy("B+VT+H")) == std::vector<std::size_t>{8, 7, 4});
    CHECK(counts(preset_strategy("BV+H+T")) == std::vector<std::size_t>{12, 4, 3});
    CHECK(counts(preset_strategy("BT+V+H")) == std::vector<std::size_t>{11, 4, 4});
    CHECK(counts(preset_strategy("BVT+H")) == std::vector<std::size_t>{15, 4});

    // Merged categories concatenate member lists in B,V,H,T order.
    const auto bv_ht = preset_strategy("BV+HT");
    CHECK(bv_ht.categories[0].members == std::vector<int>{0, 1, 2, 3, 4, 8, 9, 10, 13, 14, 15, 16});
    CHECK(bv_ht.categories[1].members == std::vector<int>{11, 12, 17, 18, 6, 7, 5});

    // random-1 reproduces the published first random division.
    const auto r1 = preset_strategy("random-1");
    REQUIRE(r1.n_categories() == 4);
    CHECK(r1.categories[0].members == std::vector<int>{5, 16, 9, 6, 14, 18, 0, 3});
    CHECK(r1.categories[1].members == std::vector<int>{17, 10, 11, 2});
    CHECK(r1.categories[2].members == std::vector<int>{8, 7, 1, 4});
    CHECK(r1.categories[3].members == std::vector<int>{15, 12, 13});

    CHECK_THROWS_AS(preset_strategy("nope"), LookupError);
    try {
        preset_strategy("nope");
    } catch (const LookupError& e) {
        CHECK(std::string(e.what()).find("B+V+H+T") != std::string::npos);
    }
}

TEST_CASE("taxonomy and strategy files round-trip, names resolve to ids") {
    const auto tax = default_taxonomy();
    const std::string dir = "./tax_io_test";
    std::filesystem::create_directories(dir);

    save_taxonomy(tax, dir + "/taxonomy.json");
    const auto tax2 = load_taxonomy(dir + "/taxonomy.json");
    CHECK(tax2.hash() == tax.hash());
    CHECK(tax2.n_classes() == 19);

    nlohmann::json j;
    j["name"] = "named";
    j["categories"] = {{{"name", "a"}, {"members", {"car", "truck"}}},
                       {{"name", "b"}, {"members", {0, 1}}}};
    const auto s = strategy_from_json(j, tax);
    CHECK(s.categories[0].members == std::vector<int>{13, 14});
    CHECK(s.categories[1].members == std::vector<int>{0, 1});

    const auto table1 = preset_strategy("B+V+H+T");
    save_strategy(table1, dir + "/s.json");
    const auto loaded = load_strategy(dir + "/s.json", tax);
    CHECK(loaded.hash() == table1.hash());
    std::filesystem::remove_all(dir);
}
