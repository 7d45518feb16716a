#pragma once

#include <string>
#include <vector>

#include "dec/error.hpp"
#include "dec/taxonomy.hpp"

namespace dec {

// The 19-class urban-driving taxonomy (Cityscapes evaluation classes, train-id
// order) with the conventional palette. Ignore is 255 per the 8-bit label file
// convention. Any contiguous id assignment loaded from a taxonomy file works
// equally; this is only the default.
inline ClassTaxonomy default_taxonomy() {
    ClassTaxonomy t;
    t.ignore_id = 255;
    t.classes = {
        {0, "road", {128, 64, 128}},
        {1, "sidewalk", {244, 35, 232}},
        {2, "building", {70, 70, 70}},
        {3, "wall", {102, 102, 156}},
        {4, "fence", {190, 153, 153}},
        {5, "pole", {153, 153, 153}},
        {6, "traffic light", {250, 170, 30}},
        {7, "traffic sign", {220, 220, 0}},
        {8, "vegetation", {107, 142, 35}},
        {9, "terrain", {152, 251, 152}},
        {10, "sky", {70, 130, 180}},
        {11, "person", {220, 20, 60}},
        {12, "rider", {255, 0, 0}},
        {13, "car", {0, 0, 142}},
        {14, "truck", {0, 0, 70}},
        {15, "bus", {0, 60, 100}},
        {16, "train", {0, 80, 100}},
        {17, "motorcycle", {0, 0, 230}},
        {18, "bicycle", {119, 11, 32}},
    };
    return t;
}

namespace detail {

// The four base categories: Background, Vehicle, Human/Cycle, Traffic.
inline const std::vector<Category>& base_categories() {
    static const std::vector<Category> cats = {
        {"Background", {0, 1, 2, 3, 4, 8, 9, 10}},
        {"Vehicle", {13, 14, 15, 16}},
        {"Human/Cycle", {11, 12, 17, 18}},
        {"Traffic", {6, 7, 5}},
    };
    return cats;
}

// Parse a merge spec like "BV+HT": each '+' separated token is one category,
// merged member lists concatenated in B,V,H,T order.
inline DivisionStrategy merged_strategy(const std::string& name) {
    const std::string order = "BVHT";
    DivisionStrategy s;
    s.name = name;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) throw LookupError("bad preset name '" + name + "'");
        Category cat;
        cat.name = token;
        for (char base : order) {
            if (token.find(base) == std::string::npos) continue;
            const auto& src = base_categories()[order.find(base)];
            cat.members.insert(cat.members.end(), src.members.begin(), src.members.end());
        }
        for (char c : token)
            if (order.find(c) == std::string::npos)
                throw LookupError("bad preset name '" + name + "'");
        s.categories.push_back(std::move(cat));
        token.clear();
    };
    for (char c : name) {
        if (c == '+')
            flush();
        else
            token += c;
    }
    flush();
    return s;
}

inline DivisionStrategy random_strategy(int n) {
    // The four published random divisions, as ordered member-id lists.
    static const std::vector<std::vector<std::vector<int>>> rows = {
        // random-1
        {{5, 16, 9, 6, 14, 18, 0, 3}, {17, 10, 11, 2}, {8, 7, 1, 4}, {15, 12, 13}},
        // random-2
        {{18, 7, 11, 4, 14, 1, 13, 6}, {12, 5, 2, 9}, {15, 17, 3, 16}, {0, 8, 10}},
        // random-3
        {{17, 5, 15, 7, 10, 9, 1, 4}, {13, 16, 14, 3}, {11, 6, 12, 2}, {8, 18, 0}},
        // random-4
        {{12, 6, 17, 13, 14, 7, 5, 8}, {3, 0, 18, 10}, {15, 11, 16, 2}, {1, 4, 9}},
    };
    DivisionStrategy s;
    s.name = "random-" + std::to_string(n);
    const auto& row = rows[static_cast<std::size_t>(n - 1)];
    for (std::size_t j = 0; j < row.size(); ++j)
        s.categories.push_back({"group-" + std::to_string(j + 1), row[j]});
    return s;
}

} // namespace detail

inline std::vector<std::string> preset_strategy_names() {
    return {"B+V+H+T", "BV+HT",   "BT+VH",   "B+V+HT",   "B+VT+H",   "BV+H+T",
            "BT+V+H",  "BVT+H",   "random-1", "random-2", "random-3", "random-4"};
}

inline DivisionStrategy preset_strategy(const std::string& name) {
    if (name == "B+V+H+T") {
        DivisionStrategy s;
        s.name = name;
        s.categories = detail::base_categories();
        return s;
    }
    if (name.rfind("random-", 0) == 0) {
        const std::string num = name.substr(7);
        if (num == "1" || num == "2" || num == "3" || num == "4")
            return detail::random_strategy(num[0] - '0');
    } else {
        for (const auto& known : preset_strategy_names()) {
            if (known == name) return detail::merged_strategy(name);
        }
    }
    std::string available;
    for (const auto& n : preset_strategy_names()) available += (available.empty() ? "" : ", ") + n;
    throw LookupError("unknown preset strategy '" + name + "'; available: " + available);
}

// Strategies may be given as a preset name or a path to a strategy file.
inline DivisionStrategy resolve_strategy(const std::string& name_or_path,
                                         const ClassTaxonomy& taxonomy) {
    for (const auto& known : preset_strategy_names())
        if (known == name_or_path) return preset_strategy(name_or_path);
    return load_strategy(name_or_path, taxonomy);
}

} // namespace dec
