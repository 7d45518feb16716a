#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dec/error.hpp"
#include "dec/mask.hpp"
#include "dec/util.hpp"

namespace dec {

struct ClassDef {
    int id = 0;
    std::string name;
    std::array<std::uint8_t, 3> color{0, 0, 0};
};

// The global semantic class set. Ids must be contiguous from 0; the ignore id
// lies outside [0, n_classes-1].
struct ClassTaxonomy {
    std::vector<ClassDef> classes;
    int ignore_id = 255;

    int n_classes() const { return static_cast<int>(classes.size()); }

    bool is_valid_value(std::int32_t v) const {
        return (v >= 0 && v < n_classes()) || v == ignore_id;
    }

    const ClassDef& class_by_id(int id) const {
        for (const auto& c : classes)
            if (c.id == id) return c;
        throw LookupError("unknown class id " + std::to_string(id));
    }

    int id_by_name(const std::string& name) const {
        for (const auto& c : classes)
            if (c.name == name) return c.id;
        throw LookupError("unknown class name '" + name + "'");
    }

    void validate() const {
        std::set<int> ids;
        std::set<std::string> names;
        for (const auto& c : classes) {
            if (c.name.empty()) throw DataError("taxonomy: empty class name");
            if (!names.insert(c.name).second)
                throw DataError("taxonomy: duplicate class name '" + c.name + "'");
            if (!ids.insert(c.id).second)
                throw DataError("taxonomy: duplicate class id " + std::to_string(c.id));
        }
        for (int i = 0; i < n_classes(); ++i)
            if (!ids.count(i))
                throw DataError("taxonomy: ids not contiguous, missing " + std::to_string(i));
        if (ignore_id >= 0 && ignore_id < n_classes())
            throw DataError("taxonomy: ignore_id " + std::to_string(ignore_id) +
                            " collides with a class id");
    }

    std::string hash() const {
        std::string canon = std::to_string(ignore_id);
        for (const auto& c : classes) canon += "|" + std::to_string(c.id) + ":" + c.name;
        return hash_hex(fnv1a(canon));
    }
};

struct Category {
    std::string name;
    std::vector<int> members; // global class ids, order defines local indices
};

// An ordered partition of the taxonomy into N_G categories.
struct DivisionStrategy {
    std::string name;
    std::vector<Category> categories;

    int n_categories() const { return static_cast<int>(categories.size()); }

    std::string hash() const {
        std::string canon;
        for (const auto& c : categories) {
            canon += ";";
            for (int id : c.members) canon += std::to_string(id) + ",";
        }
        return hash_hex(fnv1a(canon));
    }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Checks the partition semantics: every taxonomy id appears in exactly one
// category and every category is non-empty. Violations are data, not failures.
inline ValidationReport validate_strategy(const ClassTaxonomy& taxonomy,
                                          const DivisionStrategy& strategy) {
    ValidationReport report;
    if (strategy.categories.empty())
        report.violations.push_back("strategy has no categories");

    std::map<int, int> seen; // id -> times seen
    for (std::size_t j = 0; j < strategy.categories.size(); ++j) {
        const Category& cat = strategy.categories[j];
        if (cat.members.empty())
            report.violations.push_back("empty category '" + cat.name + "'");
        for (int id : cat.members) {
            if (id < 0 || id >= taxonomy.n_classes()) {
                report.violations.push_back("unknown id " + std::to_string(id) + " in category '" +
                                            cat.name + "'");
                continue;
            }
            if (++seen[id] == 2)
                report.violations.push_back("duplicate id " + std::to_string(id) + " ('" +
                                            taxonomy.class_by_id(id).name + "')");
        }
    }
    for (int id = 0; id < taxonomy.n_classes(); ++id) {
        if (!seen.count(id))
            report.violations.push_back("missing id " + std::to_string(id) + " ('" +
                                        taxonomy.class_by_id(id).name + "')");
    }
    return report;
}

// Per-category lookup from global ids to category-local indices. Member k of
// the category maps to k; every other class maps to other_index; ignore maps
// to ignore. Computed once as a total map, applied in a single pass.
struct RemapTable {
    int category_index = 0;
    int n_out = 0;       // members + 1 (the trailing "other category" class)
    int other_index = 0; // n_out - 1
    int ignore_id = 255;
    std::map<std::int32_t, std::int32_t> lookup;

    std::int32_t map_value(std::int32_t v) const {
        auto it = lookup.find(v);
        if (it == lookup.end())
            throw DataError("remap: label value " + std::to_string(v) + " outside lookup domain");
        return it->second;
    }
};

inline RemapTable build_remap_table(const ClassTaxonomy& taxonomy,
                                    const DivisionStrategy& strategy, int category_index) {
    if (category_index < 0 || category_index >= strategy.n_categories())
        throw RangeError("category_index " + std::to_string(category_index) + " out of range [0, " +
                         std::to_string(strategy.n_categories()) + ")");
    const Category& cat = strategy.categories[static_cast<std::size_t>(category_index)];

    RemapTable table;
    table.category_index = category_index;
    table.n_out = static_cast<int>(cat.members.size()) + 1;
    table.other_index = table.n_out - 1;
    table.ignore_id = taxonomy.ignore_id;
    for (int id = 0; id < taxonomy.n_classes(); ++id) table.lookup[id] = table.other_index;
    for (std::size_t k = 0; k < cat.members.size(); ++k)
        table.lookup[cat.members[k]] = static_cast<std::int32_t>(k);
    table.lookup[taxonomy.ignore_id] = taxonomy.ignore_id;
    return table;
}

inline CategoryMask remap_label(const LabelMask& label, const RemapTable& table) {
    CategoryMask out;
    out.category_index = table.category_index;
    out.mask = Mask(label.height, label.width);
    for (std::size_t i = 0; i < label.values.size(); ++i)
        out.mask.values[i] = table.map_value(label.values[i]);
    return out;
}

// Deterministic baseline fuser: paint categories in strategy order, later
// categories overwriting earlier ones. Pixels where every category says
// other_index get the fallback id (first member of category 0).
inline LabelMask overlay_fuse(const std::vector<CategoryMask>& masks,
                              const DivisionStrategy& strategy) {
    if (static_cast<int>(masks.size()) != strategy.n_categories())
        throw ContractError("overlay_fuse: got " + std::to_string(masks.size()) + " masks for " +
                            std::to_string(strategy.n_categories()) + " categories");
    for (std::size_t j = 0; j < masks.size(); ++j) {
        if (masks[j].category_index != static_cast<int>(j))
            throw ContractError("overlay_fuse: mask " + std::to_string(j) +
                                " has category_index " + std::to_string(masks[j].category_index));
        if (j > 0) require_same_shape(masks[0].mask, masks[j].mask, "overlay_fuse");
    }

    const std::int32_t fallback = strategy.categories[0].members[0];
    LabelMask out(masks[0].mask.height, masks[0].mask.width, fallback);
    for (std::size_t j = 0; j < masks.size(); ++j) {
        const Category& cat = strategy.categories[j];
        const auto other = static_cast<std::int32_t>(cat.members.size());
        const auto& v = masks[j].mask.values;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == other) continue;
            if (v[i] < 0 || v[i] > other)
                throw ContractError("overlay_fuse: mask " + std::to_string(j) + " value " +
                                    std::to_string(v[i]) + " exceeds n_out " +
                                    std::to_string(other + 1));
            out.values[i] = cat.members[static_cast<std::size_t>(v[i])];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// File formats (taxonomy and strategy files are JSON).

inline nlohmann::json taxonomy_to_json(const ClassTaxonomy& t) {
    nlohmann::json j;
    j["ignore_id"] = t.ignore_id;
    j["classes"] = nlohmann::json::array();
    for (const auto& c : t.classes)
        j["classes"].push_back({{"id", c.id}, {"name", c.name}, {"color", c.color}});
    return j;
}

inline ClassTaxonomy taxonomy_from_json(const nlohmann::json& j) {
    ClassTaxonomy t;
    t.ignore_id = j.at("ignore_id").get<int>();
    for (const auto& jc : j.at("classes")) {
        ClassDef c;
        c.id = jc.at("id").get<int>();
        c.name = jc.at("name").get<std::string>();
        if (jc.contains("color")) {
            auto col = jc.at("color").get<std::vector<int>>();
            if (col.size() != 3) throw DataError("taxonomy: color must have 3 components");
            for (int k = 0; k < 3; ++k) c.color[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(col[static_cast<std::size_t>(k)]);
        }
        t.classes.push_back(std::move(c));
    }
    t.validate();
    return t;
}

inline ClassTaxonomy load_taxonomy(const std::string& path) {
    return taxonomy_from_json(nlohmann::json::parse(read_file(path)));
}

inline void save_taxonomy(const ClassTaxonomy& t, const std::string& path) {
    write_file(path, taxonomy_to_json(t).dump(2) + "\n");
}

inline nlohmann::json strategy_to_json(const DivisionStrategy& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["categories"] = nlohmann::json::array();
    for (const auto& c : s.categories)
        j["categories"].push_back({{"name", c.name}, {"members", c.members}});
    return j;
}

// Members may be given as class names or numeric ids; names are resolved
// against the taxonomy.
inline DivisionStrategy strategy_from_json(const nlohmann::json& j, const ClassTaxonomy& taxonomy) {
    DivisionStrategy s;
    s.name = j.at("name").get<std::string>();
    for (const auto& jc : j.at("categories")) {
        Category cat;
        cat.name = jc.at("name").get<std::string>();
        for (const auto& m : jc.at("members")) {
            if (m.is_number_integer())
                cat.members.push_back(m.get<int>());
            else
                cat.members.push_back(taxonomy.id_by_name(m.get<std::string>()));
        }
        s.categories.push_back(std::move(cat));
    }
    return s;
}

inline DivisionStrategy load_strategy(const std::string& path, const ClassTaxonomy& taxonomy) {
    return strategy_from_json(nlohmann::json::parse(read_file(path)), taxonomy);
}

inline void save_strategy(const DivisionStrategy& s, const std::string& path) {
    write_file(path, strategy_to_json(s).dump(2) + "\n");
}

} // namespace dec
