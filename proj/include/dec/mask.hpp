#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dec/error.hpp"

namespace dec {

// Integer pixel grid. Values are global class ids (LabelMask role) or
// category-local indices (inside CategoryMask), plus optionally the ignore id.
struct Mask {
    int height = 0;
    int width = 0;
    std::vector<std::int32_t> values;

    Mask() = default;
    Mask(int h, int w, std::int32_t fill = 0)
        : height(h), width(w), values(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

    std::size_t size() const { return values.size(); }

    std::int32_t& at(int y, int x) {
        return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
    }
    std::int32_t at(int y, int x) const {
        return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
    }

    bool same_shape(const Mask& o) const { return height == o.height && width == o.width; }

    bool operator==(const Mask& o) const {
        return height == o.height && width == o.width && values == o.values;
    }
};

using LabelMask = Mask;

// A mask in one category's local index space [0, n_out-1] (+ ignore for
// remapped labels; predictions never carry ignore).
struct CategoryMask {
    int category_index = 0;
    Mask mask;
};

inline void require_same_shape(const Mask& a, const Mask& b, const std::string& ctx) {
    if (!a.same_shape(b)) {
        throw ContractError(ctx + ": dimension mismatch (" + std::to_string(a.width) + "x" +
                            std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                            std::to_string(b.height) + ")");
    }
}

} // namespace dec
