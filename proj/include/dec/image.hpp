#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dec/error.hpp"
#include "dec/mask.hpp"
#include "dec/png.hpp"
#include "dec/util.hpp"

namespace dec {

// Planar RGB image, values in [0,1]. Plane order r,g,b matches the channel
// order the nets consume.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> data; // 3 * height * width

    Image() = default;
    Image(int h, int w, double fill = 0.0)
        : height(h), width(w), data(3u * static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

    std::size_t plane() const { return static_cast<std::size_t>(height) * static_cast<std::size_t>(width); }

    double& at(int c, int y, int x) {
        return data[static_cast<std::size_t>(c) * plane() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
    }
    double at(int c, int y, int x) const {
        return data[static_cast<std::size_t>(c) * plane() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
    }
};

inline Image image_from_png(const PngBuffer& png) {
    if (png.channels != 3) throw DataError("image: expected 3-channel png");
    Image img(png.height, png.width);
    const std::size_t plane = img.plane();
    for (std::size_t i = 0; i < plane; ++i)
        for (int c = 0; c < 3; ++c)
            img.data[static_cast<std::size_t>(c) * plane + i] = png.data[i * 3 + static_cast<std::size_t>(c)] / 255.0;
    return img;
}

inline PngBuffer image_to_png(const Image& img) {
    PngBuffer png;
    png.width = img.width;
    png.height = img.height;
    png.channels = 3;
    png.data.resize(img.plane() * 3);
    const std::size_t plane = img.plane();
    for (std::size_t i = 0; i < plane; ++i)
        for (int c = 0; c < 3; ++c) {
            const double v = std::clamp(img.data[static_cast<std::size_t>(c) * plane + i], 0.0, 1.0);
            png.data[i * 3 + static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
    return png;
}

inline PngBuffer mask_to_png(const Mask& mask) {
    PngBuffer png;
    png.width = mask.width;
    png.height = mask.height;
    png.channels = 1;
    png.data.resize(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const auto v = mask.values[i];
        if (v < 0 || v > 255)
            throw DataError("mask: value " + std::to_string(v) + " does not fit an 8-bit label file");
        png.data[i] = static_cast<std::uint8_t>(v);
    }
    return png;
}

inline Mask mask_from_png(const PngBuffer& png) {
    if (png.channels != 1) throw DataError("mask: expected single-channel png");
    Mask mask(png.height, png.width);
    for (std::size_t i = 0; i < mask.size(); ++i) mask.values[i] = png.data[i];
    return mask;
}

inline Image resize_bilinear(const Image& src, int out_w, int out_h) {
    Image out(out_h, out_w);
    const double sx = static_cast<double>(src.width) / out_w;
    const double sy = static_cast<double>(src.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const double fy = std::max(0.0, (y + 0.5) * sy - 0.5);
        const int y0 = std::min(static_cast<int>(fy), src.height - 1);
        const int y1 = std::min(y0 + 1, src.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            const double fx = std::max(0.0, (x + 0.5) * sx - 0.5);
            const int x0 = std::min(static_cast<int>(fx), src.width - 1);
            const int x1 = std::min(x0 + 1, src.width - 1);
            const double wx = fx - x0;
            for (int c = 0; c < 3; ++c) {
                const double top = src.at(c, y0, x0) * (1 - wx) + src.at(c, y0, x1) * wx;
                const double bot = src.at(c, y1, x0) * (1 - wx) + src.at(c, y1, x1) * wx;
                out.at(c, y, x) = top * (1 - wy) + bot * wy;
            }
        }
    }
    return out;
}

inline Mask resize_nearest(const Mask& src, int out_w, int out_h) {
    Mask out(out_h, out_w);
    for (int y = 0; y < out_h; ++y) {
        const int sy = std::min(static_cast<int>((y + 0.5) * src.height / out_h), src.height - 1);
        for (int x = 0; x < out_w; ++x) {
            const int sx = std::min(static_cast<int>((x + 0.5) * src.width / out_w), src.width - 1);
            out.at(y, x) = src.at(sy, sx);
        }
    }
    return out;
}

inline Image crop(const Image& src, int x0, int y0, int w, int h) {
    Image out(h, w);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) out.at(c, y, x) = src.at(c, y0 + y, x0 + x);
    return out;
}

inline Mask crop(const Mask& src, int x0, int y0, int w, int h) {
    Mask out(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(y, x) = src.at(y0 + y, x0 + x);
    return out;
}

namespace color {

inline void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    v = mx;
    const double d = mx - mn;
    s = mx <= 0.0 ? 0.0 : d / mx;
    if (d <= 0.0) {
        h = 0.0;
        return;
    }
    if (mx == r)
        h = 60.0 * std::fmod((g - b) / d, 6.0);
    else if (mx == g)
        h = 60.0 * ((b - r) / d + 2.0);
    else
        h = 60.0 * ((r - g) / d + 4.0);
    if (h < 0) h += 360.0;
}

inline void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    const double c = v * s;
    const double hp = std::fmod(std::fmod(h, 360.0) + 360.0, 360.0) / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r1 = 0, g1 = 0, b1 = 0;
    if (hp < 1) { r1 = c; g1 = x; }
    else if (hp < 2) { r1 = x; g1 = c; }
    else if (hp < 3) { g1 = c; b1 = x; }
    else if (hp < 4) { g1 = x; b1 = c; }
    else if (hp < 5) { r1 = x; b1 = c; }
    else { r1 = c; b1 = x; }
    const double m = v - c;
    r = r1 + m;
    g = g1 + m;
    b = b1 + m;
}

} // namespace color

// Appearance-only domain shift: hue rotation, brightness scale, additive
// Gaussian noise, clamped to [0,1]. The rng stream is consumed identically
// for every parameter setting so shared-seed domains stay comparable.
inline void apply_domain_shift(Image& img, double hue_shift_deg, double brightness,
                               double noise_sigma, Rng& rng) {
    const std::size_t plane = img.plane();
    for (std::size_t i = 0; i < plane; ++i) {
        double r = img.data[i], g = img.data[plane + i], b = img.data[2 * plane + i];
        if (hue_shift_deg != 0.0) {
            double h, s, v;
            color::rgb_to_hsv(r, g, b, h, s, v);
            color::hsv_to_rgb(h + hue_shift_deg, s, v, r, g, b);
        }
        r *= brightness;
        g *= brightness;
        b *= brightness;
        r += noise_sigma * rng.normal();
        g += noise_sigma * rng.normal();
        b += noise_sigma * rng.normal();
        img.data[i] = std::clamp(r, 0.0, 1.0);
        img.data[plane + i] = std::clamp(g, 0.0, 1.0);
        img.data[2 * plane + i] = std::clamp(b, 0.0, 1.0);
    }
}

} // namespace dec
