#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <zlib.h>

#include "dec/error.hpp"
#include "dec/util.hpp"

namespace dec {

// 8-bit raster, interleaved rows, 1 channel (gray) or 3 (RGB).
struct PngBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    std::size_t row_bytes() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
    }
};

namespace pngio {

inline void put_u32_be(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>(v & 0xFF));
}

inline std::uint32_t get_u32_be(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

inline void append_chunk(std::string& out, const char type[4], const std::string& payload) {
    put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
    out.append(type, 4);
    out += payload;
    auto crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(payload.data()),
                static_cast<uInt>(payload.size()));
    put_u32_be(out, static_cast<std::uint32_t>(crc));
}

inline int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

} // namespace pngio

inline std::string encode_png(const PngBuffer& img) {
    if (img.channels != 1 && img.channels != 3)
        throw ContractError("png: only 1- or 3-channel buffers are written");
    if (img.data.size() != img.row_bytes() * static_cast<std::size_t>(img.height))
        throw ContractError("png: buffer size does not match dimensions");

    std::string out("\x89PNG\r\n\x1a\n", 8);

    std::string ihdr;
    pngio::put_u32_be(ihdr, static_cast<std::uint32_t>(img.width));
    pngio::put_u32_be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);                                // bit depth
    ihdr.push_back(img.channels == 1 ? 0 : 2);        // gray / truecolor
    ihdr.push_back(0);                                // compression
    ihdr.push_back(0);                                // filter method
    ihdr.push_back(0);                                // no interlace
    pngio::append_chunk(out, "IHDR", ihdr);

    // Filter type 0 on every row keeps the encoder byte-deterministic.
    const std::size_t rb = img.row_bytes();
    std::vector<std::uint8_t> raw((rb + 1) * static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        raw[static_cast<std::size_t>(y) * (rb + 1)] = 0;
        std::memcpy(&raw[static_cast<std::size_t>(y) * (rb + 1) + 1],
                    &img.data[static_cast<std::size_t>(y) * rb], rb);
    }
    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(bound);
    if (compress2(comp.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError("png: deflate failed");
    pngio::append_chunk(out, "IDAT",
                        std::string(reinterpret_cast<const char*>(comp.data()), bound));
    pngio::append_chunk(out, "IEND", "");
    return out;
}

inline PngBuffer decode_png(const std::string& bytes, const std::string& origin = "<memory>") {
    const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data());
    const std::size_t n = bytes.size();
    static const std::uint8_t magic[8] = {137, 'P', 'N', 'G', '\r', '\n', 26, '\n'};
    if (n < 8 || std::memcmp(p, magic, 8) != 0)
        throw DataError("png: bad signature in " + origin);

    int width = 0, height = 0, bit_depth = 0, color_type = 0;
    std::vector<std::uint8_t> palette;
    std::string idat;
    std::size_t off = 8;
    bool saw_ihdr = false, saw_iend = false;
    while (off + 12 <= n && !saw_iend) {
        const std::uint32_t len = pngio::get_u32_be(p + off);
        if (off + 12 + len > n) throw DataError("png: truncated chunk in " + origin);
        const char* type = reinterpret_cast<const char*>(p + off + 4);
        const std::uint8_t* payload = p + off + 8;

        auto crc = crc32(0L, Z_NULL, 0);
        crc = crc32(crc, p + off + 4, 4 + len);
        if (static_cast<std::uint32_t>(crc) != pngio::get_u32_be(p + off + 8 + len))
            throw DataError("png: chunk crc mismatch in " + origin);

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw DataError("png: bad IHDR in " + origin);
            width = static_cast<int>(pngio::get_u32_be(payload));
            height = static_cast<int>(pngio::get_u32_be(payload + 4));
            bit_depth = payload[8];
            color_type = payload[9];
            if (payload[12] != 0) throw DataError("png: interlaced files unsupported: " + origin);
            if (bit_depth != 8)
                throw DataError("png: only 8-bit depth supported, got " +
                                std::to_string(bit_depth) + " in " + origin);
            saw_ihdr = true;
        } else if (std::memcmp(type, "PLTE", 4) == 0) {
            palette.assign(payload, payload + len);
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.append(reinterpret_cast<const char*>(payload), len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
        }
        off += 12 + len;
    }
    if (!saw_ihdr || width <= 0 || height <= 0) throw DataError("png: missing IHDR in " + origin);

    int raw_ch = 0;
    switch (color_type) {
        case 0: raw_ch = 1; break; // gray
        case 2: raw_ch = 3; break; // rgb
        case 3: raw_ch = 1; break; // palette index
        case 4: raw_ch = 2; break; // gray+alpha
        case 6: raw_ch = 4; break; // rgba
        default: throw DataError("png: unsupported color type " + std::to_string(color_type));
    }
    if (color_type == 3 && palette.empty()) throw DataError("png: palette image without PLTE");

    const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(raw_ch);
    std::vector<std::uint8_t> raw((stride + 1) * static_cast<std::size_t>(height));
    uLongf raw_len = static_cast<uLongf>(raw.size());
    const int zret = uncompress(raw.data(), &raw_len, reinterpret_cast<const Bytef*>(idat.data()),
                                static_cast<uLong>(idat.size()));
    if (zret != Z_OK || raw_len != raw.size())
        throw DataError("png: inflate failed for " + origin);

    // Undo per-row filters in place (output rows are packed, no filter byte).
    std::vector<std::uint8_t> pix(stride * static_cast<std::size_t>(height));
    const int bpp = raw_ch;
    for (int y = 0; y < height; ++y) {
        const std::uint8_t filter = raw[static_cast<std::size_t>(y) * (stride + 1)];
        const std::uint8_t* src = &raw[static_cast<std::size_t>(y) * (stride + 1) + 1];
        std::uint8_t* dst = &pix[static_cast<std::size_t>(y) * stride];
        const std::uint8_t* up = y > 0 ? &pix[static_cast<std::size_t>(y - 1) * stride] : nullptr;
        for (std::size_t x = 0; x < stride; ++x) {
            const int a = x >= static_cast<std::size_t>(bpp) ? dst[x - static_cast<std::size_t>(bpp)] : 0;
            const int b = up ? up[x] : 0;
            const int c = (up && x >= static_cast<std::size_t>(bpp)) ? up[x - static_cast<std::size_t>(bpp)] : 0;
            int v = src[x];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += pngio::paeth(a, b, c); break;
                default: throw DataError("png: unknown filter " + std::to_string(filter));
            }
            dst[x] = static_cast<std::uint8_t>(v & 0xFF);
        }
    }

    PngBuffer out;
    out.width = width;
    out.height = height;
    if (color_type == 0) {
        out.channels = 1;
        out.data = std::move(pix);
    } else if (color_type == 2) {
        out.channels = 3;
        out.data = std::move(pix);
    } else if (color_type == 3) {
        out.channels = 3;
        out.data.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
        for (std::size_t i = 0; i < pix.size(); ++i) {
            const std::size_t idx = static_cast<std::size_t>(pix[i]) * 3;
            if (idx + 2 >= palette.size()) throw DataError("png: palette index out of range");
            out.data[i * 3 + 0] = palette[idx + 0];
            out.data[i * 3 + 1] = palette[idx + 1];
            out.data[i * 3 + 2] = palette[idx + 2];
        }
    } else if (color_type == 4) { // gray+alpha, alpha dropped
        out.channels = 1;
        out.data.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
        for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = pix[i * 2];
    } else { // rgba, alpha dropped
        out.channels = 3;
        out.data.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
        for (std::size_t i = 0; i < out.data.size() / 3; ++i) {
            out.data[i * 3 + 0] = pix[i * 4 + 0];
            out.data[i * 3 + 1] = pix[i * 4 + 1];
            out.data[i * 3 + 2] = pix[i * 4 + 2];
        }
    }
    return out;
}

inline void write_png(const std::string& path, const PngBuffer& img) {
    write_file(path, encode_png(img));
}

inline PngBuffer read_png(const std::string& path) {
    return decode_png(read_file(path), path);
}

} // namespace dec
