#pragma once

// 8-bit grayscale frames, binarisation and the PGM (P5) codec. The loader
// interface is the single entry point for frame files; only PGM is wired in.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "signwave/errors.hpp"

namespace signwave::img {

struct Point {
    int x = 0;
    int y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0) : width(w), height(h) {
        if (w < 8 || h < 8) throw InvalidInput("image: dimensions must be at least 8x8");
        pixels.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
    }

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;  // 1 = foreground

    bool test(int x, int y) const {
        return mask[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool fg) {
        mask[static_cast<std::size_t>(y) * width + x] = fg ? 1 : 0;
    }
};

enum class Polarity { DarkForeground, LightForeground };

inline Polarity polarity_from_name(std::string_view name) {
    if (name == "dark" || name == "dark_fg") return Polarity::DarkForeground;
    if (name == "light" || name == "light_fg") return Polarity::LightForeground;
    throw InvalidInput("polarity must be 'dark' or 'light'");
}

inline BinaryImage binarize(const GrayImage& image, int threshold, Polarity polarity) {
    if (threshold < 0 || threshold > 255) throw InvalidInput("binarize: threshold must be in [0, 255]");
    BinaryImage out;
    out.width = image.width;
    out.height = image.height;
    out.mask.resize(image.pixels.size());
    const bool dark = polarity == Polarity::DarkForeground;
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        const bool fg = dark ? image.pixels[i] < threshold : image.pixels[i] >= threshold;
        out.mask[i] = fg ? 1 : 0;
    }
    return out;
}

// ---- PGM (P5) codec -------------------------------------------------------

namespace detail {

inline void skip_pgm_separators(std::string_view data, std::size_t& pos) {
    while (pos < data.size()) {
        const char c = data[pos];
        if (c == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
}

inline int read_pgm_int(std::string_view data, std::size_t& pos) {
    skip_pgm_separators(data, pos);
    int value = 0;
    bool any = false;
    while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9') {
        value = value * 10 + (data[pos] - '0');
        ++pos;
        any = true;
    }
    if (!any) throw IoError("pgm: malformed header");
    return value;
}

}  // namespace detail

inline GrayImage decode_pgm(std::string_view data) {
    if (data.size() < 2 || data[0] != 'P' || data[1] != '5')
        throw IoError("pgm: not a binary PGM (P5) stream");
    std::size_t pos = 2;
    const int width = detail::read_pgm_int(data, pos);
    const int height = detail::read_pgm_int(data, pos);
    const int maxval = detail::read_pgm_int(data, pos);
    if (maxval <= 0 || maxval > 255) throw IoError("pgm: only 8-bit images are supported");
    if (pos >= data.size()) throw IoError("pgm: truncated header");
    ++pos;  // single whitespace byte after maxval

    GrayImage out(width, height);
    const std::size_t need = out.pixels.size();
    if (data.size() - pos < need) throw IoError("pgm: truncated pixel data");
    std::copy_n(reinterpret_cast<const std::uint8_t*>(data.data()) + pos, need, out.pixels.begin());
    return out;
}

inline std::string encode_pgm(const GrayImage& image) {
    std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
    return out;
}

inline GrayImage load_gray(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image file: " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() >= 2 && data[0] == 'P' && data[1] == '5') return decode_pgm(data);
    throw IoError("unsupported image format (binary PGM expected): " + path.string());
}

inline void save_pgm(const GrayImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write image file: " + path.string());
    const std::string data = encode_pgm(image);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("short write: " + path.string());
}

// ---- rotations (test and evaluation helpers) ------------------------------

// Exact quarter-turn rotation, clockwise. Swaps dimensions on odd turns.
inline GrayImage rotate_quarter(const GrayImage& image, int turns) {
    turns = ((turns % 4) + 4) % 4;
    if (turns == 0) return image;
    GrayImage out;
    if (turns == 2) {
        out = GrayImage(image.width, image.height);
        for (int y = 0; y < image.height; ++y)
            for (int x = 0; x < image.width; ++x)
                out.at(image.width - 1 - x, image.height - 1 - y) = image.at(x, y);
        return out;
    }
    out = GrayImage(image.height, image.width);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (turns == 1) out.at(image.height - 1 - y, x) = image.at(x, y);
            else out.at(y, image.width - 1 - x) = image.at(x, y);
        }
    }
    return out;
}

// Nearest-neighbour rotation about the image centre; same frame size,
// uncovered pixels take the background value.
inline GrayImage rotate_about_center(const GrayImage& image, double degrees, std::uint8_t background) {
    const double rad = degrees * 3.14159265358979323846 / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    const double cx = (image.width - 1) / 2.0;
    const double cy = (image.height - 1) / 2.0;
    GrayImage out(image.width, image.height, background);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            const int sx = static_cast<int>(std::lround(cx + c * dx + s * dy));
            const int sy = static_cast<int>(std::lround(cy - s * dx + c * dy));
            if (sx >= 0 && sx < image.width && sy >= 0 && sy < image.height)
                out.at(x, y) = image.at(sx, sy);
        }
    }
    return out;
}

}  // namespace signwave::img
