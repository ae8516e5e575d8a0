#pragma once

// Connected components and Moore-neighbour boundary following. The tracer has
// a fixed start rule (top-most, then left-most pixel) and clockwise
// orientation so traced contours are bit-reproducible.

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "signwave/errors.hpp"
#include "signwave/image.hpp"

namespace signwave::shape {

struct Component {
    long long area = 0;
    long long sum_x = 0;
    long long sum_y = 0;
    img::Point start;  // top-most then left-most pixel of the component
};

// 8-connected foreground components in row-major discovery order.
inline std::vector<Component> find_components(const img::BinaryImage& bin) {
    static constexpr int dx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr int dy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

    std::vector<Component> components;
    std::vector<std::uint8_t> seen(bin.mask.size(), 0);
    std::vector<img::Point> stack;
    for (int y = 0; y < bin.height; ++y) {
        for (int x = 0; x < bin.width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * bin.width + x;
            if (!bin.mask[idx] || seen[idx]) continue;

            Component comp;
            comp.start = {x, y};
            seen[idx] = 1;
            stack.assign(1, {x, y});
            while (!stack.empty()) {
                const img::Point p = stack.back();
                stack.pop_back();
                comp.area += 1;
                comp.sum_x += p.x;
                comp.sum_y += p.y;
                for (int k = 0; k < 8; ++k) {
                    const int nx = p.x + dx[k];
                    const int ny = p.y + dy[k];
                    if (nx < 0 || nx >= bin.width || ny < 0 || ny >= bin.height) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny) * bin.width + nx;
                    if (!bin.mask[nidx] || seen[nidx]) continue;
                    seen[nidx] = 1;
                    stack.push_back({nx, ny});
                }
            }
            components.push_back(comp);
        }
    }
    return components;
}

inline const Component& largest_component(const std::vector<Component>& components) {
    if (components.empty()) throw EmptyScene("no foreground component");
    const Component* best = &components.front();
    for (const auto& c : components)
        if (c.area > best->area) best = &c;
    return *best;
}

struct Contour {
    std::vector<img::Point> points;  // closed: last connects back to first
    double perimeter = 0.0;
};

namespace detail {

// Clockwise Moore neighbourhood with y growing downward: E SE S SW W NW N NE.
inline constexpr int kNbrX[8] = {1, 1, 0, -1, -1, -1, 0, 1};
inline constexpr int kNbrY[8] = {0, 1, 1, 1, 0, -1, -1, -1};

inline int direction_index(int dx, int dy) {
    for (int k = 0; k < 8; ++k)
        if (kNbrX[k] == dx && kNbrY[k] == dy) return k;
    throw Error("contour: not a neighbouring cell");
}

}  // namespace detail

// Moore-neighbour border following from a top-most/left-most start pixel.
// The walk over (pixel, backtrack) states is deterministic, so the boundary
// cycle is delimited by the first repeated state; on clean shapes that state
// is the initial one (Jacob's stopping criterion), while pinched or noisy
// starts shed a transient prefix instead of tracing the loop twice.
inline Contour trace_boundary(const img::BinaryImage& bin, img::Point start) {
    using namespace detail;
    const auto fg = [&](int x, int y) {
        return x >= 0 && x < bin.width && y >= 0 && y < bin.height && bin.test(x, y);
    };
    if (!fg(start.x, start.y)) throw InvalidInput("contour: start pixel is background");

    constexpr int kInitialBack = 4;  // W: background for a top-most/left-most start
    img::Point cur = start;
    int back = kInitialBack;

    std::vector<img::Point> points;
    std::unordered_map<std::uint64_t, std::size_t> seen;
    const auto state_key = [](img::Point p, int b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 35) |
               (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.y)) << 3) |
               static_cast<std::uint64_t>(b);
    };
    seen.emplace(state_key(cur, back), 0);
    points.push_back(cur);

    std::size_t cycle_begin = 0;
    while (true) {
        int k = (back + 1) % 8;
        bool found = false;
        for (int probe = 0; probe < 8; ++probe, k = (k + 1) % 8) {
            if (fg(cur.x + kNbrX[k], cur.y + kNbrY[k])) {
                found = true;
                break;
            }
        }
        if (!found) break;  // isolated pixel

        const int prev = (k + 7) % 8;  // last background cell examined
        const img::Point bg_cell{cur.x + kNbrX[prev], cur.y + kNbrY[prev]};
        const img::Point next{cur.x + kNbrX[k], cur.y + kNbrY[k]};
        back = direction_index(bg_cell.x - next.x, bg_cell.y - next.y);
        cur = next;
        const auto [it, inserted] = seen.emplace(state_key(cur, back), points.size());
        if (!inserted) {
            cycle_begin = it->second;
            break;
        }
        points.push_back(cur);
    }

    Contour out;
    out.points.assign(points.begin() + static_cast<std::ptrdiff_t>(cycle_begin), points.end());
    if (out.points.size() > 1) {
        double perim = 0.0;
        for (std::size_t i = 0; i < out.points.size(); ++i) {
            const auto& a = out.points[i];
            const auto& b = out.points[(i + 1) % out.points.size()];
            perim += std::hypot(static_cast<double>(b.x - a.x), static_cast<double>(b.y - a.y));
        }
        out.perimeter = perim;
    }
    return out;
}

// Outer boundary of the largest foreground component.
inline Contour largest_contour(const img::BinaryImage& bin) {
    const auto components = find_components(bin);
    const auto& comp = largest_component(components);
    Contour contour = trace_boundary(bin, comp.start);
    if (contour.points.size() < 8) throw TooSmall("largest component boundary has fewer than 8 points");
    return contour;
}

// Mean of all foreground pixel coordinates of the component.
inline std::pair<double, double> region_centroid(const Component& comp) {
    if (comp.area <= 0) throw EmptyScene("empty component");
    return {static_cast<double>(comp.sum_x) / static_cast<double>(comp.area),
            static_cast<double>(comp.sum_y) / static_cast<double>(comp.area)};
}

}  // namespace signwave::shape
