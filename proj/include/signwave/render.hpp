#pragma once

// Deterministic silhouette renderer for the three marshalling signs. The
// figure is a flat capsule skeleton: lateral coordinates foreshorten with
// |cos(azimuth)|, apparent size scales with reference_distance/slant_range,
// and the camera pitch atan(altitude/distance) tilts the body axis out of
// the image plane, compressing vertical extents by its cosine. Limb radii
// never foreshorten, which keeps a thickness floor at 90 degrees azimuth.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "signwave/corpus.hpp"
#include "signwave/errors.hpp"
#include "signwave/image.hpp"
#include "signwave/sign_id.hpp"
#include "signwave/text.hpp"

namespace signwave::synth {

struct PoseSpec {
    SignId sign;
    double right_arm_deg = -80.0;  // elevation from horizontal: +90 up, -90 down
    double left_arm_deg = -80.0;
    double body_height_m = 1.75;
};

// Poses chosen for mutual distinctness under rotation-invariant matching:
// a symmetric V reads differently from the up/down diagonal pair and from the
// single horizontal arm at every circular shift of the contour signature.
inline PoseSpec canonical_pose(const SignId& sign) {
    if (sign == kSignYes) return {sign, 55.0, 55.0, 1.75};
    if (sign == kSignNo) return {sign, 20.0, -70.0, 1.75};
    if (sign == kSignAttentionGained) return {sign, 0.0, -90.0, 1.75};
    throw InvalidInput("no canonical pose for sign: " + sign);
}

struct ViewSpec {
    double azimuth_deg = 0.0;  // 0 = frontal
    double distance_m = 3.0;   // horizontal distance to the signaller
    double altitude_m = 5.0;   // drone altitude
    int image_width = 640;
    int image_height = 480;
    double noise_px = 0.0;  // boundary jitter amplitude
};

namespace detail {

inline constexpr double kReferenceDistanceM = 3.0;  // slant range of canonical apparent size
inline constexpr double kReferenceFill = 0.9;       // figure/frame height ratio at reference
inline constexpr double kReferenceBodyM = 1.75;
inline constexpr double kPi = 3.14159265358979323846;

struct Capsule {
    double x0, z0, x1, z1;  // metres, body frame (x lateral, z up)
    double radius;
};

inline std::vector<Capsule> skeleton(const PoseSpec& pose) {
    if (pose.right_arm_deg < -90.0 || pose.right_arm_deg > 180.0 || pose.left_arm_deg < -90.0 ||
        pose.left_arm_deg > 180.0)
        throw InvalidInput("pose: arm angles must be within [-90, 180] degrees");
    if (pose.body_height_m <= 0.0) throw InvalidInput("pose: body height must be positive");

    const double h = pose.body_height_m;
    const double limb = 0.04 * h;  // capsule half-width
    const double arm_len = 0.36 * h;
    const double ra = pose.right_arm_deg * kPi / 180.0;
    const double la = pose.left_arm_deg * kPi / 180.0;

    std::vector<Capsule> parts;
    parts.push_back({0.0, 0.50 * h, 0.0, 0.80 * h, 0.075 * h});                  // torso
    parts.push_back({0.0, 0.90 * h, 0.0, 0.90 * h, 0.07 * h});                   // head
    parts.push_back({0.07 * h, 0.78 * h, 0.07 * h + arm_len * std::cos(ra),
                     0.78 * h + arm_len * std::sin(ra), limb});                  // right arm
    parts.push_back({-0.07 * h, 0.78 * h, -0.07 * h - arm_len * std::cos(la),
                     0.78 * h + arm_len * std::sin(la), limb});                  // left arm
    parts.push_back({0.04 * h, 0.50 * h, 0.10 * h, 0.0, limb});                  // right leg
    parts.push_back({-0.04 * h, 0.50 * h, -0.10 * h, 0.0, limb});                // left leg
    return parts;
}

inline double point_segment_distance(double px, double py, double x0, double y0, double x1, double y1) {
    const double vx = x1 - x0;
    const double vy = y1 - y0;
    const double len_sq = vx * vx + vy * vy;
    double t = 0.0;
    if (len_sq > 0.0) {
        t = ((px - x0) * vx + (py - y0) * vy) / len_sq;
        t = std::clamp(t, 0.0, 1.0);
    }
    const double dx = px - (x0 + t * vx);
    const double dy = py - (y0 + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic per-pixel jitter in [-1, 1), independent of scan order.
inline double pixel_noise(std::uint64_t seed, int x, int y) {
    std::uint64_t h = seed;
    h = splitmix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 1));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 33));
    return (static_cast<double>(h >> 11) * 0x1.0p-53) * 2.0 - 1.0;
}

}  // namespace detail

inline img::GrayImage render_sign(const PoseSpec& pose, const ViewSpec& view, std::uint64_t seed) {
    if (view.distance_m <= 0.0) throw InvalidInput("view: distance must be positive");
    if (view.altitude_m < 0.0) throw InvalidInput("view: altitude cannot be negative");
    if (view.azimuth_deg < 0.0 || view.azimuth_deg >= 360.0)
        throw InvalidInput("view: azimuth must be in [0, 360)");
    if (view.image_width < 64 || view.image_height < 64)
        throw InvalidInput("view: image size must be at least 64 pixels");
    if (view.noise_px < 0.0) throw InvalidInput("view: noise amplitude cannot be negative");

    const auto parts = detail::skeleton(pose);

    const double slant = std::hypot(view.distance_m, view.altitude_m);
    const double lateral = std::abs(std::cos(view.azimuth_deg * detail::kPi / 180.0));
    const double vertical = view.distance_m / slant;  // cos(atan(altitude/distance))
    const double scale = detail::kReferenceFill * view.image_height / detail::kReferenceBodyM *
                         (detail::kReferenceDistanceM / slant);

    struct Segment {
        double x0, y0, x1, y1, radius;
    };
    std::vector<Segment> projected;
    projected.reserve(parts.size());
    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
    for (const auto& part : parts) {
        Segment seg{part.x0 * lateral * scale, -part.z0 * vertical * scale,
                    part.x1 * lateral * scale, -part.z1 * vertical * scale, part.radius * scale};
        min_x = std::min({min_x, seg.x0 - seg.radius, seg.x1 - seg.radius});
        max_x = std::max({max_x, seg.x0 + seg.radius, seg.x1 + seg.radius});
        min_y = std::min({min_y, seg.y0 - seg.radius, seg.y1 - seg.radius});
        max_y = std::max({max_y, seg.y0 + seg.radius, seg.y1 + seg.radius});
        projected.push_back(seg);
    }

    const double margin = view.noise_px + 1.0;
    const double span_x = max_x - min_x + 2.0 * margin;
    const double span_y = max_y - min_y + 2.0 * margin;
    if (span_x > view.image_width || span_y > view.image_height)
        throw FrameOverflow("figure does not fit the frame at this view");

    // translate the figure bounding box to the frame centre
    const double off_x = view.image_width / 2.0 - (min_x + max_x) / 2.0;
    const double off_y = view.image_height / 2.0 - (min_y + max_y) / 2.0;

    img::GrayImage frame(view.image_width, view.image_height, 255);
    const int x_lo = std::max(0, static_cast<int>(std::floor(min_x + off_x - margin)));
    const int x_hi = std::min(view.image_width - 1, static_cast<int>(std::ceil(max_x + off_x + margin)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(min_y + off_y - margin)));
    const int y_hi = std::min(view.image_height - 1, static_cast<int>(std::ceil(max_y + off_y + margin)));
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            const double px = x + 0.5 - off_x;
            const double py = y + 0.5 - off_y;
            double dist = 1e300;
            for (const auto& seg : projected) {
                const double d =
                    detail::point_segment_distance(px, py, seg.x0, seg.y0, seg.x1, seg.y1) - seg.radius;
                dist = std::min(dist, d);
            }
            const double edge =
                view.noise_px > 0.0 ? view.noise_px * detail::pixel_noise(seed, x, y) : 0.0;
            if (dist <= edge) frame.at(x, y) = 0;
        }
    }
    return frame;
}

struct GridSpec {
    std::vector<SignId> signs{kSignAttentionGained, kSignYes, kSignNo};
    std::vector<double> azimuths_deg;
    std::vector<double> altitudes_m;
    double distance_m = 3.0;
    int image_width = 640;
    int image_height = 480;
    double noise_px = 0.0;
    std::uint64_t seed = 0;
    int repeats = 1;  // frames per grid cell (distinct seeds)
};

inline std::string corpus_file_name(const SignId& sign, double azimuth, double altitude,
                                    double distance, int repeat) {
    return sign + "_az" + text::format_double(azimuth) + "_alt" + text::format_double(altitude) +
           "_d" + text::format_double(distance) + "_r" + std::to_string(repeat) + ".pgm";
}

// Renders one PGM per (sign, azimuth, altitude, repeat) cell plus a manifest.
// Re-running with identical arguments reproduces identical bytes.
inline std::vector<corpus::ManifestRow> generate_corpus(const GridSpec& grid,
                                                        const std::filesystem::path& out_dir) {
    if (grid.repeats < 1) throw InvalidInput("corpus: repeats must be at least 1");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create corpus directory: " + out_dir.string());

    std::vector<corpus::ManifestRow> rows;
    std::set<std::string> names;  // duplicate grid values would collide on disk
    std::uint64_t index = 0;
    for (const auto& sign : grid.signs) {
        const PoseSpec pose = canonical_pose(sign);
        for (double azimuth : grid.azimuths_deg) {
            for (double altitude : grid.altitudes_m) {
                for (int rep = 0; rep < grid.repeats; ++rep, ++index) {
                    ViewSpec view;
                    view.azimuth_deg = azimuth;
                    view.distance_m = grid.distance_m;
                    view.altitude_m = altitude;
                    view.image_width = grid.image_width;
                    view.image_height = grid.image_height;
                    view.noise_px = grid.noise_px;
                    const std::uint64_t row_seed = detail::splitmix64(grid.seed ^ index);

                    corpus::ManifestRow row;
                    row.file = corpus_file_name(sign, azimuth, altitude, grid.distance_m, rep);
                    if (!names.insert(row.file).second)
                        throw InvalidInput("corpus: duplicate grid cell " + row.file);
                    row.sign = sign;
                    row.azimuth = azimuth;
                    row.distance_m = grid.distance_m;
                    row.altitude_m = altitude;
                    row.seed = row_seed;

                    const img::GrayImage frame = render_sign(pose, view, row_seed);
                    img::save_pgm(frame, out_dir / row.file);
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    corpus::write_manifest(rows, out_dir / "manifest.csv");
    return rows;
}

}  // namespace signwave::synth
