#pragma once

// Time-parameterised flight pattern generation. Patterns are kinematic
// waypoint paths sampled at a fixed step; waypoints land on exact samples so
// commanded heights, corners and closure are reproduced without rounding.

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "signwave/errors.hpp"
#include "signwave/leds.hpp"
#include "signwave/text.hpp"

namespace signwave::flight {

enum class PatternKind { TakeOff, Land, Cruise, Poke, NodYes, TurnNo, Rectangle };

inline std::string to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::TakeOff: return "TakeOff";
        case PatternKind::Land: return "Land";
        case PatternKind::Cruise: return "Cruise";
        case PatternKind::Poke: return "Poke";
        case PatternKind::NodYes: return "NodYes";
        case PatternKind::TurnNo: return "TurnNo";
        case PatternKind::Rectangle: return "Rectangle";
    }
    return "?";
}

inline PatternKind pattern_from_name(std::string_view name) {
    if (name == "takeoff" || name == "TakeOff") return PatternKind::TakeOff;
    if (name == "land" || name == "Land") return PatternKind::Land;
    if (name == "cruise" || name == "Cruise") return PatternKind::Cruise;
    if (name == "poke" || name == "Poke") return PatternKind::Poke;
    if (name == "nod-yes" || name == "nodyes" || name == "NodYes") return PatternKind::NodYes;
    if (name == "turn-no" || name == "turnno" || name == "TurnNo") return PatternKind::TurnNo;
    if (name == "rectangle" || name == "Rectangle") return PatternKind::Rectangle;
    throw InvalidInput("unknown pattern: " + std::string(name));
}

struct Sample {
    double t = 0.0;  // seconds
    double x = 0.0, y = 0.0, z = 0.0;  // metres
    leds::LightMode lights;
};

struct Trajectory {
    PatternKind kind = PatternKind::Cruise;
    std::vector<Sample> samples;  // strictly increasing t, first at t = 0
};

struct PatternParams {
    double height_m = 5.0;
    double speed_mps = 1.0;
    double rect_width_m = 4.0;
    double rect_length_m = 3.0;
    std::optional<double> amplitude_m;  // Poke: 0.3 default, NodYes: 0.5 default
    double cruise_length_m = 10.0;
    double approach_m = 2.0;   // Poke: advance to the safe-distance boundary
    double yaw_rate_dps = 90.0;  // TurnNo
    double dt_s = 0.1;
};

namespace detail {

struct Waypoint {
    double x, y, z;
};

// Sample a piecewise-linear path at dt, inserting every waypoint time exactly.
// Heading (and so the navigation lights) follows the direction of horizontal
// motion of the segment being flown; vertical segments keep the previous one.
inline Trajectory sample_path(PatternKind kind, const std::vector<Waypoint>& points, double speed,
                              double dt) {
    std::vector<double> knot_time(points.size(), 0.0);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto& a = points[i - 1];
        const auto& b = points[i];
        const double len =
            std::sqrt((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y) + (b.z - a.z) * (b.z - a.z));
        knot_time[i] = knot_time[i - 1] + len / speed;
    }

    std::vector<double> headings(points.size(), 0.0);  // heading of segment i-1 -> i
    double last_heading = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double dx = points[i].x - points[i - 1].x;
        const double dy = points[i].y - points[i - 1].y;
        if (dx * dx + dy * dy > 1e-18) {
            last_heading = std::fmod(std::atan2(dy, dx) * 180.0 / 3.14159265358979323846 + 360.0, 360.0);
        }
        headings[i] = last_heading;
    }

    Trajectory out;
    out.kind = kind;
    constexpr double kEps = 1e-9;

    out.samples.push_back(
        {0.0, points[0].x, points[0].y, points[0].z, leds::LightMode::navigation(headings[1])});
    std::size_t seg = 1;
    double t = 0.0;  // time of the last emitted sample
    while (seg < points.size()) {
        if (knot_time[seg] <= t + kEps) {  // zero-length segment
            ++seg;
            continue;
        }
        const double next_grid = t + dt;
        if (knot_time[seg] <= next_grid + kEps) {
            t = knot_time[seg];
            out.samples.push_back({t, points[seg].x, points[seg].y, points[seg].z,
                                   leds::LightMode::navigation(headings[seg])});
            ++seg;
        } else {
            t = next_grid;
            const auto& a = points[seg - 1];
            const auto& b = points[seg];
            const double span = knot_time[seg] - knot_time[seg - 1];
            const double f = (t - knot_time[seg - 1]) / span;
            out.samples.push_back({t, a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f,
                                   a.z + (b.z - a.z) * f,
                                   leds::LightMode::navigation(headings[seg])});
        }
    }
    return out;
}

inline double resolved_amplitude(PatternKind kind, const PatternParams& p) {
    if (p.amplitude_m) return *p.amplitude_m;
    return kind == PatternKind::NodYes ? 0.5 : 0.3;
}

}  // namespace detail

inline Trajectory make_pattern(PatternKind kind, const PatternParams& p) {
    if (p.height_m <= 0.0) throw InvalidInput("pattern: height must be positive");
    if (p.speed_mps <= 0.0) throw InvalidInput("pattern: speed must be positive");
    if (p.dt_s <= 0.0) throw InvalidInput("pattern: sample step must be positive");

    using detail::Waypoint;
    const double h = p.height_m;

    switch (kind) {
        case PatternKind::TakeOff:
            return detail::sample_path(kind, {{0, 0, 0}, {0, 0, h}}, p.speed_mps, p.dt_s);
        case PatternKind::Land: {
            auto traj = detail::sample_path(kind, {{0, 0, h}, {0, 0, 0}}, p.speed_mps, p.dt_s);
            traj.samples.back().lights = leds::LightMode::off();  // rotors stopped
            return traj;
        }
        case PatternKind::Cruise: {
            if (p.cruise_length_m <= 0.0) throw InvalidInput("pattern: cruise length must be positive");
            return detail::sample_path(kind, {{0, 0, h}, {p.cruise_length_m, 0, h}}, p.speed_mps,
                                       p.dt_s);
        }
        case PatternKind::Poke: {
            const double amp = detail::resolved_amplitude(kind, p);
            if (amp <= 0.0) throw InvalidInput("pattern: amplitude must be positive");
            if (p.approach_m < 0.0) throw InvalidInput("pattern: approach must be non-negative");
            const double a = p.approach_m;
            return detail::sample_path(kind,
                                       {{0, 0, h},
                                        {a, 0, h},
                                        {a + amp, 0, h},
                                        {a, 0, h},
                                        {a + amp, 0, h},
                                        {a, 0, h}},
                                       p.speed_mps, p.dt_s);
        }
        case PatternKind::NodYes: {
            const double amp = detail::resolved_amplitude(kind, p);
            if (amp <= 0.0) throw InvalidInput("pattern: amplitude must be positive");
            if (amp >= h) throw InvalidInput("pattern: nod amplitude must stay above ground");
            return detail::sample_path(kind,
                                       {{0, 0, h},
                                        {0, 0, h - amp},
                                        {0, 0, h},
                                        {0, 0, h - amp},
                                        {0, 0, h}},
                                       p.speed_mps, p.dt_s);
        }
        case PatternKind::TurnNo: {
            if (p.yaw_rate_dps <= 0.0) throw InvalidInput("pattern: yaw rate must be positive");
            // yaw shake encoded purely in the navigation-light heading
            const double legs[4] = {0.0, -90.0, 90.0, 0.0};
            Trajectory out;
            out.kind = kind;
            double t = 0.0;
            out.samples.push_back({0.0, 0, 0, h, leds::LightMode::navigation(0.0)});
            for (int leg = 1; leg < 4; ++leg) {
                const double from = legs[leg - 1];
                const double to = legs[leg];
                const double duration = std::abs(to - from) / p.yaw_rate_dps;
                const double start = t;
                double step = p.dt_s;
                for (double tt = start + step;; tt += step) {
                    const bool last = tt >= start + duration - 1e-9;
                    const double sample_t = last ? start + duration : tt;
                    const double f = (sample_t - start) / duration;
                    out.samples.push_back(
                        {sample_t, 0, 0, h, leds::LightMode::navigation(from + (to - from) * f)});
                    if (last) break;
                }
                t = start + duration;
            }
            return out;
        }
        case PatternKind::Rectangle: {
            if (p.rect_width_m <= 0.0 || p.rect_length_m <= 0.0)
                throw InvalidInput("pattern: rectangle sides must be positive");
            const double w = p.rect_width_m;
            const double l = p.rect_length_m;
            return detail::sample_path(
                kind, {{0, 0, h}, {w, 0, h}, {w, l, h}, {0, l, h}, {0, 0, h}}, p.speed_mps, p.dt_s);
        }
    }
    throw InvalidInput("pattern: unknown kind");
}

inline constexpr const char* kTrajectoryCsvHeader = "t,x,y,z,light_mode";

inline void write_csv(const Trajectory& traj, std::ostream& out) {
    out << kTrajectoryCsvHeader << "\n";
    for (const auto& s : traj.samples) {
        out << text::format_double(s.t) << "," << text::format_double(s.x) << ","
            << text::format_double(s.y) << "," << text::format_double(s.z) << ","
            << leds::to_string(s.lights) << "\n";
    }
}

}  // namespace signwave::flight
