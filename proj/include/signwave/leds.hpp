#pragma once

// Navigation-ring encoding for the 10-LED tri-colour ring. Slot i is mounted
// at body bearing 36*i degrees, slot 0 at the nose. Sector widths follow the
// aviation convention: green starboard arc, red port arc, white aft.

#include <array>
#include <cmath>
#include <string>

#include "signwave/errors.hpp"
#include "signwave/text.hpp"

namespace signwave::leds {

enum class Color : std::uint8_t { Red, Green, White, Off };

inline constexpr int kSlotCount = 10;
inline constexpr double kSlotSpacingDeg = 36.0;
inline constexpr double kGreenSectorEndDeg = 110.0;  // [0, 110] relative bearing
inline constexpr double kRedSectorStartDeg = 250.0;  // [250, 360)

struct Ring {
    std::array<Color, kSlotCount> slots{};
    friend bool operator==(const Ring&, const Ring&) = default;
};

inline char token(Color c) {
    switch (c) {
        case Color::Red: return 'R';
        case Color::Green: return 'G';
        case Color::White: return 'W';
        case Color::Off: return 'O';
    }
    return '?';
}

inline std::string to_string(const Ring& ring) {
    std::string out;
    for (int i = 0; i < kSlotCount; ++i) {
        if (i > 0) out += ' ';
        out += token(ring.slots[static_cast<std::size_t>(i)]);
    }
    return out;
}

// Direction-dependent navigation colours: relative bearing r of slot i against
// the heading decides the sector; r = 0 is green.
inline Ring nav_lights(double heading_deg) {
    if (!std::isfinite(heading_deg)) throw InvalidInput("nav_lights: heading must be finite");
    Ring ring;
    for (int i = 0; i < kSlotCount; ++i) {
        double r = std::fmod(kSlotSpacingDeg * i - heading_deg, 360.0);
        if (r < 0.0) r += 360.0;
        Color c = Color::White;
        if (r <= kGreenSectorEndDeg) c = Color::Green;
        else if (r >= kRedSectorStartDeg) c = Color::Red;
        ring.slots[static_cast<std::size_t>(i)] = c;
    }
    return ring;
}

inline Ring danger_lights() {
    Ring ring;
    ring.slots.fill(Color::Red);
    return ring;
}

inline Ring off_lights() {
    Ring ring;
    ring.slots.fill(Color::Off);
    return ring;
}

struct LightMode {
    enum class Kind { Navigation, AllRed, Off };
    Kind kind = Kind::Off;
    double heading_deg = 0.0;  // Navigation only, normalised to [0, 360)

    static LightMode navigation(double heading_deg) {
        if (!std::isfinite(heading_deg)) throw InvalidInput("light mode: heading must be finite");
        double h = std::fmod(heading_deg, 360.0);
        if (h < 0.0) h += 360.0;
        return {Kind::Navigation, h};
    }
    static LightMode all_red() { return {Kind::AllRed, 0.0}; }
    static LightMode off() { return {Kind::Off, 0.0}; }

    friend bool operator==(const LightMode&, const LightMode&) = default;
};

inline Ring ring_for(const LightMode& mode) {
    switch (mode.kind) {
        case LightMode::Kind::Navigation: return nav_lights(mode.heading_deg);
        case LightMode::Kind::AllRed: return danger_lights();
        case LightMode::Kind::Off: return off_lights();
    }
    return off_lights();
}

inline std::string to_string(const LightMode& mode) {
    switch (mode.kind) {
        case LightMode::Kind::Navigation: return "Nav:" + text::format_double(mode.heading_deg);
        case LightMode::Kind::AllRed: return "AllRed";
        case LightMode::Kind::Off: return "Off";
    }
    return "Off";
}

}  // namespace signwave::leds
