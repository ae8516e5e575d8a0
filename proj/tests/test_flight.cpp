#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "signwave/flight.hpp"
#include "signwave/text.hpp"

using namespace signwave;
using flight::PatternKind;
using Catch::Approx;

namespace {

int count_off_samples(const flight::Trajectory& traj) {
    int n = 0;
    for (const auto& s : traj.samples)
        if (s.lights.kind == leds::LightMode::Kind::Off) ++n;
    return n;
}

double path_length(const flight::Trajectory& traj) {
    double len = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        const auto& a = traj.samples[i - 1];
        const auto& b = traj.samples[i];
        len += std::sqrt((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y) +
                         (b.z - a.z) * (b.z - a.z));
    }
    return len;
}

}  // namespace

TEST_CASE("landing descends to zero and extinguishes the lights") {
    flight::PatternParams p;
    p.height_m = 5.0;
    const auto traj = flight::make_pattern(PatternKind::Land, p);

    REQUIRE(traj.samples.front().t == 0.0);
    CHECK(traj.samples.front().z == 5.0);
    CHECK(traj.samples.back().z == 0.0);
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        REQUIRE(traj.samples[i].z <= traj.samples[i - 1].z);
    CHECK(traj.samples.back().lights.kind == leds::LightMode::Kind::Off);
    CHECK(count_off_samples(traj) == 1);
}

TEST_CASE("take-off ascends to exactly the commanded height") {
    flight::PatternParams p;
    p.height_m = 3.7;
    const auto traj = flight::make_pattern(PatternKind::TakeOff, p);
    CHECK(traj.samples.front().z == 0.0);
    CHECK(traj.samples.back().z == 3.7);
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        REQUIRE(traj.samples[i].z >= traj.samples[i - 1].z);
    CHECK(count_off_samples(traj) == 0);
}

TEST_CASE("rectangle closes exactly and visits all four corners") {
    flight::PatternParams p;
    p.height_m = 5.0;
    p.rect_width_m = 4.0;
    p.rect_length_m = 3.0;
    const auto traj = flight::make_pattern(PatternKind::Rectangle, p);

    const auto& first = traj.samples.front();
    const auto& last = traj.samples.back();
    CHECK(std::abs(first.x - last.x) < 1e-9);
    CHECK(std::abs(first.y - last.y) < 1e-9);
    CHECK(std::abs(first.z - last.z) < 1e-9);
    CHECK(path_length(traj) == Approx(14.0).margin(1e-9));

    const double corners[4][2] = {{0, 0}, {4, 0}, {4, 3}, {0, 3}};
    for (const auto& corner : corners) {
        bool found = false;
        for (const auto& s : traj.samples)
            if (s.x == corner[0] && s.y == corner[1]) found = true;
        REQUIRE(found);
    }
    for (const auto& s : traj.samples) REQUIRE(s.z == 5.0);
}

TEST_CASE("nod-yes dips twice to exactly height minus amplitude") {
    flight::PatternParams p;
    p.height_m = 5.0;
    p.amplitude_m = 0.5;
    const auto traj = flight::make_pattern(PatternKind::NodYes, p);

    double min_z = 1e9;
    int minima = 0;
    for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
        const double z = traj.samples[i].z;
        min_z = std::min(min_z, z);
        if (z < traj.samples[i - 1].z && z < traj.samples[i + 1].z) ++minima;
    }
    CHECK(minima == 2);
    CHECK(min_z == 4.5);
    CHECK(traj.samples.back().z == 5.0);
}

TEST_CASE("poke advances to the boundary and oscillates forward twice") {
    flight::PatternParams p;
    p.height_m = 5.0;
    p.approach_m = 2.0;
    const auto traj = flight::make_pattern(PatternKind::Poke, p);  // default amplitude 0.3

    int peaks = 0;
    double max_x = 0.0;
    for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
        const double x = traj.samples[i].x;
        max_x = std::max(max_x, x);
        if (x > traj.samples[i - 1].x && x > traj.samples[i + 1].x) ++peaks;
    }
    CHECK(peaks == 2);
    CHECK(max_x == Approx(2.3).margin(1e-9));
    CHECK(traj.samples.back().x == 2.0);
    for (const auto& s : traj.samples) REQUIRE(s.z == 5.0);
}

TEST_CASE("turn-no shakes the heading left then right") {
    flight::PatternParams p;
    p.height_m = 5.0;
    const auto traj = flight::make_pattern(PatternKind::TurnNo, p);

    bool saw_left = false, saw_right = false;
    for (const auto& s : traj.samples) {
        REQUIRE(s.lights.kind == leds::LightMode::Kind::Navigation);
        if (s.lights.heading_deg == 270.0) saw_left = true;
        if (s.lights.heading_deg == 90.0) saw_right = true;
        REQUIRE(s.x == 0.0);
        REQUIRE(s.z == 5.0);
    }
    CHECK(saw_left);
    CHECK(saw_right);
}

TEST_CASE("all patterns share the trajectory invariants") {
    for (PatternKind kind : {PatternKind::TakeOff, PatternKind::Land, PatternKind::Cruise,
                             PatternKind::Poke, PatternKind::NodYes, PatternKind::TurnNo,
                             PatternKind::Rectangle}) {
        const auto traj = flight::make_pattern(kind, flight::PatternParams{});
        REQUIRE(traj.samples.size() >= 2);
        REQUIRE(traj.samples.front().t == 0.0);
        for (std::size_t i = 1; i < traj.samples.size(); ++i)
            REQUIRE(traj.samples[i].t > traj.samples[i - 1].t);
        for (const auto& s : traj.samples) REQUIRE(s.z >= 0.0);
        const int offs = count_off_samples(traj);
        if (kind == PatternKind::Land) {
            REQUIRE(offs == 1);
            REQUIRE(traj.samples.back().lights.kind == leds::LightMode::Kind::Off);
        } else {
            REQUIRE(offs == 0);
        }
    }
}

TEST_CASE("pattern parameter validation") {
    flight::PatternParams p;
    p.height_m = 0.0;
    CHECK_THROWS_AS(flight::make_pattern(PatternKind::Land, p), InvalidInput);

    p = flight::PatternParams{};
    p.speed_mps = -1.0;
    CHECK_THROWS_AS(flight::make_pattern(PatternKind::Cruise, p), InvalidInput);

    p = flight::PatternParams{};
    p.rect_width_m = 0.0;
    CHECK_THROWS_AS(flight::make_pattern(PatternKind::Rectangle, p), InvalidInput);

    p = flight::PatternParams{};
    p.amplitude_m = 6.0;  // deeper than the height
    CHECK_THROWS_AS(flight::make_pattern(PatternKind::NodYes, p), InvalidInput);

    CHECK(flight::pattern_from_name("nod-yes") == PatternKind::NodYes);
    CHECK_THROWS_AS(flight::pattern_from_name("loop"), InvalidInput);
}

TEST_CASE("trajectory csv is parseable and ends landed") {
    flight::PatternParams p;
    p.height_m = 5.0;
    const auto traj = flight::make_pattern(PatternKind::Land, p);
    std::ostringstream out;
    flight::write_csv(traj, out);
    const std::string csv = out.str();

    REQUIRE(csv.rfind("t,x,y,z,light_mode\n", 0) == 0);
    CHECK(csv.find(",0,Off\n") != std::string::npos);

    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto fields = text::split(line, ',');
        REQUIRE(fields.size() == 5);
        REQUIRE(text::parse_double(fields[0]).has_value());
        REQUIRE(text::parse_double(fields[3]).has_value());
        ++rows;
    }
    CHECK(rows == traj.samples.size());
}
