#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "signwave/leds.hpp"

using namespace signwave;
using leds::Color;

TEST_CASE("nav lights golden layout at heading 0") {
    const auto ring = leds::nav_lights(0.0);
    CHECK(leds::to_string(ring) == "G G G G W W W R R R");
}

TEST_CASE("heading 180 rotates the heading-0 pattern by five slots") {
    const auto base = leds::nav_lights(0.0);
    const auto back = leds::nav_lights(180.0);
    for (int i = 0; i < leds::kSlotCount; ++i)
        CHECK(back.slots[static_cast<std::size_t>((i + 5) % 10)] ==
              base.slots[static_cast<std::size_t>(i)]);
}

TEST_CASE("heading wraps modulo 360") {
    CHECK(leds::nav_lights(360.0) == leds::nav_lights(0.0));
    CHECK(leds::nav_lights(-90.0) == leds::nav_lights(270.0));
    CHECK(leds::nav_lights(725.0) == leds::nav_lights(5.0));
}

TEST_CASE("non-finite headings are rejected") {
    CHECK_THROWS_AS(leds::nav_lights(std::numeric_limits<double>::quiet_NaN()), InvalidInput);
    CHECK_THROWS_AS(leds::nav_lights(std::numeric_limits<double>::infinity()), InvalidInput);
    CHECK_THROWS_AS(leds::LightMode::navigation(std::numeric_limits<double>::quiet_NaN()),
                    InvalidInput);
}

TEST_CASE("danger ring is all red and distinct from every navigation ring") {
    const auto danger = leds::danger_lights();
    for (auto c : danger.slots) CHECK(c == Color::Red);
    CHECK(leds::to_string(danger) == "R R R R R R R R R R");

    for (int h = 0; h < 360; ++h) {
        const auto ring = leds::nav_lights(static_cast<double>(h));
        int green = 0, red = 0, white = 0;
        for (auto c : ring.slots) {
            green += c == Color::Green;
            red += c == Color::Red;
            white += c == Color::White;
        }
        REQUIRE(green >= 2);
        REQUIRE(red >= 2);
        REQUIRE(white >= 2);
        REQUIRE(ring != danger);
    }
}

TEST_CASE("sector boundaries: 110 is still green, 250 already red") {
    // heading 34 puts slot 4 (bearing 144) at relative bearing 110
    CHECK(leds::nav_lights(34.0).slots[4] == Color::Green);
    CHECK(leds::nav_lights(33.9).slots[4] == Color::White);
    // heading 38 puts slot 8 (bearing 288) at relative bearing 250
    CHECK(leds::nav_lights(38.0).slots[8] == Color::Red);
    CHECK(leds::nav_lights(38.1).slots[8] == Color::White);
}

TEST_CASE("light modes map to rings") {
    CHECK(leds::ring_for(leds::LightMode::all_red()) == leds::danger_lights());
    CHECK(leds::ring_for(leds::LightMode::navigation(45.0)) == leds::nav_lights(45.0));
    const auto off = leds::ring_for(leds::LightMode::off());
    for (auto c : off.slots) CHECK(c == Color::Off);

    CHECK(leds::to_string(leds::LightMode::navigation(45.0)) == "Nav:45");
    CHECK(leds::to_string(leds::LightMode::navigation(-45.0)) == "Nav:315");
    CHECK(leds::to_string(leds::LightMode::all_red()) == "AllRed");
    CHECK(leds::to_string(leds::LightMode::off()) == "Off");
}
