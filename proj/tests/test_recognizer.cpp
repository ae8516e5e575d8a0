#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <vector>

#include "signwave/recognizer.hpp"
#include "signwave/render.hpp"

using namespace signwave;
namespace fs = std::filesystem;
using Outcome = rec::MatchResult::Outcome;

namespace {

img::GrayImage canonical_frame(const SignId& sign, double azimuth = 0.0, double altitude = 5.0) {
    synth::ViewSpec view;
    view.azimuth_deg = azimuth;
    view.altitude_m = altitude;
    return synth::render_sign(synth::canonical_pose(sign), view, 0);
}

rec::TemplateDB canonical_db() {
    auto db = rec::make_db(shape::PipelineConfig{});
    for (const auto& sign : {kSignAttentionGained, kSignYes, kSignNo})
        db = rec::enroll(db, canonical_frame(sign), sign, {0.0, 3.0, 5.0, ""}).db;
    return db;
}

img::GrayImage disc_frame() {
    img::GrayImage g(128, 128, 255);
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x)
            if ((x - 63.5) * (x - 63.5) + (y - 63.5) * (y - 63.5) <= 50.0 * 50.0) g.at(x, y) = 0;
    return g;
}

}  // namespace

TEST_CASE("enroll adds templates; duplicates are a no-op") {
    auto db = rec::make_db(shape::PipelineConfig{});
    const auto frame = canonical_frame(kSignNo);

    auto first = rec::enroll(db, frame, kSignNo);
    CHECK(first.added);
    CHECK(first.db.size() == 1);

    auto second = rec::enroll(first.db, frame, kSignNo);
    CHECK_FALSE(second.added);
    CHECK(second.db.size() == 1);

    img::GrayImage blank(64, 64, 255);
    CHECK_THROWS_AS(rec::enroll(first.db, blank, kSignYes), EmptyScene);
    CHECK(first.db.size() == 1);  // input database is untouched by value semantics

    CHECK_THROWS_AS(rec::enroll(db, frame, "bad\tname"), InvalidInput);
}

TEST_CASE("theta auto-calibrates to half the minimum inter-sign distance") {
    auto db = rec::make_db(shape::PipelineConfig{});
    db = rec::enroll(db, canonical_frame(kSignNo), kSignNo).db;
    CHECK(db.theta == 0.0);  // one sign: nothing to calibrate against

    db = rec::enroll(db, canonical_frame(kSignYes), kSignYes).db;
    const auto inter = rec::min_inter_sign_distance(db);
    REQUIRE(inter.has_value());
    CHECK(db.theta == Catch::Approx(0.5 * *inter));
    CHECK(db.theta > 0.0);
}

TEST_CASE("recognize: self-match, rotation, rejection, no-shape") {
    const auto db = canonical_db();

    for (const auto& sign : {kSignAttentionGained, kSignYes, kSignNo}) {
        const auto res = rec::recognize(canonical_frame(sign), db);
        REQUIRE(res.outcome == Outcome::Match);
        CHECK(res.sign == sign);
        CHECK(res.distance == 0.0);
        CHECK(res.shift == 0);
    }

    for (int turns : {1, 2, 3}) {
        const auto res = rec::recognize(img::rotate_quarter(canonical_frame(kSignNo), turns), db);
        REQUIRE(res.outcome == Outcome::Match);
        CHECK(res.sign == kSignNo);
    }

    const auto steep = rec::recognize(canonical_frame(kSignNo, 90.0), db);
    CHECK(steep.outcome == Outcome::NoMatch);
    CHECK(steep.distance > db.theta);

    const auto circle = rec::recognize(disc_frame(), db);
    REQUIRE(circle.outcome == Outcome::NoShape);
    CHECK(circle.reason == "degenerate");

    img::GrayImage blank(64, 64, 255);
    const auto none = rec::recognize(blank, db);
    REQUIRE(none.outcome == Outcome::NoShape);
    CHECK(none.reason == "empty_scene");

    CHECK_THROWS_AS(rec::recognize(canonical_frame(kSignNo), rec::TemplateDB{}), InvalidInput);
}

TEST_CASE("threshold monotonicity") {
    auto db = canonical_db();
    const auto frame = canonical_frame(kSignNo, 50.0);  // off-canonical: nonzero distance
    const auto base = rec::recognize(frame, db);
    const double d = base.distance;
    REQUIRE(d > 0.0);

    for (double theta : {0.0, d * 0.5, d, d * 2.0, d * 10.0}) {
        auto probe = db;
        probe.theta = theta;
        const auto res = rec::recognize(frame, probe);
        if (theta >= d) {
            REQUIRE(res.outcome == Outcome::Match);
        } else {
            REQUIRE(res.outcome == Outcome::NoMatch);
        }
    }
}

TEST_CASE("recognition outcome is rotation invariant") {
    const auto db = canonical_db();

    // a matching frame keeps its sign under quarter turns
    for (const auto& sign : {kSignAttentionGained, kSignYes, kSignNo}) {
        const auto frame = canonical_frame(sign);
        for (int turns : {0, 1, 2, 3}) {
            const auto res = rec::recognize(img::rotate_quarter(frame, turns), db);
            REQUIRE(res.outcome == Outcome::Match);
            REQUIRE(res.sign == sign);
        }
    }

    // a rejected frame stays rejected under quarter turns
    const auto steep = canonical_frame(kSignNo, 90.0);
    REQUIRE(rec::recognize(steep, db).outcome == Outcome::NoMatch);
    for (int turns : {1, 2, 3})
        REQUIRE(rec::recognize(img::rotate_quarter(steep, turns), db).outcome == Outcome::NoMatch);
}

TEST_CASE("recognize is a pure function of frame bytes and database") {
    const auto db = canonical_db();
    const auto frame = canonical_frame(kSignYes, 30.0);
    const auto a = rec::recognize(frame, db);
    const auto b = rec::recognize(frame, db);
    REQUIRE(a.outcome == b.outcome);
    REQUIRE(a.sign == b.sign);
    REQUIRE(a.distance == b.distance);
    REQUIRE(a.shift == b.shift);
}

TEST_CASE("ties resolve to the earliest enrolled template") {
    auto db = rec::make_db(shape::PipelineConfig{});
    const auto frame = canonical_frame(kSignYes);
    db = rec::enroll(db, frame, "First").db;
    db = rec::enroll(db, frame, "Second").db;  // same word, different sign
    const auto res = rec::recognize(frame, db);
    REQUIRE(res.outcome == Outcome::Match);
    CHECK(res.sign == "First");
}

TEST_CASE("many threads can recognize against one shared database") {
    const auto db = canonical_db();
    std::vector<img::GrayImage> frames;
    for (const auto& sign : {kSignAttentionGained, kSignYes, kSignNo})
        for (double az : {0.0, 20.0, 90.0}) frames.push_back(canonical_frame(sign, az));

    auto worker = [&] {
        std::vector<std::pair<int, std::string>> outcomes;
        for (const auto& frame : frames) {
            const auto res = rec::recognize(frame, db);
            outcomes.emplace_back(static_cast<int>(res.outcome), res.sign);
        }
        return outcomes;
    };
    std::vector<std::future<std::vector<std::pair<int, std::string>>>> futures;
    for (int i = 0; i < 8; ++i) futures.push_back(std::async(std::launch::async, worker));
    const auto reference = worker();
    for (auto& f : futures) REQUIRE(f.get() == reference);
}

TEST_CASE("pairwise uniqueness") {
    const auto db = canonical_db();
    const auto report = rec::pairwise_uniqueness(db);
    CHECK(report.pairs.size() == 3);
    CHECK(report.all_words_distinct);
    CHECK(report.min_inter_sign_distance > 0.0);

    auto single = rec::make_db(shape::PipelineConfig{});
    single = rec::enroll(single, canonical_frame(kSignNo), kSignNo).db;
    CHECK_THROWS_AS(rec::pairwise_uniqueness(single), InvalidInput);

    // constructed degenerate database: two signs share a word
    auto twin = rec::make_db(shape::PipelineConfig{});
    twin = rec::enroll(twin, canonical_frame(kSignYes), "A").db;
    twin = rec::enroll(twin, canonical_frame(kSignYes), "B").db;
    const auto twin_report = rec::pairwise_uniqueness(twin);
    CHECK_FALSE(twin_report.all_words_distinct);
    CHECK(twin_report.min_inter_sign_distance == 0.0);

    // same-sign template pairs are not compared
    auto dup = rec::make_db(shape::PipelineConfig{});
    dup = rec::enroll(dup, canonical_frame(kSignYes), kSignYes).db;
    dup = rec::enroll(dup, canonical_frame(kSignYes, 0.0, 2.0), kSignYes).db;
    dup = rec::enroll(dup, canonical_frame(kSignNo), kSignNo).db;
    const auto dup_report = rec::pairwise_uniqueness(dup);
    CHECK(dup_report.pairs.size() == 2);  // only cross-sign pairs
}

TEST_CASE("sweep over a small corpus") {
    const auto dir = fs::temp_directory_path() / "signwave_sweep";
    fs::remove_all(dir);

    synth::GridSpec grid;
    grid.azimuths_deg = {0.0};
    grid.altitudes_m = {5.0};
    const auto rows = synth::generate_corpus(grid, dir);
    REQUIRE(rows.size() == 3);

    const auto db = canonical_db();
    const auto report = rec::sweep(db, rows, dir);
    REQUIRE(report.errors.empty());
    REQUIRE(report.cells.size() == 3);
    for (const auto& cell : report.cells) {
        CHECK(cell.attempts == 1);
        CHECK(cell.correct == 1);
    }
    for (const auto& sign : {kSignAttentionGained, kSignYes, kSignNo})
        CHECK(report.boundary_azimuth.at(sign) == 0.0);

    // empty manifest: empty report, no error
    const auto empty = rec::sweep(db, {}, dir);
    CHECK(empty.cells.empty());
    CHECK(empty.errors.empty());

    // missing file: error entry, sweep continues
    auto broken = rows;
    broken[0].file = "missing.pgm";
    const auto partial = rec::sweep(db, broken, dir);
    REQUIRE(partial.errors.size() == 1);
    CHECK(partial.errors[0].file == "missing.pgm");
    int attempts = 0;
    for (const auto& cell : partial.cells) attempts += cell.attempts;
    CHECK(attempts == 2);

    fs::remove_all(dir);
}

TEST_CASE("saxdb round-trips bit-exactly") {
    const auto db = canonical_db();
    const std::string once = rec::to_saxdb(db);
    const auto parsed = rec::from_saxdb(once);
    const std::string twice = rec::to_saxdb(parsed);
    REQUIRE(once == twice);

    CHECK(parsed.signature_samples == db.signature_samples);
    CHECK(parsed.params == db.params);
    CHECK(parsed.theta == db.theta);
    REQUIRE(parsed.size() == db.size());
    for (std::size_t i = 0; i < db.size(); ++i) {
        CHECK(parsed.templates[i].sign == db.templates[i].sign);
        CHECK(parsed.templates[i].word == db.templates[i].word);
    }

    const auto dir = fs::temp_directory_path() / "signwave_db";
    fs::remove_all(dir);
    fs::create_directories(dir);
    rec::save_db(db, dir / "a.saxdb");
    const auto loaded = rec::load_db(dir / "a.saxdb");
    rec::save_db(loaded, dir / "b.saxdb");
    std::ifstream fa(dir / "a.saxdb", std::ios::binary), fb(dir / "b.saxdb", std::ios::binary);
    const std::string ba((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string bb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    REQUIRE(ba == bb);
    fs::remove_all(dir);
}

TEST_CASE("saxdb rejects malformed input") {
    CHECK_THROWS_AS(rec::from_saxdb(""), IoError);
    CHECK_THROWS_AS(rec::from_saxdb("saxdb 2 360 36 6 0\n"), IoError);
    CHECK_THROWS_AS(rec::from_saxdb("saxdb 1 360 36 6 zero\n"), IoError);
    CHECK_THROWS_AS(rec::from_saxdb("saxdb 1 360 36 6 0\nNo\t0\t3\t5\n"), IoError);
    CHECK_THROWS_AS(rec::from_saxdb("saxdb 1 360 36 6 0\nNo\t0\t3\t5\tabc\n"), InvalidInput);
    // word letters must fit the alphabet
    std::string word36(36, 'z');
    CHECK_THROWS_AS(rec::from_saxdb("saxdb 1 360 36 6 0\nNo\t0\t3\t5\t" + word36 + "\n"),
                    InvalidInput);
}
