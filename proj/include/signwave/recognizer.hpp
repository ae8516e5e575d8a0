#pragma once

// Template database and rotation-invariant sign matching with a rejection
// threshold. Databases are value types: enrollment returns a new database and
// never mutates the input, so recognition can run concurrently against a
// shared instance.

#include <algorithm>
#include <cmath>
#include <limits>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "signwave/corpus.hpp"
#include "signwave/errors.hpp"
#include "signwave/image.hpp"
#include "signwave/sax.hpp"
#include "signwave/sign_id.hpp"
#include "signwave/signature.hpp"
#include "signwave/text.hpp"

namespace signwave::rec {

struct TemplateMeta {
    double azimuth = 0.0;
    double distance_m = 3.0;
    double altitude_m = 5.0;
    std::string file;  // provenance only; not serialized
};

struct Template {
    SignId sign;
    sax::Word word;
    TemplateMeta meta;
};

struct TemplateDB {
    int signature_samples = 360;
    sax::Params params{36, 6};
    double theta = 0.0;
    bool auto_theta = true;  // recalibrate theta on enrollment
    std::vector<Template> templates;

    shape::PipelineConfig pipeline;  // threshold/polarity travel with the db in memory

    std::size_t size() const { return templates.size(); }
    bool empty() const { return templates.empty(); }
};

inline TemplateDB make_db(const shape::PipelineConfig& cfg) {
    cfg.validate();
    TemplateDB db;
    db.signature_samples = cfg.signature_samples;
    db.params = cfg.sax_params;
    db.pipeline = cfg;
    return db;
}

inline shape::PipelineConfig db_pipeline(const TemplateDB& db) {
    shape::PipelineConfig cfg = db.pipeline;
    cfg.signature_samples = db.signature_samples;
    cfg.sax_params = db.params;
    return cfg;
}

// Smallest rotation-invariant distance between templates of different signs;
// empty when fewer than two signs are enrolled.
inline std::optional<double> min_inter_sign_distance(const TemplateDB& db) {
    std::optional<double> best;
    for (std::size_t i = 0; i < db.templates.size(); ++i) {
        for (std::size_t j = i + 1; j < db.templates.size(); ++j) {
            if (db.templates[i].sign == db.templates[j].sign) continue;
            const double d =
                sax::rotation_min_dist(db.templates[i].word, db.templates[j].word).distance;
            if (!best || d < *best) best = d;
        }
    }
    return best;
}

namespace detail {

inline sax::Word word_of_frame(const img::GrayImage& frame, const shape::PipelineConfig& cfg) {
    const auto result = shape::image_to_word(frame, cfg);
    if (result.degenerate) throw DegenerateShape("signature too flat to identify a sign");
    return result.word;
}

}  // namespace detail

struct EnrollResult {
    TemplateDB db;
    bool added = false;  // false: identical (sign, word) template already present
};

// Extends the database with a new template. Duplicate (sign, word) pairs are
// a no-op. When theta is in auto mode it is recalibrated to half the minimum
// inter-sign template distance as soon as two signs are present.
inline EnrollResult enroll(const TemplateDB& db, const img::GrayImage& frame, const SignId& sign,
                           const TemplateMeta& meta = {}) {
    if (sign.empty() || sign.find_first_of(",\t\n\r") != std::string::npos)
        throw InvalidInput("enroll: sign names must be non-empty and free of separators");
    TemplateDB out = db;
    const sax::Word word = detail::word_of_frame(frame, db_pipeline(db));
    for (const auto& t : out.templates) {
        if (t.sign == sign && t.word == word) return {std::move(out), false};
    }
    out.templates.push_back({sign, word, meta});
    if (out.auto_theta) {
        if (const auto inter = min_inter_sign_distance(out)) out.theta = 0.5 * *inter;
    }
    return {std::move(out), true};
}

struct MatchResult {
    enum class Outcome { Match, NoMatch, NoShape };
    Outcome outcome = Outcome::NoShape;
    SignId sign;             // Match only
    double distance = 0.0;   // Match: winning distance; NoMatch: best distance
    int shift = 0;           // Match only: word rotation that aligned the frame
    std::string reason;      // NoShape only
};

// Rotation-invariant nearest-template decision. Distances above theta are
// reported as NoMatch rather than a best guess; frames with no usable shape
// come back as NoShape.
inline MatchResult recognize(const img::GrayImage& frame, const TemplateDB& db) {
    if (db.empty()) throw InvalidInput("recognize: empty template database");

    sax::Word word;
    try {
        word = detail::word_of_frame(frame, db_pipeline(db));
    } catch (const EmptyScene&) {
        return {MatchResult::Outcome::NoShape, {}, 0.0, 0, "empty_scene"};
    } catch (const TooSmall&) {
        return {MatchResult::Outcome::NoShape, {}, 0.0, 0, "too_small"};
    } catch (const DegenerateShape&) {
        return {MatchResult::Outcome::NoShape, {}, 0.0, 0, "degenerate"};
    }

    double best = std::numeric_limits<double>::infinity();
    int best_shift = 0;
    const Template* winner = nullptr;
    for (const auto& t : db.templates) {
        const auto m = sax::rotation_min_dist(word, t.word);
        if (m.distance < best) {  // strict: earlier enrollment wins ties
            best = m.distance;
            best_shift = m.shift;
            winner = &t;
        }
    }
    if (best <= db.theta) return {MatchResult::Outcome::Match, winner->sign, best, best_shift, {}};
    return {MatchResult::Outcome::NoMatch, {}, best, 0, {}};
}

// ---- uniqueness report ------------------------------------------------------

struct UniquenessPair {
    std::size_t first = 0;
    std::size_t second = 0;
    bool words_distinct = false;
    double distance = 0.0;
};

struct UniquenessReport {
    std::vector<UniquenessPair> pairs;  // templates of different signs only
    double min_inter_sign_distance = 0.0;
    bool all_words_distinct = true;
};

inline UniquenessReport pairwise_uniqueness(const TemplateDB& db) {
    std::map<SignId, int> signs;
    for (const auto& t : db.templates) signs[t.sign] += 1;
    if (signs.size() < 2) throw InvalidInput("uniqueness: need at least two enrolled signs");

    UniquenessReport report;
    report.min_inter_sign_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < db.templates.size(); ++i) {
        for (std::size_t j = i + 1; j < db.templates.size(); ++j) {
            if (db.templates[i].sign == db.templates[j].sign) continue;
            UniquenessPair pair;
            pair.first = i;
            pair.second = j;
            pair.words_distinct = !(db.templates[i].word == db.templates[j].word);
            pair.distance =
                sax::rotation_min_dist(db.templates[i].word, db.templates[j].word).distance;
            report.min_inter_sign_distance = std::min(report.min_inter_sign_distance, pair.distance);
            report.all_words_distinct = report.all_words_distinct && pair.words_distinct;
            report.pairs.push_back(pair);
        }
    }
    return report;
}

// ---- sweep evaluation -------------------------------------------------------

struct SweepCell {
    SignId sign;
    double azimuth = 0.0;
    double altitude = 0.0;
    int attempts = 0;
    int correct = 0;
    double mean_best_distance = 0.0;  // over attempts that produced a distance
    int distance_count = 0;
};

struct SweepRowError {
    std::string file;
    std::string message;
};

struct SweepReport {
    std::vector<SweepCell> cells;  // ordered by first appearance in the manifest
    std::vector<SweepRowError> errors;
    std::map<SignId, double> boundary_azimuth;  // largest azimuth with >= 90% correct
};

// Runs recognition over every manifest row. Missing or unreadable files
// become error entries and the sweep continues.
inline SweepReport sweep(const TemplateDB& db, const std::vector<corpus::ManifestRow>& manifest,
                         const std::filesystem::path& base_dir) {
    SweepReport report;
    auto cell_of = [&](const corpus::ManifestRow& row) -> SweepCell& {
        for (auto& c : report.cells)
            if (c.sign == row.sign && c.azimuth == row.azimuth && c.altitude == row.altitude_m)
                return c;
        report.cells.push_back({row.sign, row.azimuth, row.altitude_m, 0, 0, 0.0, 0});
        return report.cells.back();
    };

    for (const auto& row : manifest) {
        img::GrayImage frame;
        try {
            frame = img::load_gray(base_dir / row.file);
        } catch (const Error& e) {
            report.errors.push_back({row.file, e.what()});
            continue;
        }
        auto& cell = cell_of(row);
        cell.attempts += 1;
        const MatchResult result = recognize(frame, db);
        if (result.outcome == MatchResult::Outcome::Match) {
            if (result.sign == row.sign) cell.correct += 1;
            cell.mean_best_distance += result.distance;
            cell.distance_count += 1;
        } else if (result.outcome == MatchResult::Outcome::NoMatch) {
            cell.mean_best_distance += result.distance;
            cell.distance_count += 1;
        }
    }
    for (auto& cell : report.cells)
        if (cell.distance_count > 0) cell.mean_best_distance /= cell.distance_count;

    // per-sign boundary: largest azimuth bin still at >= 90% correct
    std::map<SignId, std::map<double, std::pair<int, int>>> by_azimuth;  // az -> (attempts, correct)
    for (const auto& cell : report.cells) {
        auto& slot = by_azimuth[cell.sign][cell.azimuth];
        slot.first += cell.attempts;
        slot.second += cell.correct;
    }
    for (const auto& [sign, bins] : by_azimuth) {
        double boundary = -1.0;
        for (const auto& [az, counts] : bins) {
            if (counts.first > 0 && counts.second * 10 >= counts.first * 9)
                boundary = std::max(boundary, az);
        }
        if (boundary >= 0.0) report.boundary_azimuth[sign] = boundary;
    }
    return report;
}

// ---- saxdb text format ------------------------------------------------------
//
//   saxdb 1 <N> <w> <a> <theta>
//   <sign>\t<azimuth>\t<distance_m>\t<altitude_m>\t<word-as-lowercase-letters>
//
// Doubles use shortest round-trip formatting so save/load/save is bit-exact.

inline std::string to_saxdb(const TemplateDB& db) {
    std::string out = "saxdb 1 " + std::to_string(db.signature_samples) + " " +
                      std::to_string(db.params.word_length) + " " +
                      std::to_string(db.params.alphabet) + " " + text::format_double(db.theta) + "\n";
    for (const auto& t : db.templates) {
        out += t.sign + "\t" + text::format_double(t.meta.azimuth) + "\t" +
               text::format_double(t.meta.distance_m) + "\t" +
               text::format_double(t.meta.altitude_m) + "\t" + t.word.letters() + "\n";
    }
    return out;
}

inline TemplateDB from_saxdb(std::string_view data) {
    TemplateDB db;
    std::size_t pos = 0;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (pos <= data.size()) {
        const std::size_t eol = data.find('\n', pos);
        std::string_view line = data.substr(pos, eol == std::string_view::npos ? data.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? data.size() + 1 : eol + 1;
        ++lineno;
        line = text::trim(line);
        if (line.empty()) continue;

        if (!header_seen) {
            const auto fields = text::split(line, ' ');
            if (fields.size() != 6 || fields[0] != "saxdb" || fields[1] != "1")
                throw IoError("saxdb: bad header");
            const auto n = text::parse_int(fields[2]);
            const auto w = text::parse_int(fields[3]);
            const auto a = text::parse_int(fields[4]);
            const auto theta = text::parse_double(fields[5]);
            if (!n || !w || !a || !theta) throw IoError("saxdb: bad header numbers");
            db.signature_samples = static_cast<int>(*n);
            db.params = {static_cast<int>(*w), static_cast<int>(*a)};
            db.theta = *theta;
            db.auto_theta = true;  // theta keeps tracking enrollment unless pinned by the caller
            sax::validate(db.params);
            if (db.signature_samples < db.params.word_length)
                throw IoError("saxdb: word length exceeds signature samples");
            header_seen = true;
            continue;
        }

        const auto fields = text::split(line, '\t');
        if (fields.size() != 5)
            throw IoError("saxdb: expected 5 tab-separated fields at line " + std::to_string(lineno));
        Template t;
        t.sign = std::string(fields[0]);
        const auto az = text::parse_double(fields[1]);
        const auto dist = text::parse_double(fields[2]);
        const auto alt = text::parse_double(fields[3]);
        if (t.sign.empty() || !az || !dist || !alt)
            throw IoError("saxdb: bad template fields at line " + std::to_string(lineno));
        t.meta.azimuth = *az;
        t.meta.distance_m = *dist;
        t.meta.altitude_m = *alt;
        t.word = sax::word_from_letters(fields[4], db.params, db.signature_samples);
        db.templates.push_back(std::move(t));
    }
    if (!header_seen) throw IoError("saxdb: missing header");
    return db;
}

inline void save_db(const TemplateDB& db, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write database: " + path.string());
    const std::string data = to_saxdb(db);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("short write: " + path.string());
}

inline TemplateDB load_db(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open database: " + path.string());
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return from_saxdb(data);
    } catch (const IoError& e) {
        throw IoError(std::string(e.what()) + " (" + path.string() + ")");
    }
}

}  // namespace signwave::rec
