// signwave: corpus generation, enrollment, recognition, sweep evaluation,
// timing benchmark, protocol simulation and light/pattern emission.
//
// Exit codes: 0 success, 1 recognized-negative (NOMATCH/NOSHAPE),
//             2 usage or I/O error, 3 safety terminal.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "signwave/corpus.hpp"
#include "signwave/flight.hpp"
#include "signwave/image.hpp"
#include "signwave/leds.hpp"
#include "signwave/protocol.hpp"
#include "signwave/recognizer.hpp"
#include "signwave/render.hpp"
#include "signwave/sax.hpp"
#include "signwave/sign_id.hpp"
#include "signwave/signature.hpp"
#include "signwave/text.hpp"

namespace {

using namespace signwave;

bool use_color(std::FILE* stream) {
    if (std::getenv("SIGNWAVE_NO_COLOR") != nullptr) return false;
    return isatty(fileno(stream)) != 0;
}

const char* color_red(std::FILE* s) { return use_color(s) ? "\x1b[31m" : ""; }
const char* color_cyan(std::FILE* s) { return use_color(s) ? "\x1b[36m" : ""; }
const char* color_reset(std::FILE* s) { return use_color(s) ? "\x1b[0m" : ""; }

void fail(const std::string& message) {
    std::fprintf(stderr, "%ssignwave: %s%s\n", color_red(stderr), message.c_str(),
                 color_reset(stderr));
}

// "0,5,10" or "start:stop:step" (inclusive stop)
std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        const auto parts = text::split(text, ':');
        if (parts.size() != 3) throw InvalidInput("range must be start:stop:step");
        const auto start = text::parse_double(parts[0]);
        const auto stop = text::parse_double(parts[1]);
        const auto step = text::parse_double(parts[2]);
        if (!start || !stop || !step || *step <= 0.0) throw InvalidInput("bad range: " + text);
        for (double v = *start; v <= *stop + 1e-9; v += *step) values.push_back(v);
        return values;
    }
    for (const auto& field : text::split(text, ',')) {
        const auto v = text::parse_double(text::trim(field));
        if (!v) throw InvalidInput("bad number in list: " + std::string(field));
        values.push_back(*v);
    }
    return values;
}

SignId sign_from_cli(const std::string& name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "yes") return kSignYes;
    if (lower == "no") return kSignNo;
    if (lower == "attention" || lower == "attentiongained" || lower == "attention-gained")
        return kSignAttentionGained;
    return name;
}

struct PipelineFlags {
    int threshold = 128;
    std::string polarity = "dark";
    int samples = 360;
    int word = 36;
    int alphabet = 6;
    CLI::App* cmd = nullptr;

    void attach(CLI::App* owner) {
        cmd = owner;
        cmd->add_option("--threshold", threshold, "binarization threshold (0-255)");
        cmd->add_option("--polarity", polarity, "foreground polarity: dark|light")
            ->check(CLI::IsMember({"dark", "light"}));
        cmd->add_option("--samples", samples, "signature samples N");
        cmd->add_option("--word", word, "SAX word length w");
        cmd->add_option("--alphabet", alphabet, "SAX alphabet size a");
    }

    shape::PipelineConfig config() const {
        shape::PipelineConfig cfg;
        cfg.threshold = threshold;
        cfg.polarity = img::polarity_from_name(polarity);
        cfg.signature_samples = samples;
        cfg.sax_params = {word, alphabet};
        cfg.validate();
        return cfg;
    }

    // word parameters are pinned by an existing database; explicitly given
    // flags must agree with it
    void require_matches(const rec::TemplateDB& db) const {
        if (cmd->count("--samples") && samples != db.signature_samples)
            throw InvalidInput("--samples conflicts with the database (" +
                               std::to_string(db.signature_samples) + ")");
        if (cmd->count("--word") && word != db.params.word_length)
            throw InvalidInput("--word conflicts with the database (" +
                               std::to_string(db.params.word_length) + ")");
        if (cmd->count("--alphabet") && alphabet != db.params.alphabet)
            throw InvalidInput("--alphabet conflicts with the database (" +
                               std::to_string(db.params.alphabet) + ")");
    }
};

std::ostream& open_output(std::ofstream& file, const std::string& out_path) {
    if (out_path.empty()) return std::cout;
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write: " + out_path);
    return file;
}

// ---- subcommands ------------------------------------------------------------

int cmd_gen_corpus(const std::string& out_dir, const std::vector<std::string>& sign_names,
                   const std::string& azimuths, const std::string& altitudes, double distance,
                   int width, int height, double noise, std::uint64_t seed, int repeats) {
    synth::GridSpec grid;
    if (!sign_names.empty()) {
        grid.signs.clear();
        for (const auto& name : sign_names) grid.signs.push_back(sign_from_cli(name));
    }
    grid.azimuths_deg = parse_value_list(azimuths);
    grid.altitudes_m = parse_value_list(altitudes);
    grid.distance_m = distance;
    grid.image_width = width;
    grid.image_height = height;
    grid.noise_px = noise;
    grid.seed = seed;
    grid.repeats = repeats;

    const auto rows = synth::generate_corpus(grid, out_dir);
    std::fprintf(stderr, "%swrote %zu frames + manifest to %s%s\n", color_cyan(stderr), rows.size(),
                 out_dir.c_str(), color_reset(stderr));
    return 0;
}

int cmd_enroll(const std::string& db_path, const std::string& sign_name,
               const std::string& image_path, const PipelineFlags& flags, double theta,
               bool theta_given, double azimuth, double distance, double altitude) {
    rec::TemplateDB db;
    if (std::filesystem::exists(db_path)) {
        db = rec::load_db(db_path);
        flags.require_matches(db);
        db.pipeline.threshold = flags.threshold;
        db.pipeline.polarity = img::polarity_from_name(flags.polarity);
    } else {
        db = rec::make_db(flags.config());
    }
    if (theta_given) {
        db.theta = theta;
        db.auto_theta = false;
    }

    const auto frame = img::load_gray(image_path);
    const SignId sign = sign_from_cli(sign_name);
    auto result = rec::enroll(db, frame, sign, {azimuth, distance, altitude, image_path});
    if (!result.added)
        std::fprintf(stderr, "%snotice: identical template already enrolled for %s; kept as-is%s\n",
                     color_cyan(stderr), sign.c_str(), color_reset(stderr));
    rec::save_db(result.db, db_path);
    std::printf("ENROLLED %s templates=%zu theta=%s\n", sign.c_str(), result.db.size(),
                text::format_double(result.db.theta).c_str());
    return 0;
}

int cmd_recognize(const std::string& db_path, const std::string& image_path,
                  const PipelineFlags& flags, double theta, bool theta_given) {
    rec::TemplateDB db = rec::load_db(db_path);
    flags.require_matches(db);
    db.pipeline.threshold = flags.threshold;
    db.pipeline.polarity = img::polarity_from_name(flags.polarity);
    if (theta_given) db.theta = theta;

    const auto frame = img::load_gray(image_path);
    const auto result = rec::recognize(frame, db);
    switch (result.outcome) {
        case rec::MatchResult::Outcome::Match:
            std::printf("MATCH %s %s %d\n", result.sign.c_str(),
                        text::format_double(result.distance).c_str(), result.shift);
            return 0;
        case rec::MatchResult::Outcome::NoMatch:
            std::printf("NOMATCH %s\n", text::format_double(result.distance).c_str());
            return 1;
        case rec::MatchResult::Outcome::NoShape:
            std::printf("NOSHAPE %s\n", result.reason.c_str());
            return 1;
    }
    return 2;
}

int cmd_sweep(const std::string& db_path, const std::string& manifest_path,
              const std::string& out_path) {
    const rec::TemplateDB db = rec::load_db(db_path);
    const auto manifest = corpus::read_manifest(manifest_path);
    const auto base_dir = std::filesystem::path(manifest_path).parent_path();
    const auto report = rec::sweep(db, manifest, base_dir);

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    out << "sign,azimuth,altitude,attempts,correct,accuracy,mean_best_distance\n";
    for (const auto& cell : report.cells) {
        const double accuracy =
            cell.attempts > 0 ? static_cast<double>(cell.correct) / cell.attempts : 0.0;
        out << cell.sign << "," << text::format_double(cell.azimuth) << ","
            << text::format_double(cell.altitude) << "," << cell.attempts << "," << cell.correct
            << "," << text::format_double(accuracy) << ","
            << (cell.distance_count > 0 ? text::format_double(cell.mean_best_distance) : "") << "\n";
    }
    for (const auto& error : report.errors) {
        out << error.file << ",,,0,0,error," << "\n";
        std::fprintf(stderr, "%srow error: %s: %s%s\n", color_red(stderr), error.file.c_str(),
                     error.message.c_str(), color_reset(stderr));
    }
    for (const auto& [sign, boundary] : report.boundary_azimuth)
        std::fprintf(stderr, "%sboundary %s %s deg%s\n", color_cyan(stderr), sign.c_str(),
                     text::format_double(boundary).c_str(), color_reset(stderr));
    return 0;
}

int cmd_bench(const std::string& db_path, const std::string& manifest_path,
              const std::vector<std::string>& frame_paths, int iterations,
              const std::string& out_path) {
    if (iterations < 1) throw InvalidInput("iterations must be at least 1");
    const rec::TemplateDB db = rec::load_db(db_path);

    std::vector<std::string> encoded;  // decode is part of the measured loop
    if (!manifest_path.empty()) {
        const auto base = std::filesystem::path(manifest_path).parent_path();
        for (const auto& row : corpus::read_manifest(manifest_path)) {
            std::ifstream in(base / row.file, std::ios::binary);
            if (!in) throw IoError("cannot open frame: " + row.file);
            encoded.emplace_back((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
        }
    }
    for (const auto& path : frame_paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open frame: " + path);
        encoded.emplace_back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }
    if (encoded.empty()) throw InvalidInput("bench: no frames given (use --manifest or positionals)");

    std::vector<double> per_frame_ms;
    per_frame_ms.reserve(encoded.size() * static_cast<std::size_t>(iterations));
    for (int it = 0; it < iterations; ++it) {
        for (const auto& bytes : encoded) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto frame = img::decode_pgm(bytes);
            const auto result = rec::recognize(frame, db);
            const auto t1 = std::chrono::steady_clock::now();
            (void)result;
            per_frame_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
    }
    std::sort(per_frame_ms.begin(), per_frame_ms.end());
    const auto quantile = [&](double q) {
        const auto idx = static_cast<std::size_t>(q * (per_frame_ms.size() - 1));
        return per_frame_ms[idx];
    };
    double mean = 0.0;
    for (double v : per_frame_ms) mean += v;
    mean /= static_cast<double>(per_frame_ms.size());
    const double median = quantile(0.5);

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    out << "frames,iterations,samples,median_ms,p95_ms,mean_ms,fps\n";
    out << encoded.size() << "," << iterations << "," << per_frame_ms.size() << ","
        << text::format_double(median) << "," << text::format_double(quantile(0.95)) << ","
        << text::format_double(mean) << "," << text::format_double(1000.0 / median) << "\n";
    return 0;
}

int cmd_simulate(const std::string& script_path, double t1, double t2, int retries) {
    proto::Config cfg;
    cfg.attention_timeout_s = t1;
    cfg.decision_timeout_s = t2;
    cfg.max_repokes = retries;

    std::istream* in = &std::cin;
    std::ifstream file;
    if (!script_path.empty() && script_path != "-") {
        file.open(script_path);
        if (!file) throw IoError("cannot open script: " + script_path);
        in = &file;
    }
    std::vector<proto::Event> script;
    std::string line;
    while (std::getline(*in, line)) {
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        script.push_back(proto::parse_event(trimmed));
    }

    const auto log = proto::run_session(script, cfg);
    std::cout << proto::kSessionCsvHeader << "\n";
    for (const auto& record : log) std::cout << proto::to_csv(record) << "\n";
    const proto::State terminal = log.empty() ? proto::State::Idle : log.back().state;
    return terminal == proto::State::SafetyHold ? 3 : 0;
}

int cmd_lights(double heading, bool danger) {
    const auto ring = danger ? leds::danger_lights() : leds::nav_lights(heading);
    std::printf("%s\n", leds::to_string(ring).c_str());
    return 0;
}

int cmd_pattern(const std::string& kind_name, const flight::PatternParams& params,
                const std::string& out_path) {
    const auto kind = flight::pattern_from_name(kind_name);
    const auto traj = flight::make_pattern(kind, params);
    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    flight::write_csv(traj, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"marshalling-sign recognition and drone-side negotiation toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    // gen-corpus
    auto* gen = app.add_subcommand("gen-corpus", "render the synthetic sign corpus");
    std::string gen_out;
    std::vector<std::string> gen_signs;
    std::string gen_azimuth = "0:90:5";
    std::string gen_altitude = "2:5:1";
    double gen_distance = 3.0;
    int gen_width = 640, gen_height = 480;
    double gen_noise = 0.0;
    std::uint64_t gen_seed = 0;
    int gen_repeats = 1;
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--signs", gen_signs, "signs to render (default: all three)");
    gen->add_option("--azimuth", gen_azimuth, "azimuth list or start:stop:step");
    gen->add_option("--altitude", gen_altitude, "altitude list or start:stop:step");
    gen->add_option("--distance", gen_distance, "horizontal distance in metres");
    gen->add_option("--width", gen_width, "frame width");
    gen->add_option("--height", gen_height, "frame height");
    gen->add_option("--noise", gen_noise, "boundary jitter amplitude in pixels");
    gen->add_option("--seed", gen_seed, "base seed");
    gen->add_option("--repeats", gen_repeats, "frames per grid cell");
    gen->callback([&] {
        rc = cmd_gen_corpus(gen_out, gen_signs, gen_azimuth, gen_altitude, gen_distance, gen_width,
                            gen_height, gen_noise, gen_seed, gen_repeats);
    });

    // enroll
    auto* enroll = app.add_subcommand("enroll", "add a template image to the database");
    std::string enroll_db, enroll_sign, enroll_image;
    PipelineFlags enroll_flags;
    double enroll_theta = 0.0;
    double enroll_azimuth = 0.0, enroll_distance = 3.0, enroll_altitude = 5.0;
    enroll->add_option("--db", enroll_db, "saxdb database path")->required();
    enroll->add_option("--sign", enroll_sign, "sign name")->required();
    enroll->add_option("image", enroll_image, "PGM frame to enroll")->required();
    enroll_flags.attach(enroll);
    auto* enroll_theta_opt = enroll->add_option("--theta", enroll_theta, "pin the rejection threshold");
    enroll->add_option("--azimuth", enroll_azimuth, "template metadata: azimuth");
    enroll->add_option("--distance", enroll_distance, "template metadata: distance (m)");
    enroll->add_option("--altitude", enroll_altitude, "template metadata: altitude (m)");
    enroll->callback([&] {
        rc = cmd_enroll(enroll_db, enroll_sign, enroll_image, enroll_flags, enroll_theta,
                        enroll_theta_opt->count() > 0, enroll_azimuth, enroll_distance,
                        enroll_altitude);
    });

    // recognize
    auto* recognize = app.add_subcommand("recognize", "match a frame against the database");
    std::string rec_db, rec_image;
    PipelineFlags rec_flags;
    double rec_theta = 0.0;
    recognize->add_option("--db", rec_db, "saxdb database path")->required();
    recognize->add_option("image", rec_image, "PGM frame to recognize")->required();
    rec_flags.attach(recognize);
    auto* rec_theta_opt = recognize->add_option("--theta", rec_theta, "override rejection threshold");
    recognize->callback([&] {
        rc = cmd_recognize(rec_db, rec_image, rec_flags, rec_theta, rec_theta_opt->count() > 0);
    });

    // sweep
    auto* sweep = app.add_subcommand("sweep", "evaluate recognition over a corpus manifest");
    std::string sweep_db, sweep_manifest, sweep_out;
    sweep->add_option("--db", sweep_db, "saxdb database path")->required();
    sweep->add_option("--manifest", sweep_manifest, "corpus manifest CSV")->required();
    sweep->add_option("--out", sweep_out, "write the CSV report here instead of stdout");
    sweep->callback([&] { rc = cmd_sweep(sweep_db, sweep_manifest, sweep_out); });

    // bench
    auto* bench = app.add_subcommand("bench", "time the full per-frame recognition pipeline");
    std::string bench_db, bench_manifest, bench_out;
    std::vector<std::string> bench_frames;
    int bench_iterations = 100;
    bench->add_option("--db", bench_db, "saxdb database path")->required();
    bench->add_option("--manifest", bench_manifest, "corpus manifest CSV");
    bench->add_option("frames", bench_frames, "PGM frames");
    bench->add_option("--iterations", bench_iterations, "passes over the frame set");
    bench->add_option("--out", bench_out, "write the CSV report here instead of stdout");
    bench->callback(
        [&] { rc = cmd_bench(bench_db, bench_manifest, bench_frames, bench_iterations, bench_out); });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a negotiation event script");
    std::string sim_script;
    double sim_t1 = 10.0, sim_t2 = 15.0;
    int sim_retries = 1;
    simulate->add_option("--script", sim_script, "event script file ('-' or empty: stdin)");
    simulate->add_option("--t1", sim_t1, "attention timeout (s)");
    simulate->add_option("--t2", sim_t2, "decision timeout (s)");
    simulate->add_option("--retries", sim_retries, "re-poke budget after decision timeouts");
    simulate->callback([&] { rc = cmd_simulate(sim_script, sim_t1, sim_t2, sim_retries); });

    // lights
    auto* lights = app.add_subcommand("lights", "emit the 10-slot navigation ring");
    double lights_heading = 0.0;
    bool lights_danger = false;
    lights->add_option("--heading", lights_heading, "flight direction in degrees");
    lights->add_flag("--danger", lights_danger, "all-red safety ring");
    lights->callback([&] { rc = cmd_lights(lights_heading, lights_danger); });

    // pattern
    auto* pattern = app.add_subcommand("pattern", "emit a flight pattern as CSV");
    std::string pattern_kind, pattern_out;
    flight::PatternParams pattern_params;
    double pattern_amplitude = -1.0;
    pattern->add_option("kind", pattern_kind,
                        "takeoff|land|cruise|poke|nod-yes|turn-no|rectangle")
        ->required();
    pattern->add_option("--height", pattern_params.height_m, "flight height (m)");
    pattern->add_option("--speed", pattern_params.speed_mps, "speed (m/s)");
    pattern->add_option("--rect-width", pattern_params.rect_width_m, "rectangle width (m)");
    pattern->add_option("--rect-length", pattern_params.rect_length_m, "rectangle length (m)");
    auto* amp_opt = pattern->add_option("--amplitude", pattern_amplitude, "oscillation amplitude (m)");
    pattern->add_option("--cruise-length", pattern_params.cruise_length_m, "cruise length (m)");
    pattern->add_option("--approach", pattern_params.approach_m, "poke approach distance (m)");
    pattern->add_option("--yaw-rate", pattern_params.yaw_rate_dps, "turn-no yaw rate (deg/s)");
    pattern->add_option("--dt", pattern_params.dt_s, "sample step (s)");
    pattern->add_option("--out", pattern_out, "write the CSV here instead of stdout");
    pattern->callback([&] {
        if (amp_opt->count() > 0) pattern_params.amplitude_m = pattern_amplitude;
        rc = cmd_pattern(pattern_kind, pattern_params, pattern_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        fail(e.what());
        return 2;
    }
    return rc;
}
