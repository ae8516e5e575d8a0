// End-to-end walkthrough: render the three marshalling signs, enroll them,
// recognize frames the drone might see (including a rotated one), and drive
// the negotiation machine with the recognizer's output.

#include <cstdio>
#include <vector>

#include "signwave/protocol.hpp"
#include "signwave/recognizer.hpp"
#include "signwave/render.hpp"

using namespace signwave;

int main() {
    // enroll the canonical views
    auto db = rec::make_db(shape::PipelineConfig{});
    for (const auto& sign : {kSignAttentionGained, kSignYes, kSignNo}) {
        synth::ViewSpec view;  // frontal, 3 m away, 5 m altitude
        const auto frame = synth::render_sign(synth::canonical_pose(sign), view, 0);
        db = rec::enroll(db, frame, sign, {0.0, 3.0, 5.0, ""}).db;
    }
    std::printf("enrolled %zu templates, theta = %.3f\n\n", db.size(), db.theta);

    // what the drone sees: an attention sign, then a yes, slightly rotated
    synth::ViewSpec live;
    live.altitude_m = 4.0;
    live.noise_px = 0.5;
    const auto attention = synth::render_sign(synth::canonical_pose(kSignAttentionGained), live, 7);
    const auto yes =
        img::rotate_about_center(synth::render_sign(synth::canonical_pose(kSignYes), live, 8), 15.0, 255);

    std::vector<proto::Event> script = {proto::Event::arrived(), proto::Event::poke_complete()};
    for (const auto& frame : {attention, yes}) {
        const auto result = rec::recognize(frame, db);
        if (result.outcome == rec::MatchResult::Outcome::Match) {
            std::printf("frame -> MATCH %s (distance %.3f)\n", result.sign.c_str(), result.distance);
            script.push_back(proto::Event::sign_seen(result.sign));
            if (result.sign == kSignAttentionGained) script.push_back(proto::Event::poke_complete());
        } else {
            std::printf("frame -> no usable sign\n");
            script.push_back(proto::Event::timeout());
        }
    }
    script.push_back(proto::Event::area_cleared());

    std::printf("\n%s\n", proto::kSessionCsvHeader);
    for (const auto& record : proto::run_session(script, proto::Config{}))
        std::printf("%s\n", proto::to_csv(record).c_str());
    return 0;
}
