#pragma once

// Drone-side negotiation state machine for trap access.
//
// Transition table (safety first: SafetyTrigger from ANY state enters
// SafetyHold with [SetLights(AllRed), Hover]):
//
//   Idle          Reset                  -> Idle
//   Idle/Approach ArrivedAtSafeDistance  -> Poke          [ExecutePattern(Poke), StartTimer(attention, T1)]
//   Poke          PokeComplete           -> AwaitAttention
//   AwaitAttention SignSeen(Attention)   -> RequestArea   [ExecutePattern(Rectangle), StartTimer(decision, T2)]
//   AwaitAttention Timeout               -> Withdraw      [FlyTo(Retreat)]
//   RequestArea   PokeComplete           -> AwaitDecision        (pattern-complete analog)
//   AwaitDecision SignSeen(Yes)          -> Enter         [FlyTo(Area)]
//   AwaitDecision SignSeen(No)           -> Withdraw      [FlyTo(Retreat)]
//   AwaitDecision Timeout                -> Poke once more, then Withdraw (retry budget in Config)
//   Enter         AreaCleared            -> Idle
//   SafetyHold    Reset                  -> Idle
//   anything else                        -> same state, no actions, logged Ignored
//
// Logical time only; wall-clock timers live with the caller.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "signwave/errors.hpp"
#include "signwave/flight.hpp"
#include "signwave/leds.hpp"
#include "signwave/sign_id.hpp"
#include "signwave/text.hpp"

namespace signwave::proto {

enum class State {
    Idle,
    Approach,
    Poke,
    AwaitAttention,
    RequestArea,
    AwaitDecision,
    Enter,
    Withdraw,
    SafetyHold,
};

inline constexpr State kAllStates[] = {State::Idle,          State::Approach,
                                       State::Poke,          State::AwaitAttention,
                                       State::RequestArea,   State::AwaitDecision,
                                       State::Enter,         State::Withdraw,
                                       State::SafetyHold};

struct Event {
    enum class Kind {
        ArrivedAtSafeDistance,
        PokeComplete,
        SignSeen,
        Timeout,
        AreaCleared,
        SafetyTrigger,
        Reset,
    };
    Kind kind = Kind::Reset;
    SignId sign;  // SignSeen only

    static Event arrived() { return {Kind::ArrivedAtSafeDistance, {}}; }
    static Event poke_complete() { return {Kind::PokeComplete, {}}; }
    static Event sign_seen(SignId s) { return {Kind::SignSeen, std::move(s)}; }
    static Event timeout() { return {Kind::Timeout, {}}; }
    static Event area_cleared() { return {Kind::AreaCleared, {}}; }
    static Event safety() { return {Kind::SafetyTrigger, {}}; }
    static Event reset() { return {Kind::Reset, {}}; }

    friend bool operator==(const Event&, const Event&) = default;
};

inline constexpr Event::Kind kAllEventKinds[] = {
    Event::Kind::ArrivedAtSafeDistance, Event::Kind::PokeComplete, Event::Kind::SignSeen,
    Event::Kind::Timeout,               Event::Kind::AreaCleared,  Event::Kind::SafetyTrigger,
    Event::Kind::Reset};

// ---- action commands --------------------------------------------------------

enum class FlyTarget { Area, Retreat };

struct FlyTo {
    FlyTarget target;
    friend bool operator==(const FlyTo&, const FlyTo&) = default;
};
struct ExecutePattern {
    flight::PatternKind pattern;
    friend bool operator==(const ExecutePattern&, const ExecutePattern&) = default;
};
struct SetLights {
    leds::LightMode mode;
    friend bool operator==(const SetLights&, const SetLights&) = default;
};
struct StartTimer {
    std::string label;
    double duration_s;
    friend bool operator==(const StartTimer&, const StartTimer&) = default;
};
struct Hover {
    friend bool operator==(const Hover&, const Hover&) = default;
};
struct Abort {
    friend bool operator==(const Abort&, const Abort&) = default;
};

using Action = std::variant<FlyTo, ExecutePattern, SetLights, StartTimer, Hover, Abort>;

struct Config {
    double attention_timeout_s = 10.0;  // T1
    double decision_timeout_s = 15.0;   // T2
    int max_repokes = 1;
};

struct Machine {
    State state = State::Idle;
    int repokes_used = 0;
    friend bool operator==(const Machine&, const Machine&) = default;
};

struct StepResult {
    Machine machine;
    std::vector<Action> actions;
    bool ignored = false;  // undefined (state, event) pair: explicit self-loop
};

// Total over state x event; undefined pairs self-loop with the ignored flag.
inline StepResult step(Machine m, const Event& event, const Config& cfg) {
    using K = Event::Kind;

    if (event.kind == K::SafetyTrigger) {
        m.state = State::SafetyHold;
        return {m, {SetLights{leds::LightMode::all_red()}, Hover{}}, false};
    }

    const auto poke_actions = [&cfg] {
        return std::vector<Action>{ExecutePattern{flight::PatternKind::Poke},
                                   StartTimer{"attention", cfg.attention_timeout_s}};
    };

    switch (m.state) {
        case State::Idle:
            if (event.kind == K::Reset) return {m, {}, false};
            if (event.kind == K::ArrivedAtSafeDistance) {
                m.state = State::Poke;
                m.repokes_used = 0;
                return {m, poke_actions(), false};
            }
            break;
        case State::Approach:
            if (event.kind == K::ArrivedAtSafeDistance) {
                m.state = State::Poke;
                m.repokes_used = 0;
                return {m, poke_actions(), false};
            }
            break;
        case State::Poke:
            if (event.kind == K::PokeComplete) {
                m.state = State::AwaitAttention;
                return {m, {}, false};
            }
            break;
        case State::AwaitAttention:
            if (event.kind == K::SignSeen && event.sign == kSignAttentionGained) {
                m.state = State::RequestArea;
                return {m,
                        {ExecutePattern{flight::PatternKind::Rectangle},
                         StartTimer{"decision", cfg.decision_timeout_s}},
                        false};
            }
            if (event.kind == K::Timeout) {  // the collaborator may ignore the approach
                m.state = State::Withdraw;
                return {m, {FlyTo{FlyTarget::Retreat}}, false};
            }
            break;
        case State::RequestArea:
            if (event.kind == K::PokeComplete) {
                m.state = State::AwaitDecision;
                return {m, {}, false};
            }
            break;
        case State::AwaitDecision:
            if (event.kind == K::SignSeen && event.sign == kSignYes) {
                m.state = State::Enter;
                return {m, {FlyTo{FlyTarget::Area}}, false};
            }
            if (event.kind == K::SignSeen && event.sign == kSignNo) {
                m.state = State::Withdraw;
                return {m, {FlyTo{FlyTarget::Retreat}}, false};
            }
            if (event.kind == K::Timeout) {
                if (m.repokes_used < cfg.max_repokes) {
                    m.repokes_used += 1;
                    m.state = State::Poke;
                    return {m, poke_actions(), false};
                }
                m.state = State::Withdraw;
                return {m, {FlyTo{FlyTarget::Retreat}}, false};
            }
            break;
        case State::Enter:
            if (event.kind == K::AreaCleared) {
                m.state = State::Idle;
                m.repokes_used = 0;
                return {m, {}, false};
            }
            break;
        case State::Withdraw:
            break;
        case State::SafetyHold:
            if (event.kind == K::Reset) {
                m.state = State::Idle;
                m.repokes_used = 0;
                return {m, {}, false};
            }
            break;
    }
    return {m, {}, true};
}

// ---- session log ------------------------------------------------------------

struct LogRecord {
    int t = 0;  // logical time: 1-based event index
    State state;  // state after the event
    Event event;
    std::vector<Action> actions;
    bool ignored = false;
};

using SessionLog = std::vector<LogRecord>;

inline SessionLog run_session(std::span<const Event> script, const Config& cfg) {
    SessionLog log;
    log.reserve(script.size());
    Machine m;
    int t = 0;
    for (const Event& event : script) {
        auto result = step(m, event, cfg);
        m = result.machine;
        log.push_back({++t, m.state, event, std::move(result.actions), result.ignored});
    }
    return log;
}

// ---- text formats -----------------------------------------------------------

inline std::string to_string(State s) {
    switch (s) {
        case State::Idle: return "Idle";
        case State::Approach: return "Approach";
        case State::Poke: return "Poke";
        case State::AwaitAttention: return "AwaitAttention";
        case State::RequestArea: return "RequestArea";
        case State::AwaitDecision: return "AwaitDecision";
        case State::Enter: return "Enter";
        case State::Withdraw: return "Withdraw";
        case State::SafetyHold: return "SafetyHold";
    }
    return "?";
}

inline std::string to_string(const Event& e) {
    using K = Event::Kind;
    switch (e.kind) {
        case K::ArrivedAtSafeDistance: return "ARRIVED";
        case K::PokeComplete: return "POKE_COMPLETE";
        case K::SignSeen: {
            if (e.sign == kSignYes) return "SIGN:YES";
            if (e.sign == kSignNo) return "SIGN:NO";
            if (e.sign == kSignAttentionGained) return "SIGN:ATTENTION";
            return "SIGN:" + e.sign;
        }
        case K::Timeout: return "TIMEOUT";
        case K::AreaCleared: return "AREA_CLEARED";
        case K::SafetyTrigger: return "SAFETY";
        case K::Reset: return "RESET";
    }
    return "?";
}

// One event per line: EVENT or EVENT:ARG. PATTERN_DONE is accepted as an
// alias for POKE_COMPLETE (the table treats a finished pattern the same way).
inline Event parse_event(std::string_view line) {
    const auto trimmed = text::trim(line);
    const auto colon = trimmed.find(':');
    const std::string_view head = colon == std::string_view::npos ? trimmed : trimmed.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? "" : trimmed.substr(colon + 1);

    if (head == "ARRIVED") return Event::arrived();
    if (head == "POKE_COMPLETE" || head == "PATTERN_DONE") return Event::poke_complete();
    if (head == "TIMEOUT") return Event::timeout();
    if (head == "AREA_CLEARED") return Event::area_cleared();
    if (head == "SAFETY") return Event::safety();
    if (head == "RESET") return Event::reset();
    if (head == "SIGN") {
        if (arg == "YES") return Event::sign_seen(kSignYes);
        if (arg == "NO") return Event::sign_seen(kSignNo);
        if (arg == "ATTENTION") return Event::sign_seen(kSignAttentionGained);
        if (!arg.empty()) return Event::sign_seen(SignId(arg));
    }
    throw InvalidInput("unknown protocol event: " + std::string(trimmed));
}

inline std::string to_string(const Action& action) {
    return std::visit(
        [](const auto& a) -> std::string {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, FlyTo>)
                return a.target == FlyTarget::Area ? "FlyTo:area" : "FlyTo:retreat";
            else if constexpr (std::is_same_v<T, ExecutePattern>)
                return "ExecutePattern:" + flight::to_string(a.pattern);
            else if constexpr (std::is_same_v<T, SetLights>)
                return "SetLights:" + leds::to_string(a.mode);
            else if constexpr (std::is_same_v<T, StartTimer>)
                return "StartTimer:" + a.label + ":" + text::format_double(a.duration_s);
            else if constexpr (std::is_same_v<T, Hover>)
                return "Hover";
            else
                return "Abort";
        },
        action);
}

inline constexpr const char* kSessionCsvHeader = "t,state,event,actions";

// actions joined with '|' so the CSV stays comma-free and parses back.
inline std::string to_csv(const LogRecord& record) {
    std::string actions;
    for (std::size_t i = 0; i < record.actions.size(); ++i) {
        if (i > 0) actions += "|";
        actions += to_string(record.actions[i]);
    }
    if (record.ignored) actions = "Ignored";
    return std::to_string(record.t) + "," + to_string(record.state) + "," + to_string(record.event) +
           "," + actions;
}

}  // namespace signwave::proto
