#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eipsynth/json_util.hpp"
#include "eipsynth/schema/types.hpp"

namespace eipsynth::enactment {

enum class EventKind { Sent, Forwarded, Dropped, Blocked, DeadLetter, Delivered };

std::string_view to_string(EventKind kind) noexcept;

/// `from`/`to` name roles, adapters or CDs; `via` names the component that produced the
/// event when it is neither end (an adapter or a CD), and is empty otherwise.
/// CD events use from = initiator role, to = target role, via = CD id.
struct TraceEvent {
    std::uint64_t tick = 0;
    EventKind kind = EventKind::Sent;
    std::string from;
    std::string to;
    std::string via;
    std::string operation;
    schema::QName qname;
    std::string payload_digest;
    std::string correlation;
    std::string note;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
    std::vector<TraceEvent> events;
    /// False when maxTicks ran out with work pending.
    bool complete = true;
    std::uint64_t seed = 0;
    bool bypass = false;
    /// Messages still held by adapter stages when the run stopped.
    std::size_t buffered = 0;

    std::vector<const TraceEvent*> of_kind(EventKind kind) const;
    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Line-delimited: a tick-0 bootstrap record carrying the run metadata, then one event per line.
std::string to_jsonl(const Trace& trace);
Trace trace_from_jsonl(std::string_view text);

} // namespace eipsynth::enactment
