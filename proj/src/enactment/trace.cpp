#include "eipsynth/enactment/trace.hpp"

#include "eipsynth/errors.hpp"

namespace eipsynth::enactment {

namespace {

EventKind kind_from_string(const std::string& s)
{
    for (auto k : {EventKind::Sent, EventKind::Forwarded, EventKind::Dropped, EventKind::Blocked,
                   EventKind::DeadLetter, EventKind::Delivered})
        if (to_string(k) == s)
            return k;
    throw ParseError("trace: unknown event kind '" + s + "'");
}

} // namespace

std::string_view to_string(EventKind kind) noexcept
{
    switch (kind) {
    case EventKind::Sent: return "sent";
    case EventKind::Forwarded: return "forwarded";
    case EventKind::Dropped: return "dropped";
    case EventKind::Blocked: return "blocked";
    case EventKind::DeadLetter: return "dead-letter";
    case EventKind::Delivered: return "delivered";
    }
    return "?";
}

std::vector<const TraceEvent*> Trace::of_kind(EventKind kind) const
{
    std::vector<const TraceEvent*> out;
    for (const auto& e : events)
        if (e.kind == kind)
            out.push_back(&e);
    return out;
}

std::string to_jsonl(const Trace& trace)
{
    std::string out = Json{{"tick", 0},
                           {"kind", "bootstrap"},
                           {"complete", trace.complete},
                           {"seed", trace.seed},
                           {"bypass", trace.bypass},
                           {"buffered", trace.buffered},
                           {"events", trace.events.size()}}
                          .dump() +
                      "\n";
    for (const auto& e : trace.events)
        out += Json{{"tick", e.tick},
                    {"kind", std::string(to_string(e.kind))},
                    {"from", e.from},
                    {"to", e.to},
                    {"via", e.via},
                    {"operation", e.operation},
                    {"qname", e.qname.str()},
                    {"payloadDigest", e.payload_digest},
                    {"correlation", e.correlation},
                    {"note", e.note}}
                   .dump() +
               "\n";
    return out;
}

Trace trace_from_jsonl(std::string_view text)
{
    Trace trace;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool header = false;
    std::uint64_t last_tick = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() : end + 1;
        ++line_no;
        if (line.empty())
            continue;
        try {
            auto j = Json::parse(line);
            if (!header) {
                if (j.at("kind").get<std::string>() != "bootstrap")
                    throw ParseError("trace: first record must be the bootstrap record", line_no, 1);
                trace.complete = j.at("complete").get<bool>();
                trace.seed = j.at("seed").get<std::uint64_t>();
                trace.bypass = j.at("bypass").get<bool>();
                trace.buffered = j.at("buffered").get<std::size_t>();
                header = true;
                continue;
            }
            TraceEvent e;
            e.tick = j.at("tick").get<std::uint64_t>();
            e.kind = kind_from_string(j.at("kind").get<std::string>());
            e.from = j.at("from").get<std::string>();
            e.to = j.at("to").get<std::string>();
            e.via = j.at("via").get<std::string>();
            e.operation = j.at("operation").get<std::string>();
            e.qname = schema::QName::parse(j.at("qname").get<std::string>());
            e.payload_digest = j.at("payloadDigest").get<std::string>();
            e.correlation = j.at("correlation").get<std::string>();
            e.note = j.at("note").get<std::string>();
            if (e.tick <= last_tick)
                throw ParseError("trace: ticks must increase", line_no, 1);
            last_tick = e.tick;
            trace.events.push_back(std::move(e));
        } catch (const Json::exception& ex) {
            throw ParseError(std::string("trace: ") + ex.what(), line_no, 1);
        }
    }
    if (!header)
        throw ParseError("trace: missing bootstrap record");
    return trace;
}

} // namespace eipsynth::enactment
