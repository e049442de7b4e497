#include "eipsynth/synthesis/protocol.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "eipsynth/errors.hpp"

namespace eipsynth::synthesis {

using mapping::Direction;
using mapping::InterfaceSpec;
using schema::QName;

std::string_view to_string(Polarity p) noexcept
{
    return p == Polarity::Send ? "send" : "receive";
}

std::string Label::str() const
{
    return (polarity == Polarity::Send ? "!" : "?") + operation + "(" + message.str() + ")";
}

void ProtocolSpec::validate() const
{
    std::set<std::string> known(states.begin(), states.end());
    if (known.size() != states.size())
        throw InvariantViolation("protocol: duplicate state");
    if (!known.count(initial))
        throw InvariantViolation("protocol: unknown initial state '" + initial + "'");
    for (const auto& f : finals)
        if (!known.count(f))
            throw InvariantViolation("protocol: unknown final state '" + f + "'");
    std::set<std::pair<std::string, Label>> seen;
    for (const auto& t : transitions) {
        if (!known.count(t.from) || !known.count(t.to))
            throw InvariantViolation("protocol: transition " + t.from + " -> " + t.to + " uses an unknown state");
        if (!seen.emplace(t.from, t.label).second)
            throw InvariantViolation("protocol: nondeterministic on " + t.label.str() + " in state " + t.from);
    }
    auto reach = reachable();
    if (reach.size() != states.size())
        for (const auto& s : states)
            if (std::find(reach.begin(), reach.end(), s) == reach.end())
                throw InvariantViolation("protocol: state '" + s + "' is unreachable");
}

std::optional<std::string> ProtocolSpec::step(const std::string& state, const Label& label) const
{
    for (const auto& t : transitions)
        if (t.from == state && t.label == label)
            return t.to;
    return std::nullopt;
}

std::vector<Label> ProtocolSpec::enabled(const std::string& state) const
{
    std::vector<Label> out;
    for (const auto& t : transitions)
        if (t.from == state)
            out.push_back(t.label);
    std::sort(out.begin(), out.end());
    return out;
}

bool ProtocolSpec::is_final(const std::string& state) const
{
    return std::find(finals.begin(), finals.end(), state) != finals.end();
}

std::vector<std::string> ProtocolSpec::reachable() const
{
    std::vector<std::string> order{initial};
    std::set<std::string> seen{initial};
    for (std::size_t i = 0; i < order.size(); ++i)
        for (const auto& t : transitions)
            if (t.from == order[i] && seen.insert(t.to).second)
                order.push_back(t.to);
    return order;
}

bool ProtocolSpec::accepts(const std::vector<Label>& word) const
{
    auto state = initial;
    for (const auto& l : word) {
        auto next = step(state, l);
        if (!next)
            return false;
        state = *next;
    }
    return is_final(state);
}

bool ProtocolSpec::admits(const std::vector<Label>& word) const
{
    for (const auto& start : reachable()) {
        std::optional<std::string> state = start;
        for (const auto& l : word) {
            state = step(*state, l);
            if (!state)
                break;
        }
        if (state)
            return true;
    }
    return false;
}

std::set<std::string> ProtocolSpec::reach_avoiding(std::set<std::string> from, const std::set<Label>& avoid) const
{
    std::vector<std::string> frontier(from.begin(), from.end());
    while (!frontier.empty()) {
        auto state = frontier.back();
        frontier.pop_back();
        for (const auto& t : transitions)
            if (t.from == state && !avoid.count(t.label) && from.insert(t.to).second)
                frontier.push_back(t.to);
    }
    return from;
}

std::set<std::string> ProtocolSpec::run_from(const std::set<std::string>& starts, const std::vector<Label>& word) const
{
    std::set<std::string> ends;
    for (const auto& start : starts) {
        std::optional<std::string> state = start;
        for (const auto& l : word)
            if (!(state = step(*state, l)))
                break;
        if (state)
            ends.insert(*state);
    }
    return ends;
}

Label label_for(const InterfaceSpec& iface, const QName& qname)
{
    for (const auto& op : iface.operations) {
        bool provided = op.direction == Direction::Provided;
        if (op.input.qname() == qname)
            return Label{op.name, provided ? Polarity::Receive : Polarity::Send, qname};
        if (op.output && op.output->qname() == qname)
            return Label{op.name, provided ? Polarity::Send : Polarity::Receive, qname};
    }
    throw InvariantViolation(iface.service_name + " has no message " + qname.str());
}

ProtocolSpec permissive_protocol(const InterfaceSpec& iface)
{
    ProtocolSpec p{{"s0"}, "s0", {"s0"}, {}};
    for (const auto* m : iface.messages())
        p.transitions.push_back(Transition{"s0", label_for(iface, m->qname()), "s0"});
    return p;
}

Json to_json(const ProtocolSpec& protocol)
{
    Json transitions = Json::array();
    for (const auto& t : protocol.transitions)
        transitions.push_back(Json{{"from", t.from},
                                   {"to", t.to},
                                   {"operation", t.label.operation},
                                   {"polarity", std::string(to_string(t.label.polarity))},
                                   {"message", t.label.message.str()}});
    return Json{{"states", protocol.states},
                {"initial", protocol.initial},
                {"finals", protocol.finals},
                {"transitions", transitions}};
}

ProtocolSpec protocol_from_json(const Json& value)
{
    try {
        ProtocolSpec p;
        p.states = value.at("states").get<std::vector<std::string>>();
        p.initial = value.at("initial").get<std::string>();
        p.finals = value.at("finals").get<std::vector<std::string>>();
        for (const auto& t : value.at("transitions")) {
            auto polarity = t.at("polarity").get<std::string>();
            if (polarity != "send" && polarity != "receive")
                throw ParseError("protocol: polarity must be send|receive");
            p.transitions.push_back(Transition{
                t.at("from").get<std::string>(),
                Label{t.at("operation").get<std::string>(), polarity == "send" ? Polarity::Send : Polarity::Receive,
                      QName::parse(t.at("message").get<std::string>())},
                t.at("to").get<std::string>()});
        }
        p.validate();
        return p;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("protocol: ") + e.what());
    }
}

ServiceDescription service_from_json(const OrderedJson& doc, const std::filesystem::path& base_dir)
{
    ServiceDescription out{mapping::interface_from_json(doc, base_dir), {}};
    const auto& iface = out.iface;
    if (!doc.contains("protocol")) {
        out.protocol = permissive_protocol(iface);
        return out;
    }
    const auto context = iface.service_name + ".protocol";
    const auto& spec = doc.at("protocol");
    ProtocolSpec& p = out.protocol;
    p.initial = require_string(spec, "initial", context);
    const auto& finals = require_member(spec, "finals", context);
    if (!finals.is_array())
        throw ParseError(context + ": 'finals' must be an array");
    for (const auto& f : finals) {
        if (!f.is_string())
            throw ParseError(context + ": final states must be strings");
        p.finals.push_back(f.get<std::string>());
    }
    std::vector<std::string> states{p.initial};
    auto note = [&](const std::string& s) {
        if (std::find(states.begin(), states.end(), s) == states.end())
            states.push_back(s);
    };
    const auto& transitions = require_member(spec, "transitions", context);
    if (!transitions.is_array())
        throw ParseError(context + ": 'transitions' must be an array");
    for (const auto& t : transitions) {
        auto from = require_string(t, "from", context);
        auto to = require_string(t, "to", context);
        auto op_name = require_string(t, "operation", context);
        auto polarity = require_string(t, "polarity", context);
        const auto* op = iface.find(op_name);
        if (!op)
            throw ParseError(context + ": unknown operation '" + op_name + "'");
        if (polarity != "send" && polarity != "receive")
            throw ParseError(context + ": polarity must be send|receive");
        bool provided = op->direction == Direction::Provided;
        bool on_input = provided == (polarity == "receive");
        if (!on_input && !op->output)
            throw ParseError(context + ": operation '" + op_name + "' has no output to " + polarity);
        const auto& message = on_input ? op->input : *op->output;
        p.transitions.push_back(
            Transition{from, Label{op_name, polarity == "send" ? Polarity::Send : Polarity::Receive, message.qname()}, to});
        note(from);
        note(to);
    }
    for (const auto& f : p.finals)
        note(f);
    p.states = std::move(states);
    p.validate();
    return out;
}

ServiceDescription load_service(const std::filesystem::path& path)
{
    auto doc = parse_json_strict(read_file(path), path.string());
    return service_from_json(doc, path.parent_path());
}

} // namespace eipsynth::synthesis
