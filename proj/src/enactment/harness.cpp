#include "eipsynth/enactment/harness.hpp"

#include <deque>
#include <random>
#include <set>

#include "eipsynth/errors.hpp"

namespace eipsynth::enactment {

using patterns::RuntimeMessage;
using schema::QName;
using synthesis::AdapterFlow;
using synthesis::AdapterSpec;
using synthesis::Attachment;

namespace {

const schema::MessageSchema* sent_by(const mapping::InterfaceSpec& iface, const std::string& operation)
{
    for (const auto* m : synthesis::sent_messages(iface))
        if (m->qname().operation == operation)
            return m;
    return nullptr;
}

const schema::MessageSchema* expected_by(const mapping::InterfaceSpec& iface, const std::string& operation)
{
    for (const auto* m : synthesis::expected_messages(iface))
        if (m->qname().operation == operation)
            return m;
    return nullptr;
}

/// Pairs each message with the identically named and shaped message of the other side.
AdapterFlow direct_flow(const mapping::InterfaceSpec& from, const mapping::InterfaceSpec& to, const std::string& link)
{
    AdapterFlow flow{from.service_name, to.service_name, {}, {}, {}};
    for (const auto* m : synthesis::sent_messages(from)) {
        const auto* peer = expected_by(to, m->qname().operation);
        if (!peer || peer->qname().message != m->qname().message || !peer->same_structure(*m))
            throw WiringError(link + ": no adapter given and " + m->qname().str() +
                              " has no identical counterpart in " + to.service_name);
        flow.inbound.push_back(synthesis::InboundBinding{m->qname().operation, m->qname()});
        flow.outbound.push_back(synthesis::OutboundBinding{m->qname(), peer->qname().operation, peer->qname(), {}});
    }
    return flow;
}

AdapterSpec direct_adapter(const Attachment& a)
{
    const auto link = a.service.iface.service_name + "/" + a.cd;
    AdapterSpec spec;
    spec.id = "Direct_" + a.service.iface.service_name + "_" + a.cd;
    spec.service = a.service.iface.service_name;
    spec.cd = a.cd;
    const bool consumer = a.service_is_consumer();
    spec.consumer = consumer ? spec.service : spec.cd;
    spec.provider = consumer ? spec.cd : spec.service;
    auto forward = direct_flow(consumer ? a.service.iface : a.cd_view, consumer ? a.cd_view : a.service.iface, link);
    auto reverse = direct_flow(consumer ? a.cd_view : a.service.iface, consumer ? a.service.iface : a.cd_view, link);
    spec.flows.push_back(std::move(forward));
    if (!reverse.inbound.empty())
        spec.flows.push_back(std::move(reverse));
    for (const auto* iface : {&a.service.iface, &a.cd_view})
        for (const auto* m : iface->messages())
            spec.schemas.emplace(m->qname(), *m);
    return spec;
}

/// Every message one side sends must enter the adapter, and every exit must land on a message
/// the other side accepts.
void check_link(const AdapterSpec& spec, const Attachment& a)
{
    const auto where = spec.id;
    try {
        spec.validate();
    } catch (const InvariantViolation& e) {
        throw WiringError(where + ": " + e.what());
    }
    auto check_side = [&](const mapping::InterfaceSpec& from, const mapping::InterfaceSpec& to) {
        auto sent = synthesis::sent_messages(from);
        if (sent.empty())
            return;
        const auto* flow = spec.flow_from(from.service_name);
        if (!flow || flow->to != to.service_name)
            throw WiringError(where + ": no flow carries messages from " + from.service_name + " to " +
                              to.service_name);
        for (const auto* m : sent) {
            bool in = std::any_of(flow->inbound.begin(), flow->inbound.end(),
                                  [&](const auto& b) { return b.qname == m->qname(); });
            if (!in)
                throw WiringError(where + ": " + m->qname().str() + " does not enter the adapter");
        }
        for (const auto& b : flow->outbound)
            if (!to.message(b.target) || expected_by(to, b.operation) == nullptr)
                throw WiringError(where + ": exit bound to " + b.target.str() + ", which " + to.service_name +
                                  " does not accept");
    };
    check_side(a.service.iface, a.cd_view);
    check_side(a.cd_view, a.service.iface);
}

void check_actions(const ServiceStub& stub, const std::vector<ScriptAction>& actions, const std::string& context)
{
    for (const auto& action : actions) {
        const auto* m = sent_by(stub.service.iface, action.operation);
        if (!m)
            throw ParseError(context + ": " + stub.service.iface.service_name + " does not send on operation '" +
                             action.operation + "'");
        try {
            patterns::validate_payload(*m, action.payload);
        } catch (const InvariantViolation& e) {
            throw ParseError(context + ": " + e.what());
        }
    }
}

struct Exhausted {};

class Runner {
public:
    explicit Runner(Harness& h) : h_(h), rng_(h.options.seed) {}

    Trace run()
    {
        Trace trace;
        trace.seed = h_.options.seed;
        trace.bypass = h_.options.bypass_enforcement;
        try {
            loop();
        } catch (const Exhausted&) {
            trace.complete = false;
        }
        trace.events = std::move(events_);
        trace.buffered = h_.buffered();
        return trace;
    }

private:
    struct Hop {
        enum class Kind { Adapter, CD, Stub } kind;
        std::size_t link = 0;
        std::size_t flow = 0;
        std::string target;
        std::string from;
        RuntimeMessage msg;
    };

    void loop()
    {
        while (true) {
            if (!queue_.empty()) {
                auto hop = std::move(queue_.front());
                queue_.pop_front();
                process(hop);
                continue;
            }
            std::vector<ServiceStub*> ready;
            for (auto& [role, stub] : h_.stubs)
                if (!stub.script_done())
                    ready.push_back(&stub);
            if (ready.empty())
                return;
            auto* stub = ready[rng_() % ready.size()];
            const auto& action = stub->script.script[stub->next_action++];
            send(*stub, action, stub->role + "#1");
        }
    }

    void record(EventKind kind, std::string from, std::string to, std::string via, const RuntimeMessage& msg,
                std::string note = {})
    {
        if (tick_ >= h_.max_ticks)
            throw Exhausted{};
        events_.push_back(TraceEvent{++tick_, kind, std::move(from), std::move(to), std::move(via),
                                     msg.qname.operation, msg.qname, patterns::payload_digest(msg.payload),
                                     msg.headers.correlation_id, std::move(note)});
    }

    std::size_t link_for(const std::string& role, const QName& qname) const
    {
        for (std::size_t i = 0; i < h_.links.size(); ++i) {
            const auto& l = h_.links[i];
            if (l.role != role)
                continue;
            if (const auto* f = l.adapter.flow_from(l.adapter.service))
                for (const auto& b : f->inbound)
                    if (b.qname == qname)
                        return i;
        }
        throw WiringError(role + ": " + qname.str() + " reaches no coordination delegate");
    }

    std::size_t flow_index(const Link& l, const std::string& from) const
    {
        for (std::size_t i = 0; i < l.adapter.flows.size(); ++i)
            if (l.adapter.flows[i].from == from)
                return i;
        throw WiringError(l.adapter.id + ": no flow from " + from);
    }

    void send(ServiceStub& stub, const ScriptAction& action, const std::string& correlation)
    {
        const auto* m = sent_by(stub.service.iface, action.operation);
        RuntimeMessage msg{m->qname(), action.payload, patterns::Headers{correlation, std::nullopt, stub.role, tick_ + 1}};
        auto li = link_for(stub.role, msg.qname);
        const auto& link = h_.links[li];
        record(EventKind::Sent, stub.role, link.cd, {}, msg);
        queue_.push_back(Hop{Hop::Kind::Adapter, li, flow_index(link, link.adapter.service), {}, stub.role, std::move(msg)});
    }

    void process(Hop& hop)
    {
        switch (hop.kind) {
        case Hop::Kind::Adapter: through_adapter(hop); break;
        case Hop::Kind::CD: through_cd(hop); break;
        case Hop::Kind::Stub: deliver(hop); break;
        }
    }

    void through_adapter(Hop& hop)
    {
        auto& link = h_.links[hop.link];
        const auto& flow = link.adapter.flows[hop.flow];
        auto& state = link.states[hop.flow];
        const bool outbound_to_cd = flow.from == link.adapter.service;
        const auto origin = outbound_to_cd ? link.role : link.cd;
        const auto destination = outbound_to_cd ? link.cd : link.role;

        auto seen = state.diversions.size();
        auto outs = patterns::step_chain(flow.chain, state, hop.msg);
        for (; seen < state.diversions.size(); ++seen) {
            const auto& d = state.diversions[seen];
            record(d.kind == patterns::Diversion::Kind::Dropped ? EventKind::Dropped : EventKind::DeadLetter, origin,
                   destination, link.adapter.id, d.message, d.reason);
        }

        for (auto& out : outs) {
            const auto* b = flow.binding_for(out.qname);
            if (!b) {
                record(EventKind::DeadLetter, origin, destination, link.adapter.id, out, "no binding for this exit");
                continue;
            }
            RuntimeMessage next{b->target, out.payload, out.headers};
            if (!b->path_map.empty()) {
                try {
                    next.payload = patterns::apply_path_map(b->path_map, out.payload, Json::object(), out.qname);
                } catch (const RoutingError& e) {
                    record(EventKind::DeadLetter, origin, destination, link.adapter.id, out, e.what());
                    continue;
                }
            }
            if (outbound_to_cd) {
                if (!link.direct)
                    record(EventKind::Forwarded, origin, destination, link.adapter.id, next);
                queue_.push_back(Hop{Hop::Kind::CD, 0, 0, link.cd, origin, std::move(next)});
            } else {
                queue_.push_back(Hop{Hop::Kind::Stub, 0, 0, link.role,
                                     link.direct ? link.cd : link.adapter.id, std::move(next)});
            }
        }
    }

    void through_cd(Hop& hop)
    {
        auto& cd = h_.cds.at(hop.target);
        const auto* route = cd.spec.route(hop.msg.qname.operation);
        if (!route) {
            record(EventKind::DeadLetter, hop.from, cd.spec.id, cd.spec.id, hop.msg, "no route for this operation");
            return;
        }
        synthesis::Label label{route->operation, synthesis::Polarity::Receive, hop.msg.qname};
        auto next = cd.spec.enforcement.step(cd.state, label);
        std::string note;
        if (!next) {
            if (!h_.options.bypass_enforcement) {
                record(EventKind::Blocked, route->initiator, route->target, cd.spec.id, hop.msg,
                       "not enabled in state " + cd.state);
                return;
            }
            note = "enforcement bypassed in state " + cd.state;
        } else {
            cd.state = *next;
        }
        record(EventKind::Forwarded, route->initiator, route->target, cd.spec.id, hop.msg, note);

        for (std::size_t i = 0; i < h_.links.size(); ++i) {
            const auto& l = h_.links[i];
            if (l.role == route->target && l.cd == cd.spec.id) {
                queue_.push_back(Hop{Hop::Kind::Adapter, i, flow_index(l, cd.spec.id), {}, cd.spec.id, hop.msg});
                return;
            }
        }
        throw WiringError(cd.spec.id + ": role " + route->target + " has no link");
    }

    void deliver(Hop& hop)
    {
        auto& stub = h_.stubs.at(hop.target);
        record(EventKind::Delivered, hop.from, stub.role, {}, hop.msg);
        stub.inbox.push_back(hop.msg);
        for (const auto& r : stub.script.reactions)
            if (r.on == hop.msg.qname.operation)
                for (const auto& action : r.send)
                    send(stub, action, hop.msg.headers.correlation_id);
    }

    Harness& h_;
    std::mt19937_64 rng_;
    std::deque<Hop> queue_;
    std::vector<TraceEvent> events_;
    std::uint64_t tick_ = 0;
};

} // namespace

std::size_t Harness::adapter_count() const
{
    return static_cast<std::size_t>(std::count_if(links.begin(), links.end(), [](const Link& l) { return !l.direct; }));
}

std::size_t Harness::buffered() const
{
    std::size_t n = 0;
    for (const auto& l : links)
        for (const auto& s : l.states)
            for (const auto& stage : s.stages)
                n += stage.buffered();
    return n;
}

Harness build_harness(const synthesis::ChoreographySpec& choreo,
                      const std::map<std::string, synthesis::ServiceDescription>& bindings,
                      const std::vector<synthesis::CDSpec>& cds, const std::vector<AdapterSpec>& adapters,
                      const Scenario& scenario, HarnessOptions options)
{
    Harness h;
    h.choreography = choreo;
    h.options = options;
    h.max_ticks = scenario.max_ticks;

    for (const auto& role : choreo.roles)
        if (!bindings.count(role))
            throw WiringError("role " + role + " is not bound to a service");
    for (const auto& [role, service] : bindings)
        if (!choreo.has_role(role))
            throw WiringError("binding for unknown role " + role);
    for (const auto& [role, service] : bindings)
        h.stubs.emplace(role, ServiceStub{role, service, {}, 0, {}});

    for (const auto& cd : cds) {
        if (!choreo.has_role(cd.roles.first) || !choreo.has_role(cd.roles.second))
            throw WiringError(cd.id + " serves a role the choreography does not have");
        if (!h.cds.emplace(cd.id, CDRuntime{cd, cd.enforcement.initial}).second)
            throw WiringError("duplicate coordination delegate " + cd.id);
    }

    auto atts = synthesis::attachments(choreo, cds, bindings);
    std::set<std::size_t> used;
    for (const auto& a : atts) {
        const AdapterSpec* found = nullptr;
        for (std::size_t i = 0; i < adapters.size(); ++i) {
            if (adapters[i].service != a.service.iface.service_name || adapters[i].cd != a.cd)
                continue;
            if (found)
                throw WiringError("two adapters link " + a.service.iface.service_name + " to " + a.cd);
            found = &adapters[i];
            used.insert(i);
        }
        Link link{a.role, a.cd, found ? *found : direct_adapter(a), found == nullptr, {}};
        check_link(link.adapter, a);
        link.states.resize(link.adapter.flows.size());
        h.links.push_back(std::move(link));
    }
    for (std::size_t i = 0; i < adapters.size(); ++i)
        if (!used.count(i))
            throw WiringError(adapters[i].id + " links " + adapters[i].service + " to " + adapters[i].cd +
                              ", which no bound role uses");

    for (const auto& [role, script] : scenario.stubs) {
        auto it = h.stubs.find(role);
        if (it == h.stubs.end())
            throw WiringError("scenario scripts unknown role " + role);
        auto& stub = it->second;
        stub.script = script;
        check_actions(stub, script.script, "scenario." + role);
        for (const auto& r : script.reactions) {
            if (!expected_by(stub.service.iface, r.on))
                throw ParseError("scenario." + role + ": reaction on '" + r.on + "', which " +
                                 stub.service.iface.service_name + " never receives");
            check_actions(stub, r.send, "scenario." + role + ".reactions");
        }
    }
    return h;
}

Trace enact(Harness& harness)
{
    return Runner(harness).run();
}

} // namespace eipsynth::enactment
