#include "eipsynth/synthesis/adapter.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "eipsynth/errors.hpp"
#include "eipsynth/schema/formats.hpp"

namespace eipsynth::synthesis {

using mapping::DataMapping;
using mapping::Direction;
using mapping::InterfaceSpec;
using mapping::MappingReport;
using mapping::MappingStatus;
using patterns::Aggregator;
using patterns::MessageFilter;
using patterns::PathMap;
using patterns::Resequencer;
using patterns::SplitPart;
using patterns::Splitter;
using schema::FieldPath;
using schema::MessageSchema;
using schema::QName;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const DataMapping* relation(const MappingReport& report, const QName& sub, const QName& sup)
{
    const auto* m = report.find(sub, sup);
    return m && m->status != MappingStatus::Rejected ? m : nullptr;
}

bool identical(const MappingReport& report, const QName& a, const QName& b)
{
    return std::any_of(report.identical.begin(), report.identical.end(), [&](const mapping::IdenticalPair& p) {
        return (p.service_message == a && p.counterpart_message == b) ||
               (p.service_message == b && p.counterpart_message == a);
    });
}

PathMap forward_map(const DataMapping& m)
{
    PathMap out;
    for (const auto& c : m.correspondences)
        out.emplace_back(c.source, c.target);
    return out;
}

PathMap reverse_map(const DataMapping& m)
{
    PathMap out;
    for (const auto& c : m.correspondences)
        out.emplace_back(c.target, c.source);
    return out;
}

std::string leaf_ref(const MessageSchema& m, const FieldPath& path)
{
    return m.qname().str() + "#" + path.str();
}

std::size_t leaf_index(const MessageSchema& m, const FieldPath& path)
{
    const auto& leaves = m.leaves();
    for (std::size_t i = 0; i < leaves.size(); ++i)
        if (leaves[i].path == path)
            return i;
    return leaves.size();
}

std::string join(const std::vector<QName>& qnames, const std::string& sep)
{
    std::string out;
    for (const auto& q : qnames)
        out += (out.empty() ? "" : sep) + q.str();
    return out;
}

class FlowBuilder {
public:
    FlowBuilder(const MappingReport& report, const InterfaceSpec& from, const InterfaceSpec& to,
                const ProtocolSpec& from_protocol, const ProtocolSpec& to_protocol)
        : report_(report), from_(from), to_(to), from_protocol_(from_protocol), to_protocol_(to_protocol),
          contract_source_(from.service_name == report.counterpart),
          contract_target_(to.service_name == report.counterpart)
    {
    }

    AdapterFlow build()
    {
        AdapterFlow flow{from_.service_name, to_.service_name, {}, {}, {}};
        auto src = sent_messages(from_);
        for (const auto* m : src)
            flow.inbound.push_back(InboundBinding{m->qname().operation, m->qname()});

        for (const auto* p : expected_messages(to_))
            cover(src, *p);

        std::vector<Splitter> splitters;
        for (const auto* m : src) {
            auto it = splits_.find(m->qname());
            if (it == splits_.end())
                continue;
            auto parts = std::move(it->second);
            auto first_source = [&](const SplitPart& part) {
                std::size_t best = m->leaves().size();
                for (const auto& [s, t] : part.path_map)
                    best = std::min(best, leaf_index(*m, s));
                return best;
            };
            std::stable_sort(parts.begin(), parts.end(), [&](const SplitPart& a, const SplitPart& b) {
                return first_source(a) < first_source(b);
            });
            if (contract_source_) {
                std::set<FieldPath> consumed;
                for (const auto& part : parts)
                    for (const auto& [s, t] : part.path_map)
                        consumed.insert(s);
                for (const auto& leaf : m->leaves())
                    if (!consumed.count(leaf.path))
                        throw UnsatisfiableAdaptation(leaf_ref(*m, leaf.path),
                                                      "no message of " + to_.service_name + " receives it");
            }
            if (parts.size() == 1)
                direct_.push_back(OutboundBinding{m->qname(), parts[0].target.operation, parts[0].target,
                                                  parts[0].path_map});
            else
                splitters.push_back(Splitter{m->qname(), std::move(parts)});
        }

        MessageFilter filter;
        for (const auto* m : src) {
            if (used_.count(m->qname()))
                continue;
            if (contract_source_)
                throw UnsatisfiableAdaptation(leaf_ref(*m, m->leaves().front().path),
                                              "no message of " + to_.service_name + " accepts it");
            filter.drop_set.push_back(m->qname());
        }

        if (!filter.drop_set.empty())
            flow.chain.emplace_back(filter);
        order_aggregators();
        for (const auto& a : aggregators_)
            flow.chain.emplace_back(a);
        for (const auto& s : splitters)
            flow.chain.emplace_back(s);

        std::vector<std::vector<QName>> units;
        for (const auto& s : splitters) {
            units.emplace_back();
            for (const auto& part : s.parts)
                units.back().push_back(part.target);
        }
        if (aggregators_.size() >= 2) {
            units.emplace_back();
            for (const auto& a : aggregators_)
                units.back().push_back(a.target);
        }
        // Units are checked from rest states: those the receiver reaches without any
        // resequenced message, extended by each unit once its order is fixed.
        std::set<Label> avoid;
        for (const auto& u : units)
            for (const auto& q : u)
                avoid.insert(label_for(to_, q));
        auto rest = to_protocol_.reach_avoiding({to_protocol_.initial}, avoid);
        for (const auto& u : units)
            if (auto r = resequence(u, rest))
                flow.chain.emplace_back(*r);
        for (const auto& a : aggregators_)
            flow.outbound.push_back(OutboundBinding{a.target, a.target.operation, a.target, {}});
        for (const auto& s : splitters)
            for (const auto& part : s.parts)
                flow.outbound.push_back(OutboundBinding{part.target, part.target.operation, part.target, {}});
        for (auto& b : direct_)
            flow.outbound.push_back(std::move(b));
        return flow;
    }

private:
    enum class Use { Direct, Split, Aggregate };

    bool available(const QName& m, Use use) const
    {
        auto it = used_.find(m);
        return it == used_.end() || (use == Use::Split && it->second == Use::Split);
    }

    void cover(const std::vector<const MessageSchema*>& src, const MessageSchema& p)
    {
        const auto& pq = p.qname();
        for (const auto* m : src)
            if (identical(report_, m->qname(), pq) && available(m->qname(), Use::Direct)) {
                direct_.push_back(OutboundBinding{m->qname(), pq.operation, pq, {}});
                used_[m->qname()] = Use::Direct;
                return;
            }
        for (const auto* m : src) {
            const auto* down = relation(report_, m->qname(), pq);
            if (down && relation(report_, pq, m->qname()) && available(m->qname(), Use::Direct)) {
                direct_.push_back(OutboundBinding{m->qname(), pq.operation, pq, forward_map(*down)});
                used_[m->qname()] = Use::Direct;
                return;
            }
        }

        const DataMapping* split_from = nullptr;
        for (const auto* m : src) {
            const auto* up = relation(report_, pq, m->qname());
            if (up && available(m->qname(), Use::Split) &&
                (!split_from || total(*up) > total(*split_from)))
                split_from = up;
        }
        if (split_from) {
            splits_[split_from->sup].push_back(SplitPart{pq, reverse_map(*split_from)});
            used_[split_from->sup] = Use::Split;
            return;
        }

        std::vector<const DataMapping*> subs;
        std::set<FieldPath> covered;
        for (const auto* m : src)
            if (const auto* down = relation(report_, m->qname(), pq); down && available(m->qname(), Use::Aggregate)) {
                subs.push_back(down);
                for (const auto& c : down->correspondences)
                    covered.insert(c.target);
            }
        for (const auto& leaf : p.leaves()) {
            if (covered.count(leaf.path))
                continue;
            if (!subs.empty()) {
                std::vector<QName> names;
                for (const auto* d : subs)
                    names.push_back(d->sub);
                throw UnsatisfiableAdaptation(leaf_ref(p, leaf.path), "only partly covered by " + join(names, ", "));
            }
            if (contract_target_)
                throw UnsatisfiableAdaptation(leaf_ref(p, leaf.path),
                                              "no message of " + from_.service_name + " carries it");
            return; // a capability of the receiver that this flow never needs
        }
        if (subs.size() == 1) {
            direct_.push_back(OutboundBinding{subs[0]->sub, pq.operation, pq, forward_map(*subs[0])});
            used_[subs[0]->sub] = Use::Direct;
            return;
        }
        Aggregator a;
        a.target = pq;
        for (const auto* d : subs) {
            a.expected.push_back(d->sub);
            a.merge_map.emplace(d->sub, forward_map(*d));
            used_[d->sub] = Use::Aggregate;
        }
        aggregators_.push_back(std::move(a));
    }

    static int total(const DataMapping& m)
    {
        int t = 0;
        for (const auto& c : m.correspondences)
            t += c.score.tenths;
        return t;
    }

    /// Aggregated messages leave in the order the sender's protocol completes them.
    void order_aggregators()
    {
        std::map<QName, std::size_t> rank;
        std::vector<std::string> frontier{from_protocol_.initial};
        std::set<std::string> seen{from_protocol_.initial};
        for (std::size_t i = 0; i < frontier.size(); ++i)
            for (const auto& t : from_protocol_.transitions)
                if (t.from == frontier[i]) {
                    if (t.label.polarity == Polarity::Send)
                        rank.emplace(t.label.message, rank.size());
                    if (seen.insert(t.to).second)
                        frontier.push_back(t.to);
                }
        auto completion = [&](const Aggregator& a) {
            std::size_t last = 0;
            for (const auto& q : a.expected) {
                auto it = rank.find(q);
                last = std::max(last, it == rank.end() ? rank.size() : it->second);
            }
            return last;
        };
        std::stable_sort(aggregators_.begin(), aggregators_.end(), [&](const Aggregator& x, const Aggregator& y) {
            return completion(x) < completion(y);
        });
    }

    /// Resequencer needed when the receiver's protocol does not admit the production order
    /// from a rest state. Adds the states the chosen order ends in to `rest`.
    std::optional<Resequencer> resequence(const std::vector<QName>& produced, std::set<std::string>& rest) const
    {
        auto labels = [&](const std::vector<std::size_t>& perm) {
            std::vector<Label> word;
            for (auto i : perm)
                word.push_back(label_for(to_, produced[i]));
            return word;
        };
        std::set<Label> avoid;
        for (const auto& q : produced)
            avoid.insert(label_for(to_, q));
        std::vector<std::size_t> perm(produced.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            auto ends = to_protocol_.run_from(rest, labels(perm));
            if (ends.empty())
                continue;
            auto more = to_protocol_.reach_avoiding(ends, avoid);
            rest.insert(more.begin(), more.end());
            if (std::is_sorted(perm.begin(), perm.end()))
                return std::nullopt;
            Resequencer r;
            for (auto i : perm)
                r.order.push_back(produced[i]);
            return r;
        } while (std::next_permutation(perm.begin(), perm.end()));
        throw UnsatisfiableAdaptation(produced.front().str(), "the protocol of " + to_.service_name +
                                                                  " accepts no order of " + join(produced, ", "));
    }

    const MappingReport& report_;
    const InterfaceSpec& from_;
    const InterfaceSpec& to_;
    const ProtocolSpec& from_protocol_;
    const ProtocolSpec& to_protocol_;
    bool contract_source_;
    bool contract_target_;

    std::map<QName, Use> used_;
    std::vector<OutboundBinding> direct_;
    std::map<QName, std::vector<SplitPart>> splits_;
    std::vector<Aggregator> aggregators_;
};

/// Checks that `map` writes every leaf of `target` exactly once from kind-equal leaves of the sources.
void check_cover(const std::map<QName, MessageSchema>& schemas, const std::vector<std::pair<QName, PathMap>>& maps,
                 const QName& target, const std::string& what)
{
    auto fail = [&](const std::string& why) { throw InvariantViolation(what + ": " + why); };
    auto t = schemas.find(target);
    if (t == schemas.end())
        fail("no schema for " + target.str());
    std::set<FieldPath> written;
    for (const auto& [source, map] : maps) {
        auto s = schemas.find(source);
        if (s == schemas.end())
            fail("no schema for " + source.str());
        for (const auto& [from, to] : map) {
            auto from_kind = s->second.kind_at(from);
            auto to_kind = t->second.kind_at(to);
            if (!from_kind)
                fail(source.str() + " has no leaf " + from.str());
            if (!to_kind)
                fail(target.str() + " has no leaf " + to.str());
            if (from_kind != to_kind)
                fail(from.str() + " and " + to.str() + " differ in kind");
            if (!written.insert(to).second)
                fail(to.str() + " is written twice");
        }
    }
    for (const auto& leaf : t->second.leaves())
        if (!written.count(leaf.path))
            fail(target.str() + "#" + leaf.path.str() + " is never written");
}

Json path_map_json(const PathMap& map)
{
    Json out = Json::array();
    for (const auto& [s, t] : map)
        out.push_back(Json::array({s.str(), t.str()}));
    return out;
}

} // namespace

const OutboundBinding* AdapterFlow::binding_for(const QName& exit) const
{
    for (const auto& b : outbound)
        if (b.exit == exit)
            return &b;
    return nullptr;
}

bool AdapterSpec::is_passthrough() const
{
    for (const auto& f : flows) {
        if (!f.chain.empty())
            return false;
        for (const auto& b : f.outbound)
            if (!b.path_map.empty() || b.exit.operation != b.target.operation || b.exit.message != b.target.message)
                return false;
    }
    return true;
}

const AdapterFlow* AdapterSpec::flow_from(const std::string& side) const
{
    for (const auto& f : flows)
        if (f.from == side)
            return &f;
    return nullptr;
}

void AdapterSpec::validate() const
{
    for (const auto& flow : flows) {
        const auto where = id + " (" + flow.from + " -> " + flow.to + ")";
        std::set<QName> entry;
        for (const auto& in : flow.inbound) {
            if (!schemas.count(in.qname))
                throw InvariantViolation(where + ": no schema for inbound " + in.qname.str());
            entry.insert(in.qname);
        }
        std::set<QName> exits;
        try {
            exits = patterns::chain_flow(flow.chain, entry);
        } catch (const ConfigurationError& e) {
            throw InvariantViolation(where + ": " + e.what());
        }
        for (const auto& stage : flow.chain)
            std::visit(overloaded{
                           [&](const Splitter& s) {
                               for (const auto& part : s.parts)
                                   check_cover(schemas, {{s.source, part.path_map}}, part.target,
                                               where + " Splitter part " + part.target.str());
                           },
                           [&](const Aggregator& a) {
                               std::vector<std::pair<QName, PathMap>> maps(a.merge_map.begin(), a.merge_map.end());
                               check_cover(schemas, maps, a.target, where + " Aggregator " + a.target.str());
                           },
                           [](const auto&) {},
                       },
                       stage);
        for (const auto& q : exits) {
            auto n = std::count_if(flow.outbound.begin(), flow.outbound.end(),
                                   [&](const OutboundBinding& b) { return b.exit == q; });
            if (n != 1)
                throw InvariantViolation(where + ": exit " + q.str() + " is bound " + std::to_string(n) + " times");
        }
        for (const auto& b : flow.outbound) {
            if (!exits.count(b.exit))
                throw InvariantViolation(where + ": binding for " + b.exit.str() + ", which never leaves the chain");
            if (b.target.operation != b.operation)
                throw InvariantViolation(where + ": binding target " + b.target.str() + " is not a message of " +
                                         b.operation);
            if (b.path_map.empty()) {
                auto s = schemas.find(b.exit);
                auto t = schemas.find(b.target);
                if (s == schemas.end() || t == schemas.end() || !s->second.same_structure(t->second))
                    throw InvariantViolation(where + ": " + b.exit.str() + " cannot pass unchanged to " +
                                             b.target.str());
            } else {
                check_cover(schemas, {{b.exit, b.path_map}}, b.target, where + " binding " + b.target.str());
            }
        }
    }
}

std::vector<const MessageSchema*> sent_messages(const InterfaceSpec& iface)
{
    std::vector<const MessageSchema*> out;
    for (const auto& op : iface.operations) {
        if (op.direction == Direction::Required)
            out.push_back(&op.input);
        else if (op.output)
            out.push_back(&*op.output);
    }
    return out;
}

std::vector<const MessageSchema*> expected_messages(const InterfaceSpec& iface)
{
    std::vector<const MessageSchema*> out;
    for (const auto& op : iface.operations) {
        if (op.direction == Direction::Provided)
            out.push_back(&op.input);
        else if (op.output)
            out.push_back(&*op.output);
    }
    return out;
}

AdapterSpec select_patterns(const MappingReport& report, const InterfaceSpec& consumer, const InterfaceSpec& provider,
                            const ProtocolSpec& consumer_protocol, const ProtocolSpec& provider_protocol)
{
    auto side_ok = [&](const std::string& s) { return s == report.service || s == report.counterpart; };
    if (!side_ok(consumer.service_name) || !side_ok(provider.service_name) ||
        consumer.service_name == provider.service_name)
        throw InvariantViolation("report " + report.service + "/" + report.counterpart + " does not pair " +
                                 consumer.service_name + " with " + provider.service_name);

    std::vector<std::string> unresolved;
    for (const auto& m : report.mappings)
        if (m.status == MappingStatus::Ambiguous)
            unresolved.push_back(m.sub.str() + " <= " + m.sup.str());
    if (!unresolved.empty()) {
        std::string list;
        for (const auto& u : unresolved)
            list += "\n  " + u;
        throw AmbiguityError("ambiguous mappings; confirm the intended correspondences with hints:" + list);
    }

    AdapterSpec spec;
    spec.service = report.service;
    spec.cd = report.counterpart;
    spec.id = "Adapter_" + spec.service + "_" + spec.cd;
    spec.consumer = consumer.service_name;
    spec.provider = provider.service_name;
    spec.flows.push_back(FlowBuilder(report, consumer, provider, consumer_protocol, provider_protocol).build());
    if (!sent_messages(provider).empty())
        spec.flows.push_back(FlowBuilder(report, provider, consumer, provider_protocol, consumer_protocol).build());
    for (const auto* iface : {&consumer, &provider})
        for (const auto* m : iface->messages())
            spec.schemas.emplace(m->qname(), *m);
    spec.validate();
    return spec;
}

AdapterSpec select_patterns(const MappingReport& report, const Attachment& attachment)
{
    if (attachment.service_is_consumer())
        return select_patterns(report, attachment.service.iface, attachment.cd_view, attachment.service.protocol,
                               attachment.cd_protocol);
    return select_patterns(report, attachment.cd_view, attachment.service.iface, attachment.cd_protocol,
                           attachment.service.protocol);
}

EmittedAdapter emit_adapter(const AdapterSpec& spec)
{
    spec.validate();
    std::string report;
    auto line = [&](const std::string& text) { report += text + "\n"; };
    auto entries = [&](const QName& from, const PathMap& map, const QName& to) {
        for (const auto& [s, t] : map)
            line("  " + from.str() + "#" + s.str() + " -> " + to.str() + "#" + t.str());
    };
    for (const auto& flow : spec.flows) {
        for (const auto& stage : flow.chain)
            std::visit(overloaded{
                           [&](const MessageFilter& f) {
                               line("MessageFilter drops " + join(f.drop_set, ", ") + " (no data mapping)");
                           },
                           [&](const Aggregator& a) {
                               line("Aggregator merges " + join(a.expected, " + ") + " -> " + a.target.str());
                               for (const auto& q : a.expected)
                                   entries(q, a.merge_map.at(q), a.target);
                           },
                           [&](const Splitter& s) {
                               std::vector<QName> targets;
                               for (const auto& p : s.parts)
                                   targets.push_back(p.target);
                               line("Splitter splits " + s.source.str() + " -> " + join(targets, ", "));
                               for (const auto& p : s.parts)
                                   entries(s.source, p.path_map, p.target);
                           },
                           [&](const Resequencer& r) { line("Resequencer releases " + join(r.order, ", ")); },
                       },
                       stage);
        for (const auto& b : flow.outbound)
            entries(b.exit, b.path_map, b.target);
    }
    return EmittedAdapter{canonical_dump(to_json(spec)), report};
}

Json to_json(const AdapterSpec& spec)
{
    Json flows = Json::array();
    for (const auto& f : spec.flows) {
        Json chain = Json::array();
        for (const auto& stage : f.chain)
            chain.push_back(patterns::to_json(stage));
        Json inbound = Json::array();
        for (const auto& b : f.inbound)
            inbound.push_back(Json{{"operation", b.operation}, {"qname", b.qname.str()}});
        Json outbound = Json::array();
        for (const auto& b : f.outbound)
            outbound.push_back(Json{{"exit", b.exit.str()},
                                    {"operation", b.operation},
                                    {"target", b.target.str()},
                                    {"pathMap", path_map_json(b.path_map)}});
        flows.push_back(Json{{"from", f.from}, {"to", f.to}, {"chain", chain}, {"inbound", inbound}, {"outbound", outbound}});
    }
    Json schemas = Json::array();
    for (const auto& [q, s] : spec.schemas)
        schemas.push_back(schema::to_compact(s));
    return Json{{"id", spec.id},         {"consumer", spec.consumer}, {"provider", spec.provider},
                {"service", spec.service}, {"cd", spec.cd},           {"flows", flows},
                {"schemas", schemas}};
}

AdapterSpec adapter_from_json(const Json& value)
{
    try {
        AdapterSpec spec;
        spec.id = value.at("id").get<std::string>();
        spec.consumer = value.at("consumer").get<std::string>();
        spec.provider = value.at("provider").get<std::string>();
        spec.service = value.at("service").get<std::string>();
        spec.cd = value.at("cd").get<std::string>();
        for (const auto& s : value.at("schemas")) {
            auto m = schema::from_compact(s);
            spec.schemas.emplace(m.qname(), m);
        }
        for (const auto& f : value.at("flows")) {
            AdapterFlow flow{f.at("from").get<std::string>(), f.at("to").get<std::string>(), {}, {}, {}};
            for (const auto& stage : f.at("chain"))
                flow.chain.push_back(patterns::pattern_from_json(stage));
            for (const auto& b : f.at("inbound"))
                flow.inbound.push_back(
                    InboundBinding{b.at("operation").get<std::string>(), QName::parse(b.at("qname").get<std::string>())});
            for (const auto& b : f.at("outbound")) {
                OutboundBinding ob{QName::parse(b.at("exit").get<std::string>()), b.at("operation").get<std::string>(),
                                   QName::parse(b.at("target").get<std::string>()), {}};
                for (const auto& e : b.at("pathMap"))
                    ob.path_map.emplace_back(FieldPath::parse(e.at(0).get<std::string>()),
                                             FieldPath::parse(e.at(1).get<std::string>()));
                flow.outbound.push_back(std::move(ob));
            }
            spec.flows.push_back(std::move(flow));
        }
        spec.validate();
        return spec;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("adapter spec: ") + e.what());
    }
}

bool Attachment::service_is_consumer() const
{
    return !sent_messages(service.iface).empty();
}

std::vector<Attachment> attachments(const ChoreographySpec& choreo, const std::vector<CDSpec>& cds,
                                    const std::map<std::string, ServiceDescription>& bindings)
{
    std::vector<Attachment> out;
    for (const auto& role : choreo.roles) {
        auto bound = bindings.find(role);
        if (bound == bindings.end())
            continue;
        const auto& service = bound->second;

        std::vector<const CDSpec*> role_cds;
        std::vector<InterfaceSpec> views;
        for (const auto& cd : cds)
            if (cd.roles.first == role || cd.roles.second == role) {
                role_cds.push_back(&cd);
                views.push_back(cd.interface_for(role));
            }

        std::vector<InterfaceSpec> parts(views.size());
        for (auto& p : parts)
            p.service_name = service.iface.service_name;
        for (const auto& op : service.iface.operations) {
            auto opposite = [&](const mapping::OperationSpec& other) { return other.direction != op.direction; };
            std::optional<std::size_t> home;
            for (std::size_t j = 0; j < views.size() && !home; ++j)
                if (const auto* other = views[j].find(op.name);
                    other && opposite(*other) && other->input.qname().message == op.input.qname().message &&
                    other->input.same_structure(op.input) && other->output.has_value() == op.output.has_value())
                    home = j;
            for (std::size_t j = 0; j < views.size(); ++j) {
                bool fits = home ? *home == j
                                 : std::any_of(views[j].operations.begin(), views[j].operations.end(), opposite);
                if (fits)
                    parts[j].operations.push_back(op);
            }
        }
        for (std::size_t j = 0; j < views.size(); ++j)
            out.push_back(Attachment{role, role_cds[j]->id, ServiceDescription{parts[j], service.protocol}, views[j],
                                     role_cds[j]->protocol_for(role)});
    }
    return out;
}

} // namespace eipsynth::synthesis
