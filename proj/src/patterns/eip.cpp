#include "eipsynth/patterns/eip.hpp"

#include <algorithm>

#include "eipsynth/errors.hpp"

namespace eipsynth::patterns {

using schema::FieldPath;
using schema::QName;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool contains(const std::vector<QName>& list, const QName& q)
{
    return std::find(list.begin(), list.end(), q) != list.end();
}

bool has_duplicates(std::vector<QName> list)
{
    std::sort(list.begin(), list.end());
    return std::adjacent_find(list.begin(), list.end()) != list.end();
}

Json path_map_to_json(const PathMap& map)
{
    Json out = Json::array();
    for (const auto& [s, t] : map)
        out.push_back(Json::array({s.str(), t.str()}));
    return out;
}

PathMap path_map_from_json(const Json& value)
{
    PathMap map;
    for (const auto& entry : value)
        map.emplace_back(FieldPath::parse(entry.at(0).get<std::string>()),
                         FieldPath::parse(entry.at(1).get<std::string>()));
    return map;
}

Json qnames_to_json(const std::vector<QName>& list)
{
    Json out = Json::array();
    for (const auto& q : list)
        out.push_back(q.str());
    return out;
}

std::vector<QName> qnames_from_json(const Json& value)
{
    std::vector<QName> out;
    for (const auto& q : value)
        out.push_back(QName::parse(q.get<std::string>()));
    return out;
}

std::vector<RuntimeMessage> run_stage(const PatternInstance& stage, PatternState& state, const RuntimeMessage& msg)
{
    return std::visit(
        overloaded{
            [&](const MessageFilter& f) {
                auto kept = filter_process(f, msg);
                return kept ? std::vector<RuntimeMessage>{*kept} : std::vector<RuntimeMessage>{};
            },
            [&](const Aggregator& a) {
                auto merged = aggregator_process(a, state, msg);
                return merged ? std::vector<RuntimeMessage>{*merged} : std::vector<RuntimeMessage>{};
            },
            [&](const Splitter& s) { return splitter_process(s, msg); },
            [&](const Resequencer& r) { return resequencer_process(r, state, msg); },
        },
        stage);
}

} // namespace

Json apply_path_map(const PathMap& map, const Json& payload, Json out, const QName& source)
{
    for (const auto& [s, t] : map) {
        const Json* value = leaf_at(payload, s);
        if (!value)
            throw RoutingError(source.str() + ": payload has no leaf " + s.str());
        set_leaf(out, t, *value);
    }
    return out;
}

std::string pattern_name(const PatternInstance& instance)
{
    return std::visit(overloaded{
                          [](const MessageFilter&) { return "MessageFilter"; },
                          [](const Aggregator&) { return "Aggregator"; },
                          [](const Splitter&) { return "Splitter"; },
                          [](const Resequencer&) { return "Resequencer"; },
                      },
                      instance);
}

std::size_t PatternState::buffered() const
{
    std::size_t n = 0;
    for (const auto& [token, held] : buffers)
        n += held.size();
    return n;
}

std::vector<RuntimeMessage> splitter_process(const Splitter& cfg, const RuntimeMessage& msg)
{
    if (msg.qname != cfg.source)
        throw RoutingError("splitter for " + cfg.source.str() + " received " + msg.qname.str());
    std::vector<RuntimeMessage> out;
    for (std::size_t i = 0; i < cfg.parts.size(); ++i) {
        const auto& part = cfg.parts[i];
        RuntimeMessage m{part.target, apply_path_map(part.path_map, msg.payload, Json::object(), msg.qname),
                         msg.headers};
        m.headers.sequence_index = i + 1;
        out.push_back(std::move(m));
    }
    return out;
}

std::optional<RuntimeMessage> aggregator_process(const Aggregator& cfg, PatternState& state, const RuntimeMessage& msg)
{
    if (!contains(cfg.expected, msg.qname))
        throw RoutingError("aggregator for " + cfg.target.str() + " does not expect " + msg.qname.str());
    const auto token =
        cfg.correlation == Aggregator::Correlation::Header ? msg.headers.correlation_id : cfg.constant_token;
    auto it = state.buffers.find(token);
    if (it != state.buffers.end() && it->second.count(msg.qname))
        throw RoutingError("aggregator for " + cfg.target.str() + ": duplicate " + msg.qname.str() +
                           " for correlation " + token);

    auto& held = state.buffers[token];
    held.emplace(msg.qname, msg);
    if (held.size() < cfg.expected.size())
        return std::nullopt;

    Json merged = Json::object();
    for (const auto& q : cfg.expected)
        merged = apply_path_map(cfg.merge_map.at(q), held.at(q).payload, std::move(merged), q);
    RuntimeMessage out{cfg.target, std::move(merged), msg.headers};
    out.headers.sequence_index.reset();
    state.buffers.erase(token);
    return out;
}

std::vector<RuntimeMessage> resequencer_process(const Resequencer& cfg, PatternState& state, const RuntimeMessage& msg)
{
    auto pos = std::find(cfg.order.begin(), cfg.order.end(), msg.qname);
    if (pos == cfg.order.end())
        throw RoutingError("resequencer does not order " + msg.qname.str());
    const auto& token = msg.headers.correlation_id;
    auto rel = state.released.find(token);
    std::size_t released = rel == state.released.end() ? 0 : rel->second;
    auto buf = state.buffers.find(token);
    bool held = buf != state.buffers.end() && buf->second.count(msg.qname);
    if (static_cast<std::size_t>(pos - cfg.order.begin()) < released || held)
        throw RoutingError("resequencer: duplicate " + msg.qname.str() + " for correlation " + token);

    auto& buffer = state.buffers[token];
    buffer.emplace(msg.qname, msg);
    std::vector<RuntimeMessage> out;
    while (released < cfg.order.size()) {
        auto next = buffer.find(cfg.order[released]);
        if (next == buffer.end())
            break;
        out.push_back(std::move(next->second));
        buffer.erase(next);
        ++released;
    }
    if (released == cfg.order.size()) {
        state.released.erase(token);
        state.buffers.erase(token);
    } else {
        state.released[token] = released;
        if (buffer.empty())
            state.buffers.erase(token);
    }
    return out;
}

std::optional<RuntimeMessage> filter_process(const MessageFilter& cfg, const RuntimeMessage& msg)
{
    if (contains(cfg.drop_set, msg.qname))
        return std::nullopt;
    return msg;
}

void validate_instance(const PatternInstance& instance)
{
    std::visit(overloaded{
                   [](const MessageFilter& f) {
                       if (f.drop_set.empty())
                           throw ConfigurationError("MessageFilter: empty drop set");
                       if (has_duplicates(f.drop_set))
                           throw ConfigurationError("MessageFilter: duplicate qname in drop set");
                   },
                   [](const Aggregator& a) {
                       if (a.expected.size() < 2)
                           throw ConfigurationError("Aggregator for " + a.target.str() +
                                                    ": needs at least two expected messages");
                       if (has_duplicates(a.expected))
                           throw ConfigurationError("Aggregator for " + a.target.str() + ": duplicate expected qname");
                       if (contains(a.expected, a.target))
                           throw ConfigurationError("Aggregator for " + a.target.str() + ": target is also expected");
                       if (a.merge_map.size() != a.expected.size())
                           throw ConfigurationError("Aggregator for " + a.target.str() +
                                                    ": merge map must cover exactly the expected qnames");
                       std::vector<FieldPath> targets;
                       for (const auto& q : a.expected) {
                           auto it = a.merge_map.find(q);
                           if (it == a.merge_map.end() || it->second.empty())
                               throw ConfigurationError("Aggregator for " + a.target.str() + ": no merge map for " +
                                                        q.str());
                           for (const auto& [s, t] : it->second)
                               targets.push_back(t);
                       }
                       std::sort(targets.begin(), targets.end());
                       if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
                           throw ConfigurationError("Aggregator for " + a.target.str() +
                                                    ": two sources write the same target leaf");
                   },
                   [](const Splitter& s) {
                       if (s.parts.empty())
                           throw ConfigurationError("Splitter for " + s.source.str() + ": no parts");
                       std::vector<QName> targets;
                       for (const auto& p : s.parts) {
                           if (p.path_map.empty())
                               throw ConfigurationError("Splitter for " + s.source.str() + ": empty part " +
                                                        p.target.str());
                           std::vector<FieldPath> leaves;
                           for (const auto& [src, tgt] : p.path_map)
                               leaves.push_back(tgt);
                           std::sort(leaves.begin(), leaves.end());
                           if (std::adjacent_find(leaves.begin(), leaves.end()) != leaves.end())
                               throw ConfigurationError("Splitter part " + p.target.str() + ": duplicate target leaf");
                           targets.push_back(p.target);
                       }
                       if (has_duplicates(targets))
                           throw ConfigurationError("Splitter for " + s.source.str() + ": duplicate part target");
                   },
                   [](const Resequencer& r) {
                       if (r.order.empty())
                           throw ConfigurationError("Resequencer: empty order");
                       if (has_duplicates(r.order))
                           throw ConfigurationError("Resequencer: duplicate qname in order");
                   },
               },
               instance);
}

std::set<QName> chain_flow(const std::vector<PatternInstance>& chain, const std::set<QName>& entry)
{
    auto available = entry;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        validate_instance(chain[i]);
        auto require = [&](const QName& q) {
            if (!available.count(q))
                throw ConfigurationError("stage " + std::to_string(i + 1) + " (" + pattern_name(chain[i]) +
                                         ") consumes " + q.str() + ", which nothing upstream produces");
        };
        std::visit(overloaded{
                       [&](const MessageFilter& f) {
                           for (const auto& q : f.drop_set)
                               available.erase(q);
                       },
                       [&](const Aggregator& a) {
                           for (const auto& q : a.expected)
                               require(q);
                           for (const auto& q : a.expected)
                               available.erase(q);
                           available.insert(a.target);
                       },
                       [&](const Splitter& s) {
                           require(s.source);
                           available.erase(s.source);
                           for (const auto& p : s.parts)
                               available.insert(p.target);
                       },
                       [&](const Resequencer& r) {
                           for (const auto& q : r.order)
                               require(q);
                       },
                   },
                   chain[i]);
    }
    return available;
}

bool stage_handles(const PatternInstance& stage, const QName& qname)
{
    return std::visit(overloaded{
                          [](const MessageFilter&) { return true; },
                          [&](const Aggregator& a) { return contains(a.expected, qname); },
                          [&](const Splitter& s) { return s.source == qname; },
                          [&](const Resequencer& r) { return contains(r.order, qname); },
                      },
                      stage);
}

std::vector<RuntimeMessage> step_chain(const std::vector<PatternInstance>& chain, ChainState& state,
                                       const RuntimeMessage& msg)
{
    state.stages.resize(chain.size());
    std::vector<RuntimeMessage> current{msg};
    for (std::size_t i = 0; i < chain.size(); ++i) {
        std::vector<RuntimeMessage> next;
        for (const auto& m : current) {
            if (!stage_handles(chain[i], m.qname)) {
                next.push_back(m);
                continue;
            }
            try {
                auto produced = run_stage(chain[i], state.stages[i], m);
                if (produced.empty() && std::holds_alternative<MessageFilter>(chain[i]))
                    state.diversions.push_back({Diversion::Kind::Dropped, i, m, "in drop set"});
                for (auto& p : produced)
                    next.push_back(std::move(p));
            } catch (const RoutingError& e) {
                state.diversions.push_back({Diversion::Kind::DeadLetter, i, m, e.what()});
            }
        }
        current = std::move(next);
    }
    return current;
}

void run_chain(const std::vector<PatternInstance>& chain, Channel& inbound, Channel& outbound, ChainState& state)
{
    if (chain.empty())
        throw ConfigurationError("run_chain: empty chain");
    for (const auto& stage : chain)
        validate_instance(stage);
    while (!inbound.empty())
        for (auto& out : step_chain(chain, state, inbound.pop()))
            outbound.push(std::move(out));
}

Json to_json(const PatternInstance& instance)
{
    return std::visit(
        overloaded{
            [](const MessageFilter& f) { return Json{{"pattern", "MessageFilter"}, {"dropSet", qnames_to_json(f.drop_set)}}; },
            [](const Aggregator& a) {
                Json merge = Json::object();
                for (const auto& [q, map] : a.merge_map)
                    merge[q.str()] = path_map_to_json(map);
                Json correlation = a.correlation == Aggregator::Correlation::Header
                                       ? Json{{"kind", "header"}}
                                       : Json{{"kind", "constant"}, {"token", a.constant_token}};
                return Json{{"pattern", "Aggregator"},
                            {"expected", qnames_to_json(a.expected)},
                            {"target", a.target.str()},
                            {"mergeMap", merge},
                            {"correlation", correlation}};
            },
            [](const Splitter& s) {
                Json parts = Json::array();
                for (const auto& p : s.parts)
                    parts.push_back(Json{{"target", p.target.str()}, {"pathMap", path_map_to_json(p.path_map)}});
                return Json{{"pattern", "Splitter"}, {"source", s.source.str()}, {"parts", parts}};
            },
            [](const Resequencer& r) {
                return Json{{"pattern", "Resequencer"}, {"order", qnames_to_json(r.order)}, {"releasePolicy", "strict"}};
            },
        },
        instance);
}

PatternInstance pattern_from_json(const Json& value)
{
    try {
        const auto kind = value.at("pattern").get<std::string>();
        PatternInstance out;
        if (kind == "MessageFilter") {
            out = MessageFilter{qnames_from_json(value.at("dropSet"))};
        } else if (kind == "Aggregator") {
            Aggregator a;
            a.expected = qnames_from_json(value.at("expected"));
            a.target = QName::parse(value.at("target").get<std::string>());
            for (const auto& [q, map] : value.at("mergeMap").items())
                a.merge_map.emplace(QName::parse(q), path_map_from_json(map));
            const auto& corr = value.at("correlation");
            const auto corr_kind = corr.at("kind").get<std::string>();
            if (corr_kind == "constant") {
                a.correlation = Aggregator::Correlation::Constant;
                a.constant_token = corr.at("token").get<std::string>();
            } else if (corr_kind != "header") {
                throw ParseError("Aggregator: unknown correlation kind '" + corr_kind + "'");
            }
            out = std::move(a);
        } else if (kind == "Splitter") {
            Splitter s;
            s.source = QName::parse(value.at("source").get<std::string>());
            for (const auto& p : value.at("parts"))
                s.parts.push_back(SplitPart{QName::parse(p.at("target").get<std::string>()),
                                            path_map_from_json(p.at("pathMap"))});
            out = std::move(s);
        } else if (kind == "Resequencer") {
            if (value.value("releasePolicy", std::string("strict")) != "strict")
                throw ParseError("Resequencer: only the strict release policy exists");
            out = Resequencer{qnames_from_json(value.at("order"))};
        } else {
            throw ParseError("unknown pattern '" + kind + "'");
        }
        validate_instance(out);
        return out;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("pattern: ") + e.what());
    }
}

} // namespace eipsynth::patterns
