#include "eipsynth/synthesis/cd.hpp"

#include <algorithm>
#include <map>

#include "eipsynth/errors.hpp"
#include "eipsynth/schema/formats.hpp"

namespace eipsynth::synthesis {

using schema::MessageSchema;
using schema::QName;

const CDRoute* CDSpec::route(const std::string& operation) const
{
    for (const auto& r : routes)
        if (r.operation == operation)
            return &r;
    return nullptr;
}

mapping::InterfaceSpec CDSpec::interface_for(const std::string& role) const
{
    if (role != roles.first && role != roles.second)
        throw InvariantViolation(id + " does not serve role " + role);
    mapping::InterfaceSpec iface{id, {}};
    for (const auto& r : routes)
        iface.operations.push_back(mapping::OperationSpec{
            r.operation, r.initiator == role ? mapping::Direction::Provided : mapping::Direction::Required,
            mapping::Mep::OneWay, r.message, std::nullopt});
    iface.validate();
    return iface;
}

ProtocolSpec CDSpec::protocol_for(const std::string& role) const
{
    auto p = enforcement;
    for (auto& t : p.transitions) {
        const auto* r = route(t.label.operation);
        t.label.polarity = r->initiator == role ? Polarity::Receive : Polarity::Send;
    }
    return p;
}

CDSpec synthesize_cd(const ChoreographySpec& choreo, const std::string& role_a, const std::string& role_b)
{
    if (!choreo.has_role(role_a) || !choreo.has_role(role_b))
        throw NoInteraction("role pair (" + role_a + ", " + role_b + ") is not part of the choreography");
    auto in_pair = [&](const ChoreoTask& t) {
        return (t.initiator == role_a && t.target == role_b) || (t.initiator == role_b && t.target == role_a);
    };
    ChoreographySpec::Visible visible = [&](const ChoreoNode& n) { return n.task && in_pair(*n.task); };

    CDSpec cd;
    cd.id = cd_id(choreo, role_a, role_b);
    auto pos = [&](const std::string& r) { return std::find(choreo.roles.begin(), choreo.roles.end(), r); };
    cd.roles = pos(role_a) <= pos(role_b) ? std::pair{role_a, role_b} : std::pair{role_b, role_a};

    std::map<std::string, CDRoute> routes;
    for (const auto* n : choreo.tasks())
        if (in_pair(*n->task)) {
            const auto& t = *n->task;
            routes.try_emplace(t.operation, CDRoute{t.operation, t.initiator, t.target,
                                                    MessageSchema(QName{cd.id, t.operation, t.message_name}, t.message)});
        }
    if (routes.empty())
        throw NoInteraction("roles " + role_a + " and " + role_b + " share no choreography task");
    for (auto& [op, r] : routes)
        cd.routes.push_back(r);

    auto label_of = [&](const ChoreoNode& n) {
        return Label{n.task->operation, Polarity::Receive, routes.at(n.task->operation).message.qname()};
    };

    std::map<std::set<std::string>, std::string> names;
    std::vector<std::set<std::string>> order;
    auto intern = [&](const std::set<std::string>& s) {
        auto [it, fresh] = names.emplace(s, "q" + std::to_string(order.size()));
        if (fresh)
            order.push_back(s);
        return it->second;
    };
    cd.enforcement.initial = intern(choreo.closure({choreo.start().id}, visible));
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto current = order[i];
        const auto from = names.at(current);
        std::map<Label, std::set<std::string>> moves;
        for (const auto* n : choreo.next_tasks(current, visible))
            moves[label_of(*n)].insert(n->id);
        for (const auto& [label, targets] : moves)
            cd.enforcement.transitions.push_back(Transition{from, label, intern(choreo.closure(targets, visible))});
    }
    for (const auto& s : order) {
        cd.enforcement.states.push_back(names.at(s));
        if (choreo.can_end(s, visible))
            cd.enforcement.finals.push_back(names.at(s));
    }
    cd.enforcement.validate();
    return cd;
}

Json to_json(const CDSpec& cd)
{
    Json routes = Json::array();
    for (const auto& r : cd.routes)
        routes.push_back(Json{{"operation", r.operation},
                              {"initiator", r.initiator},
                              {"target", r.target},
                              {"message", schema::to_compact(r.message)}});
    return Json{{"id", cd.id},
                {"roles", Json::array({cd.roles.first, cd.roles.second})},
                {"enforcement", to_json(cd.enforcement)},
                {"routes", routes}};
}

CDSpec cd_from_json(const Json& value)
{
    try {
        CDSpec cd;
        cd.id = value.at("id").get<std::string>();
        cd.roles = {value.at("roles").at(0).get<std::string>(), value.at("roles").at(1).get<std::string>()};
        cd.enforcement = protocol_from_json(value.at("enforcement"));
        for (const auto& r : value.at("routes"))
            cd.routes.push_back(CDRoute{r.at("operation").get<std::string>(), r.at("initiator").get<std::string>(),
                                        r.at("target").get<std::string>(), schema::from_compact(r.at("message"))});
        for (const auto& t : cd.enforcement.transitions)
            if (!cd.route(t.label.operation))
                throw ParseError(cd.id + ": enforcement uses unrouted operation " + t.label.operation);
        return cd;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("CD spec: ") + e.what());
    }
}

} // namespace eipsynth::synthesis
