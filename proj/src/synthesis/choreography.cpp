#include "eipsynth/synthesis/choreography.hpp"

#include <algorithm>

#include "eipsynth/errors.hpp"
#include "eipsynth/mapping/interface.hpp"

namespace eipsynth::synthesis {

namespace {

NodeType node_type(const std::string& s, const std::string& context)
{
    if (s == "start") return NodeType::Start;
    if (s == "end") return NodeType::End;
    if (s == "task") return NodeType::Task;
    if (s == "exclusive") return NodeType::Exclusive;
    if (s == "loop") return NodeType::Loop;
    throw ParseError(context + ": unknown node type '" + s + "'");
}

} // namespace

void ChoreographySpec::validate() const
{
    std::set<std::string> role_set(roles.begin(), roles.end());
    if (role_set.size() != roles.size())
        throw InvariantViolation("choreography: duplicate role");
    std::set<std::string> ids;
    std::size_t starts = 0, ends = 0;
    for (const auto& n : nodes) {
        if (!ids.insert(n.id).second)
            throw InvariantViolation("choreography: duplicate node id '" + n.id + "'");
        starts += n.type == NodeType::Start;
        ends += n.type == NodeType::End;
        if (n.type == NodeType::Task) {
            const auto& t = *n.task;
            if (!role_set.count(t.initiator) || !role_set.count(t.target))
                throw InvariantViolation("choreography: task '" + n.id + "' names an unknown role");
            if (t.initiator == t.target)
                throw InvariantViolation("choreography: task '" + n.id + "' needs two distinct roles");
        }
    }
    if (starts != 1)
        throw InvariantViolation("choreography: exactly one start node required");
    if (ends == 0)
        throw InvariantViolation("choreography: no end node");
    for (const auto& [a, b] : edges)
        if (!ids.count(a) || !ids.count(b))
            throw InvariantViolation("choreography: edge " + a + " -> " + b + " names an unknown node");

    std::set<std::string> seen{start().id};
    std::vector<std::string> frontier{start().id};
    while (!frontier.empty()) {
        auto id = frontier.back();
        frontier.pop_back();
        for (const auto& s : successors(id))
            if (seen.insert(s).second)
                frontier.push_back(s);
    }
    for (const auto& n : nodes)
        if (!seen.count(n.id))
            throw InvariantViolation("choreography: node '" + n.id + "' is not reachable from start");

    for (const auto* a : tasks())
        for (const auto* b : tasks())
            if (a->task->operation == b->task->operation &&
                (a->task->message_name != b->task->message_name || !(a->task->message == b->task->message) ||
                 a->task->initiator != b->task->initiator || a->task->target != b->task->target))
                throw InvariantViolation("choreography: operation '" + a->task->operation +
                                         "' is declared differently by tasks '" + a->id + "' and '" + b->id + "'");
}

const ChoreoNode& ChoreographySpec::node(const std::string& id) const
{
    for (const auto& n : nodes)
        if (n.id == id)
            return n;
    throw AnalysisError("choreography has no node '" + id + "'");
}

const ChoreoNode& ChoreographySpec::start() const
{
    for (const auto& n : nodes)
        if (n.type == NodeType::Start)
            return n;
    throw InvariantViolation("choreography: no start node");
}

std::vector<std::string> ChoreographySpec::successors(const std::string& id) const
{
    std::vector<std::string> out;
    for (const auto& [a, b] : edges)
        if (a == id)
            out.push_back(b);
    return out;
}

std::vector<const ChoreoNode*> ChoreographySpec::tasks() const
{
    std::vector<const ChoreoNode*> out;
    for (const auto& n : nodes)
        if (n.type == NodeType::Task)
            out.push_back(&n);
    return out;
}

bool ChoreographySpec::has_role(const std::string& role) const
{
    return std::find(roles.begin(), roles.end(), role) != roles.end();
}

std::set<std::string> ChoreographySpec::closure(const std::set<std::string>& from, const Visible& visible) const
{
    std::set<std::string> out = from;
    std::vector<std::string> frontier(from.begin(), from.end());
    while (!frontier.empty()) {
        auto id = frontier.back();
        frontier.pop_back();
        for (const auto& s : successors(id)) {
            if (visible(node(s)))
                continue;
            if (out.insert(s).second)
                frontier.push_back(s);
        }
    }
    return out;
}

std::vector<const ChoreoNode*> ChoreographySpec::next_tasks(const std::set<std::string>& from,
                                                            const Visible& visible) const
{
    std::set<std::string> ids;
    for (const auto& id : closure(from, visible))
        for (const auto& s : successors(id))
            if (visible(node(s)))
                ids.insert(s);
    std::vector<const ChoreoNode*> out;
    for (const auto& id : ids)
        out.push_back(&node(id));
    return out;
}

bool ChoreographySpec::can_end(const std::set<std::string>& from, const Visible& visible) const
{
    auto c = closure(from, visible);
    return std::any_of(c.begin(), c.end(), [&](const std::string& id) { return node(id).type == NodeType::End; });
}

ChoreographySpec choreography_from_json(const OrderedJson& doc, const std::filesystem::path& base_dir)
{
    ChoreographySpec c;
    c.name = require_string(doc, "name", "choreography");
    const auto& roles = require_member(doc, "roles", c.name);
    if (!roles.is_array())
        throw ParseError(c.name + ": 'roles' must be an array");
    for (const auto& r : roles) {
        if (!r.is_string() || !schema::is_identifier(r.get<std::string>()))
            throw ParseError(c.name + ": roles must be identifiers");
        c.roles.push_back(r.get<std::string>());
    }
    const auto& nodes = require_member(doc, "nodes", c.name);
    if (!nodes.is_array())
        throw ParseError(c.name + ": 'nodes' must be an array");
    for (const auto& n : nodes) {
        ChoreoNode node;
        node.id = require_string(n, "id", c.name + ".nodes");
        const auto context = c.name + "." + node.id;
        node.type = node_type(require_string(n, "type", context), context);
        if (node.type == NodeType::Task) {
            auto operation = require_string(n, "operation", context);
            if (!schema::is_identifier(operation))
                throw ParseError(context + ": invalid operation name");
            const auto& message = require_member(n, "message", context);
            auto message_name = message.contains("message") ? require_string(message, "message", context)
                                                            : operation + "Request";
            auto schema = mapping::message_from_json(message, schema::QName{"Choreography", operation, message_name},
                                                     base_dir);
            node.task = ChoreoTask{n.contains("name") ? require_string(n, "name", context) : node.id,
                                   require_string(n, "initiator", context),
                                   require_string(n, "target", context),
                                   operation,
                                   message_name,
                                   schema.root()};
        }
        c.nodes.push_back(std::move(node));
    }
    const auto& edges = require_member(doc, "edges", c.name);
    if (!edges.is_array())
        throw ParseError(c.name + ": 'edges' must be an array");
    for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw ParseError(c.name + ": each edge is [from, to]");
        c.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    c.validate();
    return c;
}

ChoreographySpec load_choreography(const std::filesystem::path& path)
{
    auto doc = parse_json_strict(read_file(path), path.string());
    return choreography_from_json(doc, path.parent_path());
}

std::string cd_id(const ChoreographySpec& choreo, const std::string& role_a, const std::string& role_b)
{
    auto pos = [&](const std::string& r) { return std::find(choreo.roles.begin(), choreo.roles.end(), r); };
    bool a_first = pos(role_a) <= pos(role_b);
    return "CD_" + (a_first ? role_a : role_b) + "_" + (a_first ? role_b : role_a);
}

std::vector<std::pair<std::string, std::string>> interacting_pairs(const ChoreographySpec& choreo)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < choreo.roles.size(); ++i)
        for (std::size_t j = i + 1; j < choreo.roles.size(); ++j) {
            const auto& a = choreo.roles[i];
            const auto& b = choreo.roles[j];
            for (const auto* t : choreo.tasks())
                if ((t->task->initiator == a && t->task->target == b) ||
                    (t->task->initiator == b && t->task->target == a)) {
                    out.emplace_back(a, b);
                    break;
                }
        }
    return out;
}

} // namespace eipsynth::synthesis
