#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eipsynth/json_util.hpp"
#include "eipsynth/schema/types.hpp"

namespace eipsynth::synthesis {

enum class NodeType { Start, End, Task, Exclusive, Loop };

struct ChoreoTask {
    std::string name;
    std::string initiator;
    std::string target;
    std::string operation;
    std::string message_name;
    schema::TypeNode message;
};

struct ChoreoNode {
    std::string id;
    NodeType type = NodeType::Task;
    std::optional<ChoreoTask> task;
};

/// Flow graph of choreography tasks and gateways. Gateways carry no behavior of their own:
/// an exclusive gateway branches, a loop gateway merges a back edge.
struct ChoreographySpec {
    std::string name;
    std::vector<std::string> roles;
    std::vector<ChoreoNode> nodes;
    std::vector<std::pair<std::string, std::string>> edges;

    /// Throws InvariantViolation: duplicate ids, dangling edges, not exactly one start,
    /// no end, nodes unreachable from start, tasks naming unknown or identical roles,
    /// one operation declared with different messages or initiators.
    void validate() const;

    const ChoreoNode& node(const std::string& id) const;
    const ChoreoNode& start() const;
    std::vector<std::string> successors(const std::string& id) const;
    std::vector<const ChoreoNode*> tasks() const;
    bool has_role(const std::string& role) const;

    using Visible = std::function<bool(const ChoreoNode&)>;
    /// Nodes reachable from `from` without passing through a visible task.
    std::set<std::string> closure(const std::set<std::string>& from, const Visible& visible) const;
    /// Visible tasks enabled after `from` (closure included), grouped by node id.
    std::vector<const ChoreoNode*> next_tasks(const std::set<std::string>& from, const Visible& visible) const;
    bool can_end(const std::set<std::string>& from, const Visible& visible) const;
};

ChoreographySpec choreography_from_json(const OrderedJson& doc, const std::filesystem::path& base_dir);
ChoreographySpec load_choreography(const std::filesystem::path& path);

/// `CD_<first>_<second>`, roles taken in the order the choreography lists them.
std::string cd_id(const ChoreographySpec& choreo, const std::string& role_a, const std::string& role_b);

/// Role pairs sharing at least one task, in role-list order.
std::vector<std::pair<std::string, std::string>> interacting_pairs(const ChoreographySpec& choreo);

} // namespace eipsynth::synthesis
