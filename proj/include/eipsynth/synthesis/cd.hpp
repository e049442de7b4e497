#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eipsynth/json_util.hpp"
#include "eipsynth/mapping/interface.hpp"
#include "eipsynth/synthesis/choreography.hpp"
#include "eipsynth/synthesis/protocol.hpp"

namespace eipsynth::synthesis {

/// Who sends an operation through the CD, and to whom it is forwarded unchanged.
struct CDRoute {
    std::string operation;
    std::string initiator;
    std::string target;
    schema::MessageSchema message;

    friend bool operator==(const CDRoute&, const CDRoute&) = default;
};

struct CDSpec {
    std::string id;
    std::pair<std::string, std::string> roles;
    /// Over CD receive events: every label is `?op(CD.op.msg)`.
    ProtocolSpec enforcement;
    /// Sorted by operation.
    std::vector<CDRoute> routes;

    const CDRoute* route(const std::string& operation) const;
    /// The CD as seen by one role: operations that role initiates are provided, the others required.
    mapping::InterfaceSpec interface_for(const std::string& role) const;
    /// Enforcement relabelled from the role's point of view of the CD.
    ProtocolSpec protocol_for(const std::string& role) const;

    friend bool operator==(const CDSpec&, const CDSpec&) = default;
};

/// Projects the choreography onto the tasks between the two roles (other tasks and gateways
/// become silent moves) and determinizes. States are named q0, q1, ... in breadth-first order.
/// Throws NoInteraction when the roles share no task.
CDSpec synthesize_cd(const ChoreographySpec& choreo, const std::string& role_a, const std::string& role_b);

Json to_json(const CDSpec& cd);
CDSpec cd_from_json(const Json& value);

} // namespace eipsynth::synthesis
