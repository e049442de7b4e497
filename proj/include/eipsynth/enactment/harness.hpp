#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eipsynth/enactment/scenario.hpp"
#include "eipsynth/enactment/trace.hpp"
#include "eipsynth/patterns/eip.hpp"
#include "eipsynth/synthesis/adapter.hpp"
#include "eipsynth/synthesis/cd.hpp"
#include "eipsynth/synthesis/choreography.hpp"

namespace eipsynth::enactment {

struct HarnessOptions {
    std::uint64_t seed = 0;
    /// Forward every CD event regardless of the enforcement protocol.
    bool bypass_enforcement = false;
};

struct ServiceStub {
    std::string role;
    synthesis::ServiceDescription service;
    StubScript script;
    std::size_t next_action = 0;
    std::vector<patterns::RuntimeMessage> inbox;

    bool script_done() const { return next_action >= script.script.size(); }
};

struct CDRuntime {
    synthesis::CDSpec spec;
    std::string state;
};

/// One service/CD link. `adapter` is either a synthesized adapter or, when the service already
/// speaks the CD's messages, a generated passthrough (`direct`).
struct Link {
    std::string role;
    std::string cd;
    synthesis::AdapterSpec adapter;
    bool direct = false;
    /// One per adapter flow.
    std::vector<patterns::ChainState> states;
};

struct Harness {
    synthesis::ChoreographySpec choreography;
    std::map<std::string, ServiceStub> stubs;
    std::map<std::string, CDRuntime> cds;
    std::vector<Link> links;
    HarnessOptions options;
    std::uint64_t max_ticks = 10000;

    std::size_t adapter_count() const;
    std::size_t buffered() const;
};

/// Wires stubs, adapters and CDs. Throws WiringError for unbound or unknown roles, adapters
/// that match no service/CD link, links without an adapter whose messages are not identical,
/// and messages that no flow carries. Script operations and payloads are checked against the
/// stub's interface (ParseError).
Harness build_harness(const synthesis::ChoreographySpec& choreo,
                      const std::map<std::string, synthesis::ServiceDescription>& bindings,
                      const std::vector<synthesis::CDSpec>& cds, const std::vector<synthesis::AdapterSpec>& adapters,
                      const Scenario& scenario, HarnessOptions options = {});

/// Runs to completion: the event queue is drained before the next script action, and the
/// stub that acts is drawn with the seeded generator. Stops when all scripts are spent and the
/// queue is empty, or when max_ticks events have been recorded (trace marked incomplete).
Trace enact(Harness& harness);

} // namespace eipsynth::enactment
