#pragma once

#include <string>
#include <vector>

#include "eipsynth/enactment/trace.hpp"
#include "eipsynth/synthesis/choreography.hpp"

namespace eipsynth::enactment {

struct Violation {
    std::uint64_t tick = 0;
    std::string operation;
    std::string from;
    std::string to;
    /// Choreography nodes the replay was at, comma-separated.
    std::string state;
    std::string reason;
};

struct ConformanceReport {
    std::vector<Violation> violations;
    /// Blocked events: deviations the CDs stopped before they reached a service.
    std::vector<const TraceEvent*> prevented;
    std::vector<std::string> exercised;
    std::size_t total_tasks = 0;
    bool trace_complete = true;
    /// Whether the replay stopped where the choreography may end.
    bool at_end = false;

    bool conformant() const { return violations.empty(); }
    double coverage() const;
};

/// Replays the task events the CDs forwarded (role to role) against the choreography.
/// Events that no enabled task matches are violations and leave the replay state unchanged.
/// Throws AnalysisError when an event names an interaction the choreography does not define.
/// The report points into `trace`.
ConformanceReport check_conformance(const synthesis::ChoreographySpec& choreo, const Trace& trace);

Json to_json(const ConformanceReport& report);

} // namespace eipsynth::enactment
