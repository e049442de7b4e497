#include "eipsynth/enactment/conformance.hpp"

#include <set>

#include "eipsynth/errors.hpp"

namespace eipsynth::enactment {

using synthesis::ChoreoNode;
using synthesis::NodeType;

namespace {

bool matches(const ChoreoNode& n, const TraceEvent& e)
{
    return n.task && n.task->initiator == e.from && n.task->target == e.to && n.task->operation == e.operation;
}

std::string describe(const std::set<std::string>& state)
{
    std::string out;
    for (const auto& id : state)
        out += (out.empty() ? "" : ",") + id;
    return out;
}

} // namespace

double ConformanceReport::coverage() const
{
    return total_tasks == 0 ? 1.0 : static_cast<double>(exercised.size()) / static_cast<double>(total_tasks);
}

ConformanceReport check_conformance(const synthesis::ChoreographySpec& choreo, const Trace& trace)
{
    const auto visible = [](const ChoreoNode& n) { return n.type == NodeType::Task; };
    const auto all_tasks = choreo.tasks();

    ConformanceReport report;
    report.total_tasks = all_tasks.size();
    report.trace_complete = trace.complete;

    std::set<std::string> state{choreo.start().id};
    std::set<std::string> exercised;
    for (const auto& e : trace.events) {
        if (e.kind == EventKind::Blocked) {
            report.prevented.push_back(&e);
            continue;
        }
        if (e.kind != EventKind::Forwarded || !choreo.has_role(e.from) || !choreo.has_role(e.to))
            continue;
        if (std::none_of(all_tasks.begin(), all_tasks.end(), [&](const ChoreoNode* n) { return matches(*n, e); }))
            throw AnalysisError("tick " + std::to_string(e.tick) + ": " + e.from + " -> " + e.to + " " + e.operation +
                                " is not an interaction of choreography " + choreo.name);

        std::set<std::string> next;
        for (const auto* n : choreo.next_tasks(state, visible))
            if (matches(*n, e))
                next.insert(n->id);
        if (next.empty()) {
            report.violations.push_back(Violation{e.tick, e.operation, e.from, e.to, describe(state),
                                                  e.operation + " is not enabled here"});
            continue;
        }
        exercised.insert(next.begin(), next.end());
        state = std::move(next);
    }
    report.exercised.assign(exercised.begin(), exercised.end());
    report.at_end = choreo.can_end(state, visible);
    return report;
}

Json to_json(const ConformanceReport& report)
{
    Json violations = Json::array();
    for (const auto& v : report.violations)
        violations.push_back(Json{{"tick", v.tick},
                                  {"operation", v.operation},
                                  {"from", v.from},
                                  {"to", v.to},
                                  {"state", v.state},
                                  {"reason", v.reason}});
    Json prevented = Json::array();
    for (const auto* e : report.prevented)
        prevented.push_back(Json{{"tick", e->tick},
                                 {"operation", e->operation},
                                 {"from", e->from},
                                 {"to", e->to},
                                 {"via", e->via},
                                 {"reason", e->note}});
    return Json{{"verdict", report.conformant() ? "conformant" : "violating"},
                {"violations", violations},
                {"prevented", prevented},
                {"coverage", Json{{"exercised", report.exercised},
                                  {"total", report.total_tasks},
                                  {"ratio", report.coverage()}}},
                {"traceComplete", report.trace_complete},
                {"atEnd", report.at_end}};
}

} // namespace eipsynth::enactment
