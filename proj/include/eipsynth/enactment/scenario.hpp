#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eipsynth/json_util.hpp"

namespace eipsynth::enactment {

struct ScriptAction {
    std::string operation;
    Json payload;

    friend bool operator==(const ScriptAction&, const ScriptAction&) = default;
};

/// On delivery of `on`, the stub sends `send` in order.
struct Reaction {
    std::string on;
    std::vector<ScriptAction> send;

    friend bool operator==(const Reaction&, const Reaction&) = default;
};

struct StubScript {
    std::vector<ScriptAction> script;
    std::vector<Reaction> reactions;

    friend bool operator==(const StubScript&, const StubScript&) = default;
};

/// Per-role scripts. Roles absent from `stubs` run empty scripts.
struct Scenario {
    std::map<std::string, StubScript> stubs;
    std::uint64_t max_ticks = 10000;
};

/// `{"maxTicks": n, "stubs": {"<role>": {"script": [{"operation", "payload"}],
///   "reactions": [{"on": op, "send": [{"operation", "payload"}]}]}}}`
Scenario scenario_from_json(const OrderedJson& doc);
Scenario load_scenario(const std::filesystem::path& path);

} // namespace eipsynth::enactment
