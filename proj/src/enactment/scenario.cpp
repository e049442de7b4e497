#include "eipsynth/enactment/scenario.hpp"

#include "eipsynth/errors.hpp"

namespace eipsynth::enactment {

namespace {

std::vector<ScriptAction> actions_from_json(const OrderedJson& list, const std::string& context)
{
    if (!list.is_array())
        throw ParseError(context + ": expected an array of actions");
    std::vector<ScriptAction> out;
    for (const auto& a : list) {
        auto op = require_string(a, "operation", context);
        const auto& payload = require_member(a, "payload", context + "." + op);
        // Re-parse into the sorted-key form used at runtime.
        out.push_back(ScriptAction{op, Json::parse(payload.dump())});
    }
    return out;
}

} // namespace

Scenario scenario_from_json(const OrderedJson& doc)
{
    Scenario s;
    if (!doc.is_object())
        throw ParseError("scenario: expected an object");
    if (doc.contains("maxTicks")) {
        const auto& m = doc.at("maxTicks");
        if (!m.is_number_unsigned() || m.get<std::uint64_t>() == 0)
            throw ParseError("scenario: maxTicks must be a positive integer");
        s.max_ticks = m.get<std::uint64_t>();
    }
    if (!doc.contains("stubs"))
        return s;
    const auto& stubs = doc.at("stubs");
    if (!stubs.is_object())
        throw ParseError("scenario: 'stubs' must be an object keyed by role");
    for (const auto& [role, body] : stubs.items()) {
        StubScript script;
        const auto context = "scenario." + role;
        if (body.contains("script"))
            script.script = actions_from_json(body.at("script"), context + ".script");
        if (body.contains("reactions")) {
            const auto& reactions = body.at("reactions");
            if (!reactions.is_array())
                throw ParseError(context + ": 'reactions' must be an array");
            for (const auto& r : reactions)
                script.reactions.push_back(Reaction{require_string(r, "on", context + ".reactions"),
                                                    actions_from_json(require_member(r, "send", context), context)});
        }
        s.stubs.emplace(role, std::move(script));
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    return scenario_from_json(parse_json_strict(read_file(path), path.string()));
}

} // namespace eipsynth::enactment
