#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eipsynth/json_util.hpp"
#include "eipsynth/mapping/interface.hpp"

namespace eipsynth::synthesis {

enum class Polarity { Send, Receive };

std::string_view to_string(Polarity p) noexcept;

struct Label {
    std::string operation;
    Polarity polarity = Polarity::Send;
    schema::QName message;

    std::string str() const;
    friend auto operator<=>(const Label&, const Label&) = default;
};

struct Transition {
    std::string from;
    Label label;
    std::string to;

    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Deterministic labelled automaton over operation/message events.
struct ProtocolSpec {
    std::vector<std::string> states;
    std::string initial;
    std::vector<std::string> finals;
    std::vector<Transition> transitions;

    /// Throws InvariantViolation: unknown states, nondeterminism on (state, label), unreachable states.
    void validate() const;

    std::optional<std::string> step(const std::string& state, const Label& label) const;
    std::vector<Label> enabled(const std::string& state) const;
    bool is_final(const std::string& state) const;
    std::vector<std::string> reachable() const;
    /// Whether the whole word runs from the initial state and ends in a final state.
    bool accepts(const std::vector<Label>& word) const;
    /// Whether `word` can run consecutively from some reachable state.
    bool admits(const std::vector<Label>& word) const;
    /// States reachable from `from` without taking a transition labelled in `avoid`.
    std::set<std::string> reach_avoiding(std::set<std::string> from, const std::set<Label>& avoid) const;
    /// Where `word` ends when run from each of `starts`; empty when it runs from none.
    std::set<std::string> run_from(const std::set<std::string>& starts, const std::vector<Label>& word) const;

    friend bool operator==(const ProtocolSpec&, const ProtocolSpec&) = default;
};

/// Single final state with a self-loop for every message the interface sends or receives.
ProtocolSpec permissive_protocol(const mapping::InterfaceSpec& iface);

/// The label a service shows when it sends or receives `qname`.
Label label_for(const mapping::InterfaceSpec& iface, const schema::QName& qname);

Json to_json(const ProtocolSpec& protocol);
ProtocolSpec protocol_from_json(const Json& value);

/// A concrete service: interface plus its interaction protocol.
struct ServiceDescription {
    mapping::InterfaceSpec iface;
    ProtocolSpec protocol;
};

/// Interface document with an optional `"protocol"` member:
/// `{"initial", "finals": [...], "transitions": [{"from", "operation", "polarity", "to"}]}`.
/// The message of each transition follows from the operation and polarity.
ServiceDescription service_from_json(const OrderedJson& doc, const std::filesystem::path& base_dir);
ServiceDescription load_service(const std::filesystem::path& path);

} // namespace eipsynth::synthesis
