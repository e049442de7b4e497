#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "eipsynth/json_util.hpp"
#include "eipsynth/patterns/message.hpp"
#include "eipsynth/schema/types.hpp"

namespace eipsynth::patterns {

/// (source path, target path) pairs.
using PathMap = std::vector<std::pair<schema::FieldPath, schema::FieldPath>>;

struct SplitPart {
    schema::QName target;
    PathMap path_map;

    friend bool operator==(const SplitPart&, const SplitPart&) = default;
};

struct Splitter {
    schema::QName source;
    std::vector<SplitPart> parts;

    friend bool operator==(const Splitter&, const Splitter&) = default;
};

struct Aggregator {
    enum class Correlation { Header, Constant };

    /// In merge order.
    std::vector<schema::QName> expected;
    schema::QName target;
    std::map<schema::QName, PathMap> merge_map;
    Correlation correlation = Correlation::Header;
    /// Token used by every message when correlation is Constant.
    std::string constant_token;

    friend bool operator==(const Aggregator&, const Aggregator&) = default;
};

/// Strict prefix release: nothing leaves before everything ahead of it in `order` has left.
struct Resequencer {
    std::vector<schema::QName> order;

    friend bool operator==(const Resequencer&, const Resequencer&) = default;
};

struct MessageFilter {
    std::vector<schema::QName> drop_set;

    friend bool operator==(const MessageFilter&, const MessageFilter&) = default;
};

using PatternInstance = std::variant<MessageFilter, Aggregator, Splitter, Resequencer>;

std::string pattern_name(const PatternInstance& instance);

/// Per-stage buffers, keyed by correlation token. Splitter and filter stages keep none.
struct PatternState {
    std::map<std::string, std::map<schema::QName, RuntimeMessage>> buffers;
    /// Resequencer: how many entries of `order` were already released in the current round.
    std::map<std::string, std::size_t> released;

    std::size_t buffered() const;
    friend bool operator==(const PatternState&, const PatternState&) = default;
};

/// Throws RoutingError when a source path is missing from the payload.
std::vector<RuntimeMessage> splitter_process(const Splitter& cfg, const RuntimeMessage& msg);

/// Emits the merged message once every expected qname is buffered for the token.
/// Throws RoutingError (state untouched) for unexpected qnames and duplicates.
std::optional<RuntimeMessage> aggregator_process(const Aggregator& cfg, PatternState& state, const RuntimeMessage& msg);

/// Throws RoutingError (state untouched) for qnames outside `order` and repeats within a round.
std::vector<RuntimeMessage> resequencer_process(const Resequencer& cfg, PatternState& state,
                                                const RuntimeMessage& msg);

std::optional<RuntimeMessage> filter_process(const MessageFilter& cfg, const RuntimeMessage& msg);

/// Structural invariants of one instance; throws ConfigurationError.
void validate_instance(const PatternInstance& instance);

/// Symbolic qname flow: the qnames leaving the chain given those entering it.
/// Throws ConfigurationError when a stage consumes something nobody produces.
std::set<schema::QName> chain_flow(const std::vector<PatternInstance>& chain, const std::set<schema::QName>& entry);

/// Whether a stage processes `qname` rather than letting it bypass.
bool stage_handles(const PatternInstance& stage, const schema::QName& qname);

/// Copies each mapped source leaf into `out`. Throws RoutingError naming `source` when a
/// source leaf is missing.
Json apply_path_map(const PathMap& map, const Json& payload, Json out, const schema::QName& source);

struct Diversion {
    enum class Kind { Dropped, DeadLetter };
    Kind kind;
    std::size_t stage;
    RuntimeMessage message;
    std::string reason;
};

struct ChainState {
    std::vector<PatternState> stages;
    /// Accumulated drops and dead letters, in the order they happened.
    std::vector<Diversion> diversions;
};

/// Threads one message through every stage; multi-output stages feed the next stage in
/// output order. Returns what leaves the last stage.
std::vector<RuntimeMessage> step_chain(const std::vector<PatternInstance>& chain, ChainState& state,
                                       const RuntimeMessage& msg);

/// Drains `inbound` through the chain onto `outbound`.
void run_chain(const std::vector<PatternInstance>& chain, Channel& inbound, Channel& outbound, ChainState& state);

Json to_json(const PatternInstance& instance);
PatternInstance pattern_from_json(const Json& value);

} // namespace eipsynth::patterns
