#pragma once

#include <map>
#include <string>
#include <vector>

#include "eipsynth/json_util.hpp"
#include "eipsynth/mapping/interface.hpp"
#include "eipsynth/mapping/report.hpp"
#include "eipsynth/patterns/eip.hpp"
#include "eipsynth/synthesis/cd.hpp"
#include "eipsynth/synthesis/protocol.hpp"

namespace eipsynth::synthesis {

struct InboundBinding {
    std::string operation;
    schema::QName qname;

    friend auto operator<=>(const InboundBinding&, const InboundBinding&) = default;
};

/// Delivers a chain exit to an operation of the receiving side. An empty path map passes the
/// payload unchanged (the exit already has the target's structure).
struct OutboundBinding {
    schema::QName exit;
    std::string operation;
    schema::QName target;
    patterns::PathMap path_map;

    friend bool operator==(const OutboundBinding&, const OutboundBinding&) = default;
};

/// Messages sent by `from` and delivered to `to`.
struct AdapterFlow {
    std::string from;
    std::string to;
    std::vector<patterns::PatternInstance> chain;
    std::vector<InboundBinding> inbound;
    std::vector<OutboundBinding> outbound;

    const OutboundBinding* binding_for(const schema::QName& exit) const;
    friend bool operator==(const AdapterFlow&, const AdapterFlow&) = default;
};

struct AdapterSpec {
    std::string id;
    std::string consumer;
    std::string provider;
    std::string service;
    std::string cd;
    /// Consumer-to-provider first; a provider-to-consumer flow follows when the provider sends anything.
    std::vector<AdapterFlow> flows;
    std::map<schema::QName, schema::MessageSchema> schemas;

    /// Empty chains and identical-message bindings only: the service can talk to the CD directly.
    bool is_passthrough() const;
    const AdapterFlow* flow_from(const std::string& side) const;

    /// Throws InvariantViolation: broken qname flow, unbound or doubly bound exits, path maps
    /// that do not cover their target schema or change leaf kinds.
    void validate() const;

    friend bool operator==(const AdapterSpec&, const AdapterSpec&) = default;
};

/// Messages an interface emits (required inputs, provided outputs) and accepts (the converse).
std::vector<const schema::MessageSchema*> sent_messages(const mapping::InterfaceSpec& iface);
std::vector<const schema::MessageSchema*> expected_messages(const mapping::InterfaceSpec& iface);

/// Rule engine. The report must pair the service with the CD (`report.counterpart`); the CD side
/// is the contract: every message it expects must be produced and every message it sends must
/// be consumed in full. Stages are chained Filter, Aggregator, Splitter, Resequencer.
/// Throws AmbiguityError for unresolved ambiguous mappings and UnsatisfiableAdaptation naming
/// the first leaf that nothing can supply.
AdapterSpec select_patterns(const mapping::MappingReport& report, const mapping::InterfaceSpec& consumer,
                            const mapping::InterfaceSpec& provider, const ProtocolSpec& consumer_protocol,
                            const ProtocolSpec& provider_protocol);

struct EmittedAdapter {
    std::string artifact;
    /// One line per pattern instance, one per path-map entry it consumes.
    std::string report;
};

EmittedAdapter emit_adapter(const AdapterSpec& spec);
Json to_json(const AdapterSpec& spec);
AdapterSpec adapter_from_json(const Json& value);

/// A service bound to a role, restricted to the operations it exchanges with one CD.
struct Attachment {
    std::string role;
    std::string cd;
    ServiceDescription service;
    mapping::InterfaceSpec cd_view;
    ProtocolSpec cd_protocol;

    /// The side that sends in the forward flow.
    bool service_is_consumer() const;
};

/// Operations identical to one CD's operation belong to that CD; any other operation goes to
/// every CD of the role that has an operation of the opposite direction.
std::vector<Attachment> attachments(const ChoreographySpec& choreo, const std::vector<CDSpec>& cds,
                                    const std::map<std::string, ServiceDescription>& bindings);

AdapterSpec select_patterns(const mapping::MappingReport& report, const Attachment& attachment);

} // namespace eipsynth::synthesis
