#pragma once

#include <map>
#include <string>
#include <vector>

#include "eipsynth/json_util.hpp"
#include "eipsynth/mapping/hints.hpp"
#include "eipsynth/mapping/interface.hpp"
#include "eipsynth/schema/subtyping.hpp"

namespace eipsynth::mapping {

enum class MappingStatus { Inferred, Confirmed, Rejected, Ambiguous };

std::string_view to_string(MappingStatus status) noexcept;

/// `sub` is contained in `sup`; correspondences run from sub leaves to sup leaves.
struct DataMapping {
    schema::QName sub;
    schema::QName sup;
    std::vector<schema::Correspondence> correspondences;
    MappingStatus status = MappingStatus::Inferred;
    /// Metadata only; never gates a mapping.
    schema::Score operation_similarity;

    friend bool operator==(const DataMapping&, const DataMapping&) = default;
};

/// Messages bound one-to-one without inference: same operation, same message name, same tree.
struct IdenticalPair {
    schema::QName service_message;
    schema::QName counterpart_message;

    friend auto operator<=>(const IdenticalPair&, const IdenticalPair&) = default;
};

/// Unresolved tie between equally scored assignments.
struct Ambiguity {
    schema::QName sub;
    schema::QName sup;
    /// Sub leaves whose target (or inclusion) differs between optimal assignments.
    std::vector<schema::FieldPath> sources;
    std::size_t optimal_count = 0;
    std::vector<std::vector<schema::Correspondence>> alternatives;

    friend bool operator==(const Ambiguity&, const Ambiguity&) = default;
};

struct MappingReport {
    std::string service;
    std::string counterpart;
    std::vector<DataMapping> mappings;
    /// Non-identical messages of either side with no non-rejected mapping.
    std::vector<schema::QName> unmapped;
    std::vector<IdenticalPair> identical;
    std::vector<Ambiguity> ambiguities;
    /// Every message of both interfaces, by qname.
    std::map<schema::QName, schema::MessageSchema> schemas;

    const DataMapping* find(const schema::QName& sub, const schema::QName& sup) const;
    const schema::MessageSchema& schema_of(const schema::QName& qname) const;
    bool is_identical(const schema::QName& qname) const;

    /// Sorts every list; recomputes `unmapped` from the mappings.
    void normalize();

    friend bool operator==(const MappingReport&, const MappingReport&) = default;
};

Json to_json(const MappingReport& report);
MappingReport report_from_json(const Json& value);

} // namespace eipsynth::mapping
