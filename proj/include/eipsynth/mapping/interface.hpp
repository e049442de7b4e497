#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eipsynth/json_util.hpp"
#include "eipsynth/schema/types.hpp"

namespace eipsynth::mapping {

enum class Direction { Provided, Required };
enum class Mep { OneWay, RequestResponse };

struct OperationSpec {
    std::string name;
    Direction direction = Direction::Provided;
    Mep mep = Mep::OneWay;
    schema::MessageSchema input;
    std::optional<schema::MessageSchema> output;
};

struct InterfaceSpec {
    std::string service_name;
    std::vector<OperationSpec> operations;

    /// Throws InvariantViolation: duplicate operation names, output presence vs MEP,
    /// message qnames not of the form serviceName.operation.message.
    void validate() const;

    const OperationSpec* find(const std::string& operation) const;
    /// Input then output message of every operation, in declaration order.
    std::vector<const schema::MessageSchema*> messages() const;
    const schema::MessageSchema* message(const schema::QName& qname) const;
};

/// Interface document:
/// `{"serviceName": S, "operations": [{"name", "direction", "mep", "input": M, "output": M}]}`
/// where M is `{"message": name, "root": {...}}` or `{"message": name, "xsd": path}`;
/// xsd paths are resolved against `base_dir`.
InterfaceSpec interface_from_json(const OrderedJson& doc, const std::filesystem::path& base_dir);
InterfaceSpec load_interface(const std::filesystem::path& path);

/// Message schema reference as used by interface and choreography documents.
schema::MessageSchema message_from_json(const OrderedJson& spec, const schema::QName& qname,
                                        const std::filesystem::path& base_dir);

} // namespace eipsynth::mapping
