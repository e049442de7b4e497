#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "eipsynth/json_util.hpp"
#include "eipsynth/schema/types.hpp"

namespace eipsynth::schema {

/// Parses the XML Schema subset (schema / complexType / sequence / element).
/// Every top-level complexType or element becomes one field of the message root,
/// in document order. The qname is not part of the XSD text and comes from the caller.
/// Throws ParseError (with line/column) on malformed XML and UnsupportedConstruct for
/// anything outside the subset, including unknown built-in types and recursive type references.
std::vector<MessageSchema> parse_xsd_subset(std::string_view text, const QName& qname);

std::string to_xsd(const MessageSchema& schema);

/// `{ "qname": "Svc.op.msg", "root": { "<field>": "<kind>" | { ...nested... } } }`
/// or an array of such objects.
std::vector<MessageSchema> parse_schema_json(std::string_view text);
std::string to_schema_json(const MessageSchema& schema);

/// Root-object form used inside interface and choreography documents.
TypeNode record_from_json(const OrderedJson& object, const std::string& context);
OrderedJson record_to_json(const TypeNode& record);

/// Order-preserving encoding for canonical (sorted-key) artifacts:
/// `{"qname": ..., "fields": [["name", "kind" | [...nested...]], ...]}`.
Json to_compact(const MessageSchema& schema);
MessageSchema from_compact(const Json& value);

} // namespace eipsynth::schema
