#include "eipsynth/errors.hpp"
#include "eipsynth/schema/formats.hpp"

namespace eipsynth::schema {

namespace {

MessageSchema schema_from_object(const OrderedJson& object, const std::string& context)
{
    auto qname_text = require_string(object, "qname", context);
    QName qname = QName::parse(qname_text);
    const auto& root = require_member(object, "root", context);
    return MessageSchema(qname, record_from_json(root, qname_text));
}

Json compact_fields(const TypeNode& record)
{
    Json fields = Json::array();
    for (const auto& f : record.fields()) {
        if (f.node.is_record())
            fields.push_back(Json::array({f.name, compact_fields(f.node)}));
        else
            fields.push_back(Json::array({f.name, std::string(to_string(f.node.kind()))}));
    }
    return fields;
}

TypeNode record_from_compact(const Json& fields)
{
    if (!fields.is_array())
        throw ParseError("compact schema: fields must be an array");
    std::vector<FieldDecl> decls;
    for (const auto& entry : fields) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string())
            throw ParseError("compact schema: malformed field entry");
        auto name = entry[0].get<std::string>();
        if (entry[1].is_string()) {
            auto kind = kind_from_string(entry[1].get<std::string>());
            if (!kind)
                throw UnsupportedConstruct("type " + entry[1].get<std::string>());
            decls.push_back(FieldDecl{name, TypeNode::primitive(*kind)});
        } else {
            decls.push_back(FieldDecl{name, record_from_compact(entry[1])});
        }
    }
    return TypeNode::record(std::move(decls));
}

} // namespace

TypeNode record_from_json(const OrderedJson& object, const std::string& context)
{
    if (!object.is_object())
        throw ParseError(context + ": record must be a JSON object");
    std::vector<FieldDecl> fields;
    for (const auto& [name, value] : object.items()) {
        if (value.is_string()) {
            auto kind = kind_from_string(value.get<std::string>());
            if (!kind)
                throw UnsupportedConstruct("type " + value.get<std::string>() + " (" + context + "." + name + ")");
            fields.push_back(FieldDecl{name, TypeNode::primitive(*kind)});
        } else if (value.is_object()) {
            if (value.empty())
                throw ParseError(context + "." + name + ": empty record");
            fields.push_back(FieldDecl{name, record_from_json(value, context + "." + name)});
        } else {
            throw ParseError(context + "." + name + ": expected a kind name or a nested object");
        }
    }
    return TypeNode::record(std::move(fields));
}

OrderedJson record_to_json(const TypeNode& record)
{
    OrderedJson out = OrderedJson::object();
    for (const auto& f : record.fields()) {
        if (f.node.is_record())
            out[f.name] = record_to_json(f.node);
        else
            out[f.name] = std::string(to_string(f.node.kind()));
    }
    return out;
}

std::vector<MessageSchema> parse_schema_json(std::string_view text)
{
    OrderedJson doc = parse_json_strict(text, "schema");
    std::vector<MessageSchema> out;
    if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i)
            out.push_back(schema_from_object(doc[i], "schema[" + std::to_string(i) + "]"));
    } else {
        out.push_back(schema_from_object(doc, "schema"));
    }
    return out;
}

std::string to_schema_json(const MessageSchema& schema)
{
    OrderedJson doc = OrderedJson::object();
    doc["qname"] = schema.qname().str();
    doc["root"] = record_to_json(schema.root());
    return doc.dump(2) + "\n";
}

Json to_compact(const MessageSchema& schema)
{
    return Json{{"qname", schema.qname().str()}, {"fields", compact_fields(schema.root())}};
}

MessageSchema from_compact(const Json& value)
{
    if (!value.is_object() || !value.contains("qname") || !value.contains("fields"))
        throw ParseError("compact schema: expected {qname, fields}");
    return MessageSchema(QName::parse(value.at("qname").get<std::string>()), record_from_compact(value.at("fields")));
}

} // namespace eipsynth::schema
