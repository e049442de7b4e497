#include "eipsynth/schema/types.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "eipsynth/errors.hpp"

namespace eipsynth::schema {

namespace {

void collect_leaves(const TypeNode& node, std::vector<std::string>& prefix, std::vector<Leaf>& out)
{
    for (const auto& field : node.fields()) {
        prefix.push_back(field.name);
        if (field.node.is_record())
            collect_leaves(field.node, prefix, out);
        else
            out.push_back(Leaf{FieldPath{prefix}, field.node.kind()});
        prefix.pop_back();
    }
}

std::vector<std::string> split_dots(std::string_view text)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto dot = text.find('.', start);
        parts.emplace_back(text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (dot == std::string_view::npos)
            break;
        start = dot + 1;
    }
    return parts;
}

} // namespace

std::string_view to_string(PrimitiveKind kind) noexcept
{
    switch (kind) {
    case PrimitiveKind::String: return "string";
    case PrimitiveKind::Int: return "int";
    case PrimitiveKind::Boolean: return "boolean";
    case PrimitiveKind::Decimal: return "decimal";
    case PrimitiveKind::Date: return "date";
    }
    return "?";
}

std::optional<PrimitiveKind> kind_from_string(std::string_view name) noexcept
{
    if (name == "string") return PrimitiveKind::String;
    if (name == "int") return PrimitiveKind::Int;
    if (name == "boolean") return PrimitiveKind::Boolean;
    if (name == "decimal") return PrimitiveKind::Decimal;
    if (name == "date") return PrimitiveKind::Date;
    return std::nullopt;
}

bool is_identifier(std::string_view text) noexcept
{
    if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front())))
        return false;
    return std::all_of(text.begin(), text.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

TypeNode TypeNode::primitive(PrimitiveKind kind)
{
    return TypeNode(kind);
}

TypeNode TypeNode::record(std::vector<FieldDecl> fields)
{
    std::set<std::string> seen;
    for (const auto& f : fields) {
        if (!is_identifier(f.name))
            throw InvariantViolation("invalid field name '" + f.name + "'");
        if (!seen.insert(f.name).second)
            throw InvariantViolation("duplicate field name '" + f.name + "'");
    }
    return TypeNode(std::move(fields));
}

PrimitiveKind TypeNode::kind() const
{
    if (is_record())
        throw std::logic_error("kind() on a record node");
    return std::get<PrimitiveKind>(value_);
}

const std::vector<FieldDecl>& TypeNode::fields() const
{
    if (!is_record())
        throw std::logic_error("fields() on a primitive node");
    return std::get<Fields>(value_);
}

std::size_t TypeNode::leaf_count() const noexcept
{
    if (!is_record())
        return 1;
    std::size_t n = 0;
    for (const auto& f : std::get<Fields>(value_))
        n += f.node.leaf_count();
    return n;
}

bool operator==(const TypeNode& lhs, const TypeNode& rhs)
{
    return lhs.value_ == rhs.value_;
}

FieldPath FieldPath::parse(std::string_view text)
{
    FieldPath path{split_dots(text)};
    for (const auto& s : path.segments)
        if (!is_identifier(s))
            throw ParseError("invalid field path '" + std::string(text) + "'");
    return path;
}

std::string FieldPath::str() const
{
    std::string out;
    for (const auto& s : segments) {
        if (!out.empty())
            out += '.';
        out += s;
    }
    return out;
}

QName QName::parse(std::string_view text)
{
    auto parts = split_dots(text);
    if (parts.size() != 3)
        throw ParseError("qualified name must be service.operation.message: '" + std::string(text) + "'");
    for (const auto& p : parts)
        if (!is_identifier(p))
            throw ParseError("invalid qualified name '" + std::string(text) + "'");
    return QName{parts[0], parts[1], parts[2]};
}

std::string QName::str() const
{
    return service + "." + operation + "." + message;
}

MessageSchema::MessageSchema(QName qname, TypeNode root) : qname_(std::move(qname)), root_(std::move(root))
{
    for (const auto* part : {&qname_.service, &qname_.operation, &qname_.message})
        if (!is_identifier(*part))
            throw InvariantViolation("invalid qualified name '" + qname_.str() + "'");
    if (!root_.is_record())
        throw InvariantViolation("message root must be a record: " + qname_.str());
    std::vector<std::string> prefix;
    collect_leaves(root_, prefix, leaves_);
    if (leaves_.empty())
        throw InvariantViolation("schema defines no leaves: " + qname_.str());
}

std::optional<PrimitiveKind> MessageSchema::kind_at(const FieldPath& path) const
{
    for (const auto& leaf : leaves_)
        if (leaf.path == path)
            return leaf.kind;
    return std::nullopt;
}

} // namespace eipsynth::schema
