#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace eipsynth::schema {

enum class PrimitiveKind { String, Int, Boolean, Decimal, Date };

std::string_view to_string(PrimitiveKind kind) noexcept;
std::optional<PrimitiveKind> kind_from_string(std::string_view name) noexcept;

/// Letters, digits and underscore, starting with a letter.
bool is_identifier(std::string_view text) noexcept;

struct FieldDecl;

/// Structural type of a message part: either a primitive leaf or an ordered record.
class TypeNode {
public:
    static TypeNode primitive(PrimitiveKind kind);
    /// Throws InvariantViolation on duplicate or malformed field names.
    static TypeNode record(std::vector<FieldDecl> fields);

    bool is_record() const noexcept { return std::holds_alternative<Fields>(value_); }
    PrimitiveKind kind() const;
    const std::vector<FieldDecl>& fields() const;

    std::size_t leaf_count() const noexcept;

    friend bool operator==(const TypeNode& lhs, const TypeNode& rhs);

private:
    using Fields = std::vector<FieldDecl>;
    explicit TypeNode(std::variant<PrimitiveKind, Fields> value) : value_(std::move(value)) {}

    std::variant<PrimitiveKind, Fields> value_;
};

struct FieldDecl {
    std::string name;
    TypeNode node;

    friend bool operator==(const FieldDecl&, const FieldDecl&) = default;
};

/// Dot-separated path from a message root to one of its nodes, e.g. `product.id`.
struct FieldPath {
    std::vector<std::string> segments;

    static FieldPath parse(std::string_view text);
    std::string str() const;
    const std::string& leaf_name() const { return segments.back(); }

    friend auto operator<=>(const FieldPath&, const FieldPath&) = default;
};

/// `service.operation.message`
struct QName {
    std::string service;
    std::string operation;
    std::string message;

    static QName parse(std::string_view text);
    std::string str() const;

    friend auto operator<=>(const QName&, const QName&) = default;
};

struct Leaf {
    FieldPath path;
    PrimitiveKind kind;

    friend bool operator==(const Leaf&, const Leaf&) = default;
};

class MessageSchema {
public:
    /// Throws InvariantViolation unless root is a record with at least one leaf.
    MessageSchema(QName qname, TypeNode root);

    const QName& qname() const noexcept { return qname_; }
    const TypeNode& root() const noexcept { return root_; }

    /// Leaves in document order.
    const std::vector<Leaf>& leaves() const noexcept { return leaves_; }
    std::optional<PrimitiveKind> kind_at(const FieldPath& path) const;
    bool has_leaf(const FieldPath& path) const { return kind_at(path).has_value(); }

    /// Same structure regardless of qname.
    bool same_structure(const MessageSchema& other) const { return root_ == other.root_; }

    friend bool operator==(const MessageSchema& lhs, const MessageSchema& rhs)
    {
        return lhs.qname_ == rhs.qname_ && lhs.root_ == rhs.root_;
    }

private:
    QName qname_;
    TypeNode root_;
    std::vector<Leaf> leaves_;
};

} // namespace eipsynth::schema
