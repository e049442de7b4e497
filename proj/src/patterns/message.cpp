#include "eipsynth/patterns/message.hpp"

#include <openssl/sha.h>

#include <cstdio>
#include <regex>

#include "eipsynth/errors.hpp"

namespace eipsynth::patterns {

using schema::FieldPath;
using schema::PrimitiveKind;

namespace {

bool is_decimal(const std::string& s)
{
    static const std::regex pattern(R"(-?[0-9]+(\.[0-9]+)?)");
    return std::regex_match(s, pattern);
}

bool is_date(const std::string& s)
{
    static const std::regex pattern(R"([0-9]{4}-[0-9]{2}-[0-9]{2})");
    if (!std::regex_match(s, pattern))
        return false;
    int y = std::stoi(s.substr(0, 4));
    int m = std::stoi(s.substr(5, 2));
    int d = std::stoi(s.substr(8, 2));
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1)
        return false;
    bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return d <= days[m - 1] + (m == 2 && leap ? 1 : 0);
}

void validate_record(const schema::TypeNode& node, const Json& value, const std::string& where)
{
    if (!value.is_object())
        throw InvariantViolation("payload: " + where + " must be an object");
    for (const auto& field : node.fields()) {
        auto child = where.empty() ? field.name : where + "." + field.name;
        auto it = value.find(field.name);
        if (it == value.end())
            throw InvariantViolation("payload: missing " + child);
        if (field.node.is_record())
            validate_record(field.node, *it, child);
        else if (!value_has_kind(*it, field.node.kind()))
            throw InvariantViolation("payload: " + child + " is not a " + std::string(to_string(field.node.kind())));
    }
    if (value.size() != node.fields().size())
        throw InvariantViolation("payload: unexpected member in " + (where.empty() ? std::string("root") : where));
}

} // namespace

bool value_has_kind(const Json& value, PrimitiveKind kind)
{
    switch (kind) {
    case PrimitiveKind::String: return value.is_string();
    case PrimitiveKind::Int: return value.is_number_integer();
    case PrimitiveKind::Boolean: return value.is_boolean();
    case PrimitiveKind::Decimal: return value.is_string() && is_decimal(value.get<std::string>());
    case PrimitiveKind::Date: return value.is_string() && is_date(value.get<std::string>());
    }
    return false;
}

void validate_payload(const schema::MessageSchema& schema, const Json& payload)
{
    try {
        validate_record(schema.root(), payload, "");
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(schema.qname().str() + " " + e.what());
    }
}

const Json* leaf_at(const Json& payload, const FieldPath& path)
{
    const Json* node = &payload;
    for (const auto& segment : path.segments) {
        if (!node->is_object())
            return nullptr;
        auto it = node->find(segment);
        if (it == node->end())
            return nullptr;
        node = &*it;
    }
    return node->is_object() ? nullptr : node;
}

void set_leaf(Json& payload, const FieldPath& path, Json value)
{
    Json* node = &payload;
    for (const auto& segment : path.segments) {
        if (node->is_null())
            *node = Json::object();
        node = &(*node)[segment];
    }
    *node = std::move(value);
}

std::string payload_digest(const Json& payload)
{
    auto text = payload.dump();
    unsigned char hash[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(), hash);
    std::string out;
    char buf[3];
    for (int i = 0; i < 8; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", hash[i]);
        out += buf;
    }
    return out;
}

void Channel::push(RuntimeMessage message)
{
    if (full())
        throw ConfigurationError("channel " + name_ + " is at capacity " + std::to_string(*capacity_));
    queue_.push_back(std::move(message));
}

RuntimeMessage Channel::pop()
{
    if (queue_.empty())
        throw Error("channel " + name_ + " is empty");
    auto m = std::move(queue_.front());
    queue_.pop_front();
    return m;
}

} // namespace eipsynth::patterns
