#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>

#include "eipsynth/json_util.hpp"
#include "eipsynth/schema/types.hpp"

namespace eipsynth::patterns {

struct Headers {
    std::string correlation_id;
    std::optional<std::size_t> sequence_index;
    std::string sender;
    std::uint64_t timestamp = 0;

    friend bool operator==(const Headers&, const Headers&) = default;
};

struct RuntimeMessage {
    schema::QName qname;
    /// Nested object mirroring the schema; string, int and boolean leaves use the JSON types,
    /// decimal and date leaves are strings (`-12.50`, `2024-02-29`).
    Json payload;
    Headers headers;

    friend bool operator==(const RuntimeMessage&, const RuntimeMessage&) = default;
};

bool value_has_kind(const Json& value, schema::PrimitiveKind kind);

/// Throws InvariantViolation unless every leaf is present with the right kind and no
/// other member exists.
void validate_payload(const schema::MessageSchema& schema, const Json& payload);

/// nullptr when the path does not resolve.
const Json* leaf_at(const Json& payload, const schema::FieldPath& path);
void set_leaf(Json& payload, const schema::FieldPath& path, Json value);

/// First 16 hex digits of SHA-256 over the compact sorted-key dump.
std::string payload_digest(const Json& payload);

class Channel {
public:
    explicit Channel(std::string name, std::optional<std::size_t> capacity = std::nullopt)
        : name_(std::move(name)), capacity_(capacity)
    {
    }

    const std::string& name() const noexcept { return name_; }
    bool empty() const noexcept { return queue_.empty(); }
    std::size_t size() const noexcept { return queue_.size(); }
    bool full() const noexcept { return capacity_ && queue_.size() >= *capacity_; }

    /// Throws ConfigurationError when the channel is at capacity.
    void push(RuntimeMessage message);
    RuntimeMessage pop();

private:
    std::string name_;
    std::optional<std::size_t> capacity_;
    std::deque<RuntimeMessage> queue_;
};

} // namespace eipsynth::patterns
