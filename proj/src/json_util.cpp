#include "eipsynth/json_util.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "eipsynth/errors.hpp"

namespace eipsynth {

OrderedJson parse_json_strict(std::string_view text, const std::string& origin)
{
    std::vector<std::set<std::string>> keys;
    std::string duplicate;
    auto callback = [&](int, OrderedJson::parse_event_t event, OrderedJson& parsed) {
        switch (event) {
        case OrderedJson::parse_event_t::object_start:
            keys.emplace_back();
            break;
        case OrderedJson::parse_event_t::object_end:
            keys.pop_back();
            break;
        case OrderedJson::parse_event_t::key: {
            auto key = parsed.get<std::string>();
            if (!keys.back().insert(key).second && duplicate.empty())
                duplicate = key;
            break;
        }
        default:
            break;
        }
        return true;
    };
    OrderedJson doc;
    try {
        doc = OrderedJson::parse(text.begin(), text.end(), callback);
    } catch (const OrderedJson::parse_error& e) {
        // byte offset -> line/column
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(origin + ": " + e.what(), line, column);
    }
    if (!duplicate.empty())
        throw InvariantViolation(origin + ": duplicate key '" + duplicate + "'");
    return doc;
}

std::string canonical_dump(const Json& value)
{
    return value.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

const OrderedJson& require_member(const OrderedJson& object, const char* key, const std::string& context)
{
    if (!object.is_object())
        throw ParseError(context + ": expected an object");
    auto it = object.find(key);
    if (it == object.end())
        throw ParseError(context + ": missing '" + key + "'");
    return *it;
}

std::string require_string(const OrderedJson& object, const char* key, const std::string& context)
{
    const auto& value = require_member(object, key, context);
    if (!value.is_string())
        throw ParseError(context + ": '" + key + "' must be a string");
    return value.get<std::string>();
}

} // namespace eipsynth
