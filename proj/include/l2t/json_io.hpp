#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace l2t {

using Json = nlohmann::json;

// Serializes with floating-point numbers printed as %.17g so that every
// double round-trips bit-exactly. Output is deterministic (object keys in
// nlohmann's sorted order).
std::string dump_json(const Json& j, int indent = 2);

// Throws FormatError naming the file on I/O or parse failure.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Field accessors that throw FormatError naming `context` and the key.
const Json& require_key(const Json& obj, const std::string& key, const std::string& context);
[[noreturn]] void throw_bad_field(const std::string& context, const std::string& key);

template <typename T>
T get_field(const Json& obj, const std::string& key, const std::string& context) {
    const Json& v = require_key(obj, key, context);
    try {
        return v.get<T>();
    } catch (const Json::exception&) {
        throw_bad_field(context, key);
    }
}

void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context);

}  // namespace l2t
