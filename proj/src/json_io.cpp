#include "l2t/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "l2t/errors.hpp"

namespace l2t {

namespace {

void put_indent(std::string& out, int indent, int depth) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void dump_value(const Json& j, std::string& out, int indent, int depth) {
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                put_indent(out, indent, depth + 1);
                out += Json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                dump_value(it.value(), out, indent, depth + 1);
            }
            put_indent(out, indent, depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Numeric arrays stay on one line; they are long and uninteresting.
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); });
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += flat && indent >= 0 ? ", " : ",";
                first = false;
                if (!flat) put_indent(out, indent, depth + 1);
                dump_value(e, out, indent, depth + 1);
            }
            if (!flat) put_indent(out, indent, depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_value(j, out, indent, 0);
    out += '\n';
    return out;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string() + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        throw FormatError(path.string() + ": invalid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

const Json& require_key(const Json& obj, const std::string& key, const std::string& context) {
    if (!obj.is_object()) throw FormatError(context + ": expected a JSON object");
    auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(context + ": missing field \"" + key + "\"");
    return *it;
}

void throw_bad_field(const std::string& context, const std::string& key) {
    throw FormatError(context + ": field \"" + key + "\" has the wrong type or value");
}

void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw FormatError(context + ": unknown field \"" + it.key() + "\"");
    }
}

}  // namespace l2t
