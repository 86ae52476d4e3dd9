#include "vulmatch/json_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace vulmatch {

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        raise(ErrorCode::SchemaError, path + ": " + e.what());
    }
    return doc;
}

std::string dump_canonical(const json& doc) {
    return doc.dump(2) + "\n";
}

void save_json_file(const std::string& path, const json& doc) {
    write_text_file(path, dump_canonical(doc));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            raise(ErrorCode::IoError, "cannot open '" + tmp + "' for writing");
        }
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) {
            raise(ErrorCode::IoError, "short write to '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        raise(ErrorCode::IoError, "cannot rename '" + tmp + "' to '" + path + "': " + std::strerror(errno));
    }
}

const json& require_member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) {
        raise(ErrorCode::SchemaError, where + ": expected object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        raise(ErrorCode::SchemaError, where + ": missing field '" + key + "'");
    }
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const json& value = require_member(obj, key, where);
    if (!value.is_string()) {
        raise(ErrorCode::SchemaError, where + "/" + key + ": expected string");
    }
    return value.get<std::string>();
}

std::int64_t require_int(const json& obj, const char* key, const std::string& where) {
    const json& value = require_member(obj, key, where);
    if (!value.is_number_integer()) {
        raise(ErrorCode::SchemaError, where + "/" + key + ": expected integer");
    }
    return value.get<std::int64_t>();
}

const json& require_array(const json& obj, const char* key, const std::string& where) {
    const json& value = require_member(obj, key, where);
    if (!value.is_array()) {
        raise(ErrorCode::SchemaError, where + "/" + key + ": expected array");
    }
    return value;
}

std::uint64_t parse_address(const std::string& text, const std::string& where) {
    if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
        raise(ErrorCode::SchemaError, where + ": address '" + text + "' is not of the form 0x...");
    }
    std::uint64_t value = 0;
    for (std::size_t i = 2; i < text.size(); ++i) {
        char c = text[i];
        int digit;
        if (c >= '0' && c <= '9') {
            digit = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            digit = c - 'a' + 10;
        } else if (c >= 'A' && c <= 'F') {
            digit = c - 'A' + 10;
        } else {
            raise(ErrorCode::SchemaError, where + ": address '" + text + "' has a non-hex digit");
        }
        if (value > (~std::uint64_t{0}) >> 4) {
            raise(ErrorCode::SchemaError, where + ": address '" + text + "' overflows 64 bits");
        }
        value = (value << 4) | static_cast<std::uint64_t>(digit);
    }
    return value;
}

std::string format_address(std::uint64_t address) {
    char buf[2 + 16 + 1];
    std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(address));
    return buf;
}

} // namespace vulmatch
