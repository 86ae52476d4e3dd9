#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "vulmatch/errors.hpp"

namespace vulmatch {

// ordered_json keeps insertion order so every writer in the toolkit emits a
// canonical, diff-able key order.
using json = nlohmann::ordered_json;

json load_json_file(const std::string& path);

// Canonical serialization: 2-space indent, LF, trailing newline.
std::string dump_canonical(const json& doc);

// Whole-file replacement semantics: write to a temp file in the same
// directory, then rename over the target.
void save_json_file(const std::string& path, const json& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Schema accessors; `where` is a path-like context string used in errors.
const json& require_member(const json& obj, const char* key, const std::string& where);
std::string require_string(const json& obj, const char* key, const std::string& where);
std::int64_t require_int(const json& obj, const char* key, const std::string& where);
const json& require_array(const json& obj, const char* key, const std::string& where);

// Code addresses travel as lowercase hex strings ("0x401000").
std::uint64_t parse_address(const std::string& text, const std::string& where);
std::string format_address(std::uint64_t address);

} // namespace vulmatch
