#pragma once

#include <string>
#include <vector>

#include "vulmatch/errors.hpp"

namespace vulmatch {

inline constexpr const char* kNoInlineTag = "__attribute__((noinline))";

struct FunctionSpan {
    std::string name;
    int start_line = 0;      // 1-based line of the function name token
    int signature_line = 0;  // 1-based line where the definition header begins
};

// Token-level scan over comment/string-stripped text. A definition is the
// name followed by a parameter list followed by '{' before any ';'.
std::vector<FunctionSpan> locate_function_definitions(const std::string& source_text,
                                                      const std::vector<std::string>& names);

struct TagResult {
    std::string text;
    std::vector<std::string> skipped;  // names already tagged, left untouched
};

// Inserts the no-inline tag plus one space immediately before each span's
// definition header. All other bytes are unchanged.
TagResult insert_noinline_tags(const std::string& source_text,
                               const std::vector<FunctionSpan>& spans);

} // namespace vulmatch
