#pragma once

#include <map>
#include <string>
#include <vector>

#include "vulmatch/json_io.hpp"

namespace vulmatch {

struct EditOp {
    enum class Kind { Equal, Delete, Insert };
    Kind kind = Kind::Equal;
    int count = 0;
};

// Minimal line-level edit script. Canonical form: runs are maximal, no
// zero-count runs, and within a changed region deletions precede
// insertions.
struct EditScript {
    std::vector<EditOp> ops;

    int delete_total() const;
    int insert_total() const;
    int equal_total() const;
};

struct NumberedLine {
    int line = 0;  // 1-based index in its own file
    std::string text;
};

struct PatchSite {
    enum class Kind { Add, Delete, Change };
    Kind kind = Kind::Add;
    std::vector<NumberedLine> old_lines;
    std::vector<NumberedLine> new_lines;
};

const char* patch_site_kind_name(PatchSite::Kind kind);

// Myers shortest edit script; whitespace-sensitive line comparison.
EditScript diff_lines(const std::vector<std::string>& old_lines,
                      const std::vector<std::string>& new_lines);

// Replays `script` over `old_lines`, drawing inserted content from
// `new_lines`; throws ScriptMismatch when the script does not fit.
std::vector<std::string> apply_edit_script(const EditScript& script,
                                           const std::vector<std::string>& old_lines,
                                           const std::vector<std::string>& new_lines);

// One site per maximal contiguous run of non-Equal ops.
std::vector<PatchSite> classify_sites(const EditScript& script,
                                      const std::vector<std::string>& old_lines,
                                      const std::vector<std::string>& new_lines);

// Parses standard unified-diff hunks into patch sites, so upstream diff
// output can be ingested verbatim.
std::vector<PatchSite> sites_from_unified_diff(const std::string& diff_text);

// Old-file line -> new-file line for lines untouched by the script.
std::map<int, int> line_translation_old_to_new(const EditScript& script);
// New-file line -> old-file line, the inverse view.
std::map<int, int> line_translation_new_to_old(const EditScript& script);

std::vector<std::string> split_lines(const std::string& text);

json sites_to_json(const std::vector<PatchSite>& sites);
std::vector<PatchSite> sites_from_json(const json& doc, const std::string& where = "sites");

} // namespace vulmatch
