#include "vulmatch/diffcore.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>

namespace vulmatch {

namespace {

// Forward Myers over the stripped middle; returns one move per step:
// '=' diagonal, 'D' line removed from a, 'I' line inserted from b.
std::string myers_moves(const std::vector<std::string>& a, std::size_t a_off, int n,
                        const std::vector<std::string>& b, std::size_t b_off, int m) {
    if (n == 0) {
        return std::string(static_cast<std::size_t>(m), 'I');
    }
    if (m == 0) {
        return std::string(static_cast<std::size_t>(n), 'D');
    }

    const int max_d = n + m;
    const int offset = max_d;
    std::vector<int> v(static_cast<std::size_t>(2 * max_d + 1), 0);
    std::vector<std::vector<int>> trace;  // v snapshot before each depth
    int final_d = -1;

    for (int d = 0; d <= max_d && final_d < 0; ++d) {
        trace.push_back(v);
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1])) {
                x = v[offset + k + 1];
            } else {
                x = v[offset + k - 1] + 1;
            }
            int y = x - k;
            while (x < n && y < m && a[a_off + x] == b[b_off + y]) {
                ++x;
                ++y;
            }
            v[offset + k] = x;
            if (x >= n && y >= m) {
                final_d = d;
                break;
            }
        }
    }
    assert(final_d >= 0);

    std::string moves;
    moves.reserve(static_cast<std::size_t>(n + m));
    int x = n;
    int y = m;
    for (int d = final_d; d > 0; --d) {
        const std::vector<int>& pv = trace[static_cast<std::size_t>(d)];
        const int k = x - y;
        int prev_k;
        if (k == -d || (k != d && pv[offset + k - 1] < pv[offset + k + 1])) {
            prev_k = k + 1;
        } else {
            prev_k = k - 1;
        }
        const int prev_x = pv[offset + prev_k];
        const int prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            moves.push_back('=');
            --x;
            --y;
        }
        if (prev_k == k + 1) {
            moves.push_back('I');
            --y;
        } else {
            moves.push_back('D');
            --x;
        }
        assert(x == prev_x && y == prev_y);
    }
    while (x > 0 && y > 0) {
        moves.push_back('=');
        --x;
        --y;
    }
    std::reverse(moves.begin(), moves.end());
    return moves;
}

void push_op(std::vector<EditOp>& ops, EditOp::Kind kind, int count) {
    if (count <= 0) {
        return;
    }
    if (!ops.empty() && ops.back().kind == kind) {
        ops.back().count += count;
        return;
    }
    ops.push_back(EditOp{kind, count});
}

// Canonical runs: deletions before insertions inside every changed region.
EditScript script_from_moves(const std::string& moves) {
    EditScript script;
    std::size_t i = 0;
    while (i < moves.size()) {
        if (moves[i] == '=') {
            std::size_t j = i;
            while (j < moves.size() && moves[j] == '=') {
                ++j;
            }
            push_op(script.ops, EditOp::Kind::Equal, static_cast<int>(j - i));
            i = j;
        } else {
            int deletes = 0;
            int inserts = 0;
            while (i < moves.size() && moves[i] != '=') {
                if (moves[i] == 'D') {
                    ++deletes;
                } else {
                    ++inserts;
                }
                ++i;
            }
            push_op(script.ops, EditOp::Kind::Delete, deletes);
            push_op(script.ops, EditOp::Kind::Insert, inserts);
        }
    }
    return script;
}

} // namespace

int EditScript::delete_total() const {
    int total = 0;
    for (const EditOp& op : ops) {
        if (op.kind == EditOp::Kind::Delete) {
            total += op.count;
        }
    }
    return total;
}

int EditScript::insert_total() const {
    int total = 0;
    for (const EditOp& op : ops) {
        if (op.kind == EditOp::Kind::Insert) {
            total += op.count;
        }
    }
    return total;
}

int EditScript::equal_total() const {
    int total = 0;
    for (const EditOp& op : ops) {
        if (op.kind == EditOp::Kind::Equal) {
            total += op.count;
        }
    }
    return total;
}

const char* patch_site_kind_name(PatchSite::Kind kind) {
    switch (kind) {
    case PatchSite::Kind::Add: return "add";
    case PatchSite::Kind::Delete: return "delete";
    case PatchSite::Kind::Change: return "change";
    }
    return "?";
}

EditScript diff_lines(const std::vector<std::string>& old_lines,
                      const std::vector<std::string>& new_lines) {
    std::size_t prefix = 0;
    while (prefix < old_lines.size() && prefix < new_lines.size() &&
           old_lines[prefix] == new_lines[prefix]) {
        ++prefix;
    }
    std::size_t suffix = 0;
    while (suffix < old_lines.size() - prefix && suffix < new_lines.size() - prefix &&
           old_lines[old_lines.size() - 1 - suffix] == new_lines[new_lines.size() - 1 - suffix]) {
        ++suffix;
    }

    const int n = static_cast<int>(old_lines.size() - prefix - suffix);
    const int m = static_cast<int>(new_lines.size() - prefix - suffix);

    std::string moves(prefix, '=');
    moves += myers_moves(old_lines, prefix, n, new_lines, prefix, m);
    moves.append(suffix, '=');
    return script_from_moves(moves);
}

std::vector<std::string> apply_edit_script(const EditScript& script,
                                           const std::vector<std::string>& old_lines,
                                           const std::vector<std::string>& new_lines) {
    std::vector<std::string> out;
    std::size_t old_pos = 0;
    std::size_t new_pos = 0;
    for (const EditOp& op : script.ops) {
        if (op.count < 0) {
            raise(ErrorCode::ScriptMismatch, "negative run count");
        }
        const std::size_t count = static_cast<std::size_t>(op.count);
        switch (op.kind) {
        case EditOp::Kind::Equal:
            if (old_pos + count > old_lines.size() || new_pos + count > new_lines.size()) {
                raise(ErrorCode::ScriptMismatch, "equal run exceeds input length");
            }
            for (std::size_t i = 0; i < count; ++i) {
                if (old_lines[old_pos + i] != new_lines[new_pos + i]) {
                    raise(ErrorCode::ScriptMismatch,
                          "equal run covers differing lines at old line " +
                              std::to_string(old_pos + i + 1));
                }
                out.push_back(old_lines[old_pos + i]);
            }
            old_pos += count;
            new_pos += count;
            break;
        case EditOp::Kind::Delete:
            if (old_pos + count > old_lines.size()) {
                raise(ErrorCode::ScriptMismatch, "delete run exceeds old length");
            }
            old_pos += count;
            break;
        case EditOp::Kind::Insert:
            if (new_pos + count > new_lines.size()) {
                raise(ErrorCode::ScriptMismatch, "insert run exceeds new length");
            }
            for (std::size_t i = 0; i < count; ++i) {
                out.push_back(new_lines[new_pos + i]);
            }
            new_pos += count;
            break;
        }
    }
    if (old_pos != old_lines.size() || new_pos != new_lines.size()) {
        raise(ErrorCode::ScriptMismatch, "script does not consume both inputs exactly");
    }
    return out;
}

std::vector<PatchSite> classify_sites(const EditScript& script,
                                      const std::vector<std::string>& old_lines,
                                      const std::vector<std::string>& new_lines) {
    if (script.equal_total() + script.delete_total() != static_cast<int>(old_lines.size()) ||
        script.equal_total() + script.insert_total() != static_cast<int>(new_lines.size())) {
        raise(ErrorCode::ScriptMismatch, "script totals disagree with input lengths");
    }

    std::vector<PatchSite> sites;
    PatchSite current;
    bool open = false;
    auto flush = [&]() {
        if (!open) {
            return;
        }
        if (current.old_lines.empty()) {
            current.kind = PatchSite::Kind::Add;
        } else if (current.new_lines.empty()) {
            current.kind = PatchSite::Kind::Delete;
        } else {
            current.kind = PatchSite::Kind::Change;
        }
        sites.push_back(std::move(current));
        current = PatchSite{};
        open = false;
    };

    std::size_t old_pos = 0;
    std::size_t new_pos = 0;
    for (const EditOp& op : script.ops) {
        if (op.count <= 0) {
            continue;
        }
        const std::size_t count = static_cast<std::size_t>(op.count);
        switch (op.kind) {
        case EditOp::Kind::Equal:
            flush();
            old_pos += count;
            new_pos += count;
            break;
        case EditOp::Kind::Delete:
            for (std::size_t i = 0; i < count; ++i, ++old_pos) {
                current.old_lines.push_back({static_cast<int>(old_pos) + 1, old_lines[old_pos]});
            }
            open = true;
            break;
        case EditOp::Kind::Insert:
            for (std::size_t i = 0; i < count; ++i, ++new_pos) {
                current.new_lines.push_back({static_cast<int>(new_pos) + 1, new_lines[new_pos]});
            }
            open = true;
            break;
        }
    }
    flush();
    return sites;
}

std::map<int, int> line_translation_old_to_new(const EditScript& script) {
    std::map<int, int> out;
    int old_pos = 0;
    int new_pos = 0;
    for (const EditOp& op : script.ops) {
        switch (op.kind) {
        case EditOp::Kind::Equal:
            for (int i = 0; i < op.count; ++i) {
                out[old_pos + i + 1] = new_pos + i + 1;
            }
            old_pos += op.count;
            new_pos += op.count;
            break;
        case EditOp::Kind::Delete:
            old_pos += op.count;
            break;
        case EditOp::Kind::Insert:
            new_pos += op.count;
            break;
        }
    }
    return out;
}

std::map<int, int> line_translation_new_to_old(const EditScript& script) {
    std::map<int, int> out;
    for (const auto& [old_line, new_line] : line_translation_old_to_new(script)) {
        out[new_line] = old_line;
    }
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) {
        lines.push_back(std::move(current));
    }
    return lines;
}

std::vector<PatchSite> sites_from_unified_diff(const std::string& diff_text) {
    const std::vector<std::string> lines = split_lines(diff_text);
    std::vector<PatchSite> sites;
    PatchSite current;
    bool open = false;
    bool in_hunk = false;
    int old_line = 0;
    int new_line = 0;

    auto flush = [&]() {
        if (!open) {
            return;
        }
        if (current.old_lines.empty()) {
            current.kind = PatchSite::Kind::Add;
        } else if (current.new_lines.empty()) {
            current.kind = PatchSite::Kind::Delete;
        } else {
            current.kind = PatchSite::Kind::Change;
        }
        sites.push_back(std::move(current));
        current = PatchSite{};
        open = false;
    };

    for (const std::string& line : lines) {
        if (line.rfind("@@", 0) == 0) {
            flush();
            // @@ -a[,b] +c[,d] @@
            int a = 0;
            int c = 0;
            if (std::sscanf(line.c_str(), "@@ -%d", &a) != 1) {
                raise(ErrorCode::SchemaError, "malformed hunk header: " + line);
            }
            const std::size_t plus = line.find('+');
            if (plus == std::string::npos || std::sscanf(line.c_str() + plus, "+%d", &c) != 1) {
                raise(ErrorCode::SchemaError, "malformed hunk header: " + line);
            }
            old_line = a;
            new_line = c;
            in_hunk = true;
            continue;
        }
        if (!in_hunk) {
            continue;  // file headers and other preamble
        }
        if (line.rfind("--- ", 0) == 0 || line.rfind("+++ ", 0) == 0 || line.rfind("diff ", 0) == 0) {
            flush();
            in_hunk = false;
            continue;
        }
        if (!line.empty() && line[0] == '\\') {
            continue;  // "\ No newline at end of file"
        }
        if (!line.empty() && line[0] == '-') {
            current.old_lines.push_back({old_line++, line.substr(1)});
            open = true;
        } else if (!line.empty() && line[0] == '+') {
            current.new_lines.push_back({new_line++, line.substr(1)});
            open = true;
        } else {
            // context line (leading space or empty)
            flush();
            ++old_line;
            ++new_line;
        }
    }
    flush();
    return sites;
}

json sites_to_json(const std::vector<PatchSite>& sites) {
    json doc;
    doc["sites"] = json::array();
    for (const PatchSite& site : sites) {
        json jsite;
        jsite["kind"] = patch_site_kind_name(site.kind);
        jsite["old"] = json::array();
        for (const NumberedLine& line : site.old_lines) {
            jsite["old"].push_back({{"line", line.line}, {"text", line.text}});
        }
        jsite["new"] = json::array();
        for (const NumberedLine& line : site.new_lines) {
            jsite["new"].push_back({{"line", line.line}, {"text", line.text}});
        }
        doc["sites"].push_back(std::move(jsite));
    }
    return doc;
}

std::vector<PatchSite> sites_from_json(const json& doc, const std::string& where) {
    const json& jsites = require_array(doc, "sites", where);
    std::vector<PatchSite> sites;
    for (std::size_t i = 0; i < jsites.size(); ++i) {
        const std::string swhere = where + "/sites/" + std::to_string(i);
        const json& jsite = jsites[i];
        PatchSite site;
        const std::string kind = require_string(jsite, "kind", swhere);
        if (kind == "add") {
            site.kind = PatchSite::Kind::Add;
        } else if (kind == "delete") {
            site.kind = PatchSite::Kind::Delete;
        } else if (kind == "change") {
            site.kind = PatchSite::Kind::Change;
        } else {
            raise(ErrorCode::SchemaError, swhere + "/kind: unknown kind '" + kind + "'");
        }
        for (const char* side : {"old", "new"}) {
            const json& rows = require_array(jsite, side, swhere);
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const std::string rwhere = swhere + "/" + side + "/" + std::to_string(k);
                NumberedLine line;
                line.line = static_cast<int>(require_int(rows[k], "line", rwhere));
                line.text = require_string(rows[k], "text", rwhere);
                (side[0] == 'o' ? site.old_lines : site.new_lines).push_back(std::move(line));
            }
        }
        sites.push_back(std::move(site));
    }
    return sites;
}

} // namespace vulmatch
