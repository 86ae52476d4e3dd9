#include "vulmatch/binmodel.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace vulmatch {

namespace {

bool is_all_digits(const std::string& s) {
    if (s.empty()) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string lowercased(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Collapse internal whitespace runs to single spaces, trim both ends.
std::string canonical_spacing(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(c));
    }
    return out;
}

bool is_bare_absolute_address(const std::string& operand) {
    if (operand.size() > 2 && operand[0] == '0' && (operand[1] == 'x' || operand[1] == 'X')) {
        return std::all_of(operand.begin() + 2, operand.end(),
                           [](unsigned char c) { return std::isxdigit(c); });
    }
    return is_all_digits(operand);
}

bool is_branch_or_call(const std::string& mnemonic) {
    if (mnemonic == "call" || mnemonic == "jmp") {
        return true;
    }
    if (!mnemonic.empty() && mnemonic[0] == 'j') {
        return true;  // jcc family (je, jne, ja, jb, jecxz, ...)
    }
    return mnemonic.rfind("loop", 0) == 0;
}

} // namespace

bool block_id_less(const std::string& a, const std::string& b) {
    if (is_all_digits(a) && is_all_digits(b)) {
        auto stripped = [](const std::string& s) {
            std::size_t i = 0;
            while (i + 1 < s.size() && s[i] == '0') {
                ++i;
            }
            return s.substr(i);
        };
        const std::string sa = stripped(a);
        const std::string sb = stripped(b);
        if (sa.size() != sb.size()) {
            return sa.size() < sb.size();
        }
        if (sa != sb) {
            return sa < sb;
        }
        return a < b;  // "07" vs "7": keep the order strict
    }
    return a < b;
}

std::string NormalizedInsn::text() const {
    std::string out = mnemonic;
    for (std::size_t i = 0; i < operands.size(); ++i) {
        out += (i == 0) ? " " : ", ";
        out += operands[i];
    }
    return out;
}

void BinaryFunction::validate() {
    index_.clear();
    predecessors_.clear();
    line_index_.clear();

    if (name.empty()) {
        raise(ErrorCode::ValidationError, "function name is empty");
    }
    if (blocks.empty()) {
        raise(ErrorCode::ValidationError, "function '" + name + "' has no blocks");
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const BasicBlock& block = blocks[i];
        if (block.id.empty()) {
            raise(ErrorCode::ValidationError, "block " + std::to_string(i) + " has an empty id");
        }
        if (!index_.emplace(block.id, i).second) {
            raise(ErrorCode::ValidationError, "duplicate block id '" + block.id + "'");
        }
        if (block.instructions.empty()) {
            raise(ErrorCode::ValidationError, "block '" + block.id + "' has no instructions");
        }
        for (std::size_t k = 0; k < block.instructions.size(); ++k) {
            const Instruction& insn = block.instructions[k];
            if (insn.mnemonic.empty()) {
                raise(ErrorCode::ValidationError,
                      "block '" + block.id + "' instruction " + std::to_string(k) + " has an empty mnemonic");
            }
            if (k > 0 && insn.address <= block.instructions[k - 1].address) {
                raise(ErrorCode::ValidationError,
                      "block '" + block.id + "' addresses are not strictly increasing at " +
                          format_address(insn.address));
            }
        }
    }
    if (index_.find(entry) == index_.end()) {
        raise(ErrorCode::ValidationError, "entry block '" + entry + "' not found");
    }

    // Block address ranges pairwise disjoint (which also makes addresses
    // unique across the function).
    std::vector<const BasicBlock*> by_start;
    by_start.reserve(blocks.size());
    for (const BasicBlock& block : blocks) {
        by_start.push_back(&block);
    }
    std::sort(by_start.begin(), by_start.end(), [](const BasicBlock* a, const BasicBlock* b) {
        return a->instructions.front().address < b->instructions.front().address;
    });
    for (std::size_t i = 1; i < by_start.size(); ++i) {
        const BasicBlock* prev = by_start[i - 1];
        const BasicBlock* cur = by_start[i];
        if (cur->instructions.front().address <= prev->instructions.back().address) {
            raise(ErrorCode::ValidationError,
                  "blocks '" + prev->id + "' and '" + cur->id + "' have overlapping address ranges");
        }
    }

    for (const BasicBlock& block : blocks) {
        std::set<std::string> seen;
        for (const std::string& succ : block.successors) {
            if (index_.find(succ) == index_.end()) {
                raise(ErrorCode::ValidationError,
                      "dangling successor '" + succ + "' in block '" + block.id + "'");
            }
            if (!seen.insert(succ).second) {
                raise(ErrorCode::ValidationError,
                      "duplicate successor '" + succ + "' in block '" + block.id + "'");
            }
            predecessors_[succ].push_back(block.id);
        }
    }
    for (auto& [id, preds] : predecessors_) {
        std::sort(preds.begin(), preds.end(), block_id_less);
    }

    std::set<std::uint64_t> known_addresses;
    for (const BasicBlock& block : blocks) {
        for (const Instruction& insn : block.instructions) {
            known_addresses.insert(insn.address);
        }
    }
    for (const LineMapEntry& entry_row : line_map) {
        if (entry_row.line < 1) {
            raise(ErrorCode::ValidationError,
                  "line_map entry for " + format_address(entry_row.address) + " has line < 1");
        }
        if (known_addresses.find(entry_row.address) == known_addresses.end()) {
            raise(ErrorCode::ValidationError,
                  "unmapped address " + format_address(entry_row.address) + " in line_map");
        }
        line_index_.emplace(entry_row.address, SourceLineRef{entry_row.file, entry_row.line});
    }
}

const BasicBlock* BinaryFunction::find_block(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &blocks[it->second];
}

const BasicBlock& BinaryFunction::block_at(const std::string& id) const {
    const BasicBlock* block = find_block(id);
    if (block == nullptr) {
        raise(ErrorCode::ValidationError, "unknown block id '" + id + "'");
    }
    return *block;
}

std::vector<std::string> BinaryFunction::block_ids_sorted() const {
    std::vector<std::string> ids;
    ids.reserve(blocks.size());
    for (const BasicBlock& block : blocks) {
        ids.push_back(block.id);
    }
    std::sort(ids.begin(), ids.end(), block_id_less);
    return ids;
}

const std::vector<std::string>& BinaryFunction::predecessors(const std::string& id) const {
    static const std::vector<std::string> kEmpty;
    auto it = predecessors_.find(id);
    return it == predecessors_.end() ? kEmpty : it->second;
}

std::vector<SourceLineRef> BinaryFunction::lines_for_address(std::uint64_t address) const {
    std::vector<SourceLineRef> out;
    auto [lo, hi] = line_index_.equal_range(address);
    for (auto it = lo; it != hi; ++it) {
        out.push_back(it->second);
    }
    return out;
}

Instruction parse_instruction(std::uint64_t address, const std::string& text) {
    Instruction insn;
    insn.address = address;
    insn.raw_text = text;

    const std::string canon = canonical_spacing(text);
    const std::size_t space = canon.find(' ');
    insn.mnemonic = lowercased(canon.substr(0, space));
    if (space == std::string::npos) {
        return insn;
    }

    const std::string rest = canon.substr(space + 1);
    std::string current;
    int depth = 0;
    for (char c : rest) {
        if (c == '(' || c == '[' || c == '{') {
            ++depth;
        } else if (c == ')' || c == ']' || c == '}') {
            --depth;
        }
        if (c == ',' && depth == 0) {
            insn.operands.push_back(canonical_spacing(current));
            current.clear();
            continue;
        }
        current.push_back(c);
    }
    const std::string last = canonical_spacing(current);
    if (!last.empty() || !insn.operands.empty()) {
        insn.operands.push_back(last);
    }
    return insn;
}

NormalizedInsn normalize_instruction(const Instruction& insn) {
    NormalizedInsn out;
    out.mnemonic = lowercased(canonical_spacing(insn.mnemonic));
    out.operands.reserve(insn.operands.size());
    const bool mask_targets = is_branch_or_call(out.mnemonic);
    for (const std::string& operand : insn.operands) {
        std::string canon = lowercased(canonical_spacing(operand));
        if (mask_targets && is_bare_absolute_address(canon)) {
            canon = "@tgt";
        }
        out.operands.push_back(std::move(canon));
    }
    return out;
}

std::vector<std::string> normalize_block(const BasicBlock& block) {
    std::vector<std::string> out;
    out.reserve(block.instructions.size());
    for (const Instruction& insn : block.instructions) {
        out.push_back(normalize_instruction(insn).text());
    }
    return out;
}

BinaryFunction load_function(const json& document, const std::string& where) {
    const std::string schema = require_string(document, "schema", where);
    if (schema != kFunctionSchema) {
        raise(ErrorCode::SchemaError,
              where + "/schema: unsupported schema '" + schema + "' (expected " + kFunctionSchema + ")");
    }

    BinaryFunction func;
    func.binary_id = require_string(document, "binary_id", where);
    func.name = require_string(document, "name", where);
    func.entry = require_string(document, "entry", where);

    const json& blocks = require_array(document, "blocks", where);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string bwhere = where + "/blocks/" + std::to_string(i);
        const json& jblock = blocks[i];
        BasicBlock block;
        block.id = require_string(jblock, "id", bwhere);
        const json& succs = require_array(jblock, "successors", bwhere);
        for (const json& s : succs) {
            if (!s.is_string()) {
                raise(ErrorCode::SchemaError, bwhere + "/successors: expected string entries");
            }
            block.successors.push_back(s.get<std::string>());
        }
        const json& insns = require_array(jblock, "insns", bwhere);
        for (std::size_t k = 0; k < insns.size(); ++k) {
            const std::string iwhere = bwhere + "/insns/" + std::to_string(k);
            const json& jinsn = insns[k];
            const std::uint64_t address = parse_address(require_string(jinsn, "addr", iwhere), iwhere);
            block.instructions.push_back(parse_instruction(address, require_string(jinsn, "text", iwhere)));
        }
        func.blocks.push_back(std::move(block));
    }

    const json& rows = require_array(document, "line_map", where);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string lwhere = where + "/line_map/" + std::to_string(i);
        const json& row = rows[i];
        LineMapEntry entry;
        entry.address = parse_address(require_string(row, "addr", lwhere), lwhere);
        entry.file = require_string(row, "file", lwhere);
        const std::int64_t line = require_int(row, "line", lwhere);
        if (line < 1) {
            raise(ErrorCode::SchemaError, lwhere + "/line: expected a 1-based line number");
        }
        entry.line = static_cast<int>(line);
        func.line_map.push_back(std::move(entry));
    }

    func.validate();
    return func;
}

BinaryFunction load_function_file(const std::string& path) {
    return load_function(load_json_file(path), path);
}

json function_to_json(const BinaryFunction& func) {
    json doc;
    doc["schema"] = kFunctionSchema;
    doc["binary_id"] = func.binary_id;
    doc["name"] = func.name;
    doc["entry"] = func.entry;
    doc["blocks"] = json::array();
    for (const BasicBlock& block : func.blocks) {
        json jblock;
        jblock["id"] = block.id;
        jblock["successors"] = block.successors;
        jblock["insns"] = json::array();
        for (const Instruction& insn : block.instructions) {
            json jinsn;
            jinsn["addr"] = format_address(insn.address);
            jinsn["text"] = insn.raw_text;
            jblock["insns"].push_back(std::move(jinsn));
        }
        doc["blocks"].push_back(std::move(jblock));
    }
    doc["line_map"] = json::array();
    for (const LineMapEntry& entry : func.line_map) {
        json row;
        row["addr"] = format_address(entry.address);
        row["file"] = entry.file;
        row["line"] = entry.line;
        doc["line_map"].push_back(std::move(row));
    }
    return doc;
}

namespace {

BlockInstructionMap map_lines_impl(const BinaryFunction& func,
                                   const std::function<bool(const SourceLineRef&)>& wanted) {
    BlockInstructionMap out;
    for (const BasicBlock& block : func.blocks) {
        for (const Instruction& insn : block.instructions) {
            for (const SourceLineRef& ref : func.lines_for_address(insn.address)) {
                if (wanted(ref)) {
                    out[block.id].push_back(insn);
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace

BlockInstructionMap map_lines_to_instructions(const BinaryFunction& func,
                                              const std::set<SourceLineRef>& lines) {
    return map_lines_impl(func, [&lines](const SourceLineRef& ref) { return lines.count(ref) > 0; });
}

BlockInstructionMap map_lines_to_instructions(const BinaryFunction& func,
                                              const std::set<int>& lines) {
    return map_lines_impl(func, [&lines](const SourceLineRef& ref) { return lines.count(ref.line) > 0; });
}

} // namespace vulmatch
