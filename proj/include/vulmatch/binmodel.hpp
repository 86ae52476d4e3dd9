#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "vulmatch/json_io.hpp"

namespace vulmatch {

inline constexpr const char* kFunctionSchema = "vulmatch-func/1";

struct Instruction {
    std::uint64_t address = 0;
    std::string mnemonic;                // lowercase
    std::vector<std::string> operands;   // split on top-level commas
    std::string raw_text;                // original disassembly text
};

// Equality notion used by signature construction and matching: branch/call
// targets that are bare absolute addresses are masked to "@tgt", everything
// else (registers, immediates, memory displacements) stays literal.
struct NormalizedInsn {
    std::string mnemonic;
    std::vector<std::string> operands;

    std::string text() const;
    bool operator==(const NormalizedInsn&) const = default;
};

struct BasicBlock {
    std::string id;
    std::vector<Instruction> instructions;  // strictly increasing addresses
    std::vector<std::string> successors;
};

struct LineMapEntry {
    std::uint64_t address = 0;
    std::string file;
    int line = 0;  // 1-based
};

struct SourceLineRef {
    std::string file;
    int line = 0;
    auto operator<=>(const SourceLineRef&) const = default;
};

// Ordering for block ids: numeric when both ids are decimal integers,
// lexicographic otherwise. Used for every tie-break in the toolkit.
bool block_id_less(const std::string& a, const std::string& b);

struct BlockIdLess {
    bool operator()(const std::string& a, const std::string& b) const {
        return block_id_less(a, b);
    }
};

class BinaryFunction {
public:
    std::string name;
    std::string binary_id;
    std::string entry;
    std::vector<BasicBlock> blocks;  // document order
    std::vector<LineMapEntry> line_map;

    // Checks all invariants and builds the lookup indices; throws
    // ValidationError on violation. Must be called after direct field
    // construction (load_function does it for you).
    void validate();

    const BasicBlock* find_block(const std::string& id) const;
    const BasicBlock& block_at(const std::string& id) const;
    std::vector<std::string> block_ids_sorted() const;

    // Predecessor ids of `id`, sorted by block_id_less.
    const std::vector<std::string>& predecessors(const std::string& id) const;

    // Line-table entries attached to one instruction address (may be empty).
    std::vector<SourceLineRef> lines_for_address(std::uint64_t address) const;

private:
    std::unordered_map<std::string, std::size_t> index_;
    std::map<std::string, std::vector<std::string>, BlockIdLess> predecessors_;
    std::multimap<std::uint64_t, SourceLineRef> line_index_;
};

BinaryFunction load_function(const json& document, const std::string& where = "function");
BinaryFunction load_function_file(const std::string& path);
json function_to_json(const BinaryFunction& func);

// Splits raw disassembly text into mnemonic + operands. Commas inside
// (), [] or {} do not split.
Instruction parse_instruction(std::uint64_t address, const std::string& text);

NormalizedInsn normalize_instruction(const Instruction& insn);

// Canonical per-instruction text for one block, in instruction order.
std::vector<std::string> normalize_block(const BasicBlock& block);

using BlockInstructionMap = std::map<std::string, std::vector<Instruction>, BlockIdLess>;

// Every instruction with a line-map entry in `lines`, grouped by containing
// block, instruction order preserved. Lines with no mapping contribute
// nothing.
BlockInstructionMap map_lines_to_instructions(const BinaryFunction& func,
                                              const std::set<SourceLineRef>& lines);

// Same, keyed by line number only (any file). Used when patch sites carry
// no file attribution.
BlockInstructionMap map_lines_to_instructions(const BinaryFunction& func,
                                              const std::set<int>& lines);

} // namespace vulmatch
