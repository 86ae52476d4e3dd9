#include "vulmatch/siggen.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "vulmatch/lcs.hpp"

namespace vulmatch {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    std::vector<int> rank_;

    explicit UnionFind(std::size_t n) : parent(n), rank_(n, 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::size_t find(std::size_t x) {
        if (parent[x] != x) {
            parent[x] = find(parent[x]);
        }
        return parent[x];
    }

    void unite(std::size_t x, std::size_t y) {
        std::size_t px = find(x);
        std::size_t py = find(y);
        if (px == py) {
            return;
        }
        if (rank_[px] < rank_[py]) {
            std::swap(px, py);
        }
        parent[py] = px;
        if (rank_[px] == rank_[py]) {
            ++rank_[px];
        }
    }
};

std::set<int> site_line_numbers(const std::vector<PatchSite>& sites, bool old_side) {
    std::set<int> lines;
    for (const PatchSite& site : sites) {
        for (const NumberedLine& line : old_side ? site.old_lines : site.new_lines) {
            lines.insert(line.line);
        }
    }
    return lines;
}

BlockInstructionMap map_site_lines(const BinaryFunction& func,
                                   const std::vector<PatchSite>& sites,
                                   bool old_side,
                                   const SiggenOptions& options) {
    if (options.source_file.empty()) {
        return map_lines_to_instructions(func, site_line_numbers(sites, old_side));
    }
    std::set<SourceLineRef> refs;
    for (int line : site_line_numbers(sites, old_side)) {
        refs.insert(SourceLineRef{options.source_file, line});
    }
    return map_lines_to_instructions(func, refs);
}

bool line_ref_selected(const SourceLineRef& ref, const std::set<int>& lines,
                       const SiggenOptions& options) {
    if (!options.source_file.empty() && ref.file != options.source_file) {
        return false;
    }
    return lines.count(ref.line) > 0;
}

std::vector<std::string> sorted_ids(std::set<std::string, BlockIdLess>&& ids) {
    return {ids.begin(), ids.end()};
}

std::vector<std::string> normalize_instruction_list(const std::vector<Instruction>& insns) {
    std::vector<std::string> out;
    out.reserve(insns.size());
    for (const Instruction& insn : insns) {
        out.push_back(normalize_instruction(insn).text());
    }
    return out;
}

// Line-set of one block: every line-map entry attached to its instructions.
std::set<SourceLineRef> block_line_set(const BinaryFunction& func, const BasicBlock& block) {
    std::set<SourceLineRef> lines;
    for (const Instruction& insn : block.instructions) {
        for (const SourceLineRef& ref : func.lines_for_address(insn.address)) {
            lines.insert(ref);
        }
    }
    return lines;
}

void require_site_kind(const std::vector<PatchSite>& sites, PatchSite::Kind kind,
                       const char* what) {
    for (const PatchSite& site : sites) {
        if (site.kind != kind) {
            raise(ErrorCode::ValidationError,
                  std::string(what) + " received a site of kind " + patch_site_kind_name(site.kind));
        }
    }
}

} // namespace

int structure_instruction_count(const SignatureStructure& structure) {
    if (const auto* pc = std::get_if<ParentsChildrenStructure>(&structure)) {
        int total = static_cast<int>(pc->parent.size());
        for (const auto& child : pc->children) {
            total += static_cast<int>(child.size());
        }
        return total;
    }
    const auto& bl = std::get<BlockListStructure>(structure);
    int total = 0;
    for (const auto& block : bl.blocks) {
        total += static_cast<int>(block.size());
    }
    return total;
}

const char* signature_kind_name(SignatureKind kind) {
    switch (kind) {
    case SignatureKind::Add: return "add";
    case SignatureKind::Delete: return "delete";
    case SignatureKind::ChangeOneBlock: return "change_one_block";
    case SignatureKind::ChangeManyBlock: return "change_many_block";
    }
    return "?";
}

SignatureKind signature_kind_from_name(const std::string& name, const std::string& where) {
    if (name == "add") return SignatureKind::Add;
    if (name == "delete") return SignatureKind::Delete;
    if (name == "change_one_block") return SignatureKind::ChangeOneBlock;
    if (name == "change_many_block") return SignatureKind::ChangeManyBlock;
    raise(ErrorCode::SchemaError, where + ": unknown signature kind '" + name + "'");
}

int Signature::computed_total() const {
    int total = 0;
    for (const SignatureStructure& structure : structures) {
        total += structure_instruction_count(structure);
    }
    return total;
}

void Signature::validate(const std::string& where) const {
    if (structures.empty()) {
        raise(ErrorCode::ValidationError, where + ": signature has no structures");
    }
    for (std::size_t i = 0; i < structures.size(); ++i) {
        const std::string swhere = where + "/structures/" + std::to_string(i);
        if (const auto* pc = std::get_if<ParentsChildrenStructure>(&structures[i])) {
            if (kind == SignatureKind::Delete) {
                raise(ErrorCode::ValidationError,
                      swhere + ": delete signatures hold only block lists");
            }
            if (pc->parent.empty()) {
                raise(ErrorCode::ValidationError, swhere + ": empty parent block");
            }
            if (pc->children.empty()) {
                raise(ErrorCode::ValidationError, swhere + ": no children blocks");
            }
            for (const auto& child : pc->children) {
                if (child.empty()) {
                    raise(ErrorCode::ValidationError, swhere + ": empty child block");
                }
            }
        } else {
            const auto& bl = std::get<BlockListStructure>(structures[i]);
            if (kind == SignatureKind::Add) {
                raise(ErrorCode::ValidationError,
                      swhere + ": add signatures hold only parents-children structures");
            }
            if (bl.blocks.empty()) {
                raise(ErrorCode::ValidationError, swhere + ": empty block list");
            }
            for (const auto& block : bl.blocks) {
                if (block.empty()) {
                    raise(ErrorCode::ValidationError, swhere + ": empty block entry");
                }
            }
        }
    }
    if (kind == SignatureKind::Delete && patch_signature.has_value()) {
        raise(ErrorCode::ValidationError, where + ": delete signatures carry no patch signature");
    }
    if (patch_signature.has_value()) {
        if (patch_signature->blocks.empty()) {
            raise(ErrorCode::ValidationError, where + ": empty patch signature");
        }
        for (const auto& block : patch_signature->blocks) {
            if (block.empty()) {
                raise(ErrorCode::ValidationError, where + ": empty patch signature entry");
            }
        }
    }
    if (total_instructions != computed_total()) {
        raise(ErrorCode::ValidationError,
              where + ": total_instructions " + std::to_string(total_instructions) +
                  " does not match structure contents (" + std::to_string(computed_total()) + ")");
    }
}

AddedBlocks find_added_blocks(const BinaryFunction& patched,
                              const std::vector<PatchSite>& add_sites,
                              const SiggenOptions& options) {
    require_site_kind(add_sites, PatchSite::Kind::Add, "find_added_blocks");
    const std::set<int> added_lines = site_line_numbers(add_sites, /*old_side=*/false);

    std::set<std::string, BlockIdLess> added;
    std::set<std::string, BlockIdLess> modified;
    bool any_added_mapping = false;

    for (const BasicBlock& block : patched.blocks) {
        bool has_mapped = false;
        bool all_added = true;
        bool any_added = false;
        for (const Instruction& insn : block.instructions) {
            const auto refs = patched.lines_for_address(insn.address);
            if (refs.empty()) {
                continue;
            }
            has_mapped = true;
            bool insn_all_added = true;
            for (const SourceLineRef& ref : refs) {
                if (line_ref_selected(ref, added_lines, options)) {
                    any_added = true;
                } else {
                    insn_all_added = false;
                }
            }
            if (!insn_all_added) {
                all_added = false;
            }
        }
        if (!any_added) {
            continue;
        }
        any_added_mapping = true;
        if (has_mapped && all_added) {
            added.insert(block.id);
        } else {
            modified.insert(block.id);
        }
    }

    if (!any_added_mapping) {
        raise(ErrorCode::NoMappedInstructions, "no added source line maps to any instruction");
    }
    return AddedBlocks{sorted_ids(std::move(added)), sorted_ids(std::move(modified))};
}

std::vector<AddBatch> find_add_batches(const BinaryFunction& patched,
                                       const std::vector<std::string>& added) {
    std::vector<std::string> ids = added;
    std::sort(ids.begin(), ids.end(), block_id_less);
    std::map<std::string, std::size_t, BlockIdLess> index;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        index.emplace(ids[i], i);
    }

    UnionFind uf(ids.size());
    for (const std::string& id : ids) {
        const BasicBlock& block = patched.block_at(id);
        for (const std::string& succ : block.successors) {
            auto it = index.find(succ);
            if (it != index.end()) {
                uf.unite(index.at(id), it->second);
            }
        }
    }

    std::map<std::size_t, AddBatch> groups;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        groups[uf.find(i)].block_ids.push_back(ids[i]);
    }
    std::vector<AddBatch> batches;
    for (auto& [root, batch] : groups) {
        batches.push_back(std::move(batch));  // members already id-sorted
    }
    std::sort(batches.begin(), batches.end(), [](const AddBatch& a, const AddBatch& b) {
        return block_id_less(a.block_ids.front(), b.block_ids.front());
    });
    return batches;
}

std::vector<std::string> find_leading_blocks(const BinaryFunction& patched,
                                             const std::vector<std::string>& added_all,
                                             const AddBatch& batch) {
    const std::set<std::string> added_set(added_all.begin(), added_all.end());
    const std::set<std::string> batch_set(batch.block_ids.begin(), batch.block_ids.end());

    std::set<std::string, BlockIdLess> leading;
    for (const BasicBlock& block : patched.blocks) {
        if (added_set.count(block.id) > 0) {
            continue;
        }
        for (const std::string& succ : block.successors) {
            if (batch_set.count(succ) > 0) {
                leading.insert(block.id);
                break;
            }
        }
    }
    if (leading.empty()) {
        raise(ErrorCode::NoLeadingBlock,
              "no unchanged block precedes the batch starting at '" + batch.block_ids.front() + "'");
    }
    return sorted_ids(std::move(leading));
}

std::string find_counterpart_block(const BinaryFunction& vulnerable,
                                   const BinaryFunction& patched,
                                   const std::string& leading_id,
                                   const std::map<int, int>* new_to_old) {
    const BasicBlock& leading = patched.block_at(leading_id);
    std::set<SourceLineRef> lead_lines = block_line_set(patched, leading);
    if (new_to_old != nullptr) {
        std::set<SourceLineRef> rebased;
        for (const SourceLineRef& ref : lead_lines) {
            auto it = new_to_old->find(ref.line);
            if (it != new_to_old->end()) {
                rebased.insert(SourceLineRef{ref.file, it->second});
            }
        }
        lead_lines = std::move(rebased);
    }

    const std::vector<std::string> candidates = vulnerable.block_ids_sorted();

    if (!lead_lines.empty()) {
        double best = 0.0;
        std::string best_id;
        for (const std::string& id : candidates) {
            const std::set<SourceLineRef> lines = block_line_set(vulnerable, vulnerable.block_at(id));
            std::size_t common = 0;
            for (const SourceLineRef& ref : lines) {
                common += lead_lines.count(ref);
            }
            const std::size_t unions = lead_lines.size() + lines.size() - common;
            const double jaccard = unions == 0 ? 0.0 : static_cast<double>(common) / unions;
            if (jaccard > best) {
                best = jaccard;
                best_id = id;
            }
        }
        if (best_id.empty()) {
            raise(ErrorCode::NoCounterpart,
                  "no vulnerable block shares source lines with leading block '" + leading_id + "'");
        }
        return best_id;
    }

    // No mapped lines on the leading block: fall back to instruction LCS.
    const std::vector<std::string> lead_texts = normalize_block(leading);
    int best = 0;
    std::string best_id;
    for (const std::string& id : candidates) {
        const int len = lcs_length(lead_texts, normalize_block(vulnerable.block_at(id)));
        if (len > best) {
            best = len;
            best_id = id;
        }
    }
    if (best_id.empty()) {
        raise(ErrorCode::NoCounterpart,
              "no vulnerable block shares instructions with leading block '" + leading_id + "'");
    }
    return best_id;
}

Signature build_add_signature(const BinaryFunction& vulnerable,
                              const BinaryFunction& patched,
                              const std::vector<PatchSite>& add_sites,
                              const std::string& cve_id,
                              const SiggenOptions& options,
                              const std::map<int, int>* new_to_old) {
    const AddedBlocks found = find_added_blocks(patched, add_sites, options);
    const std::vector<AddBatch> batches = find_add_batches(patched, found.added);

    Signature sig;
    sig.cve_id = cve_id;
    sig.function_name = vulnerable.name;
    sig.kind = SignatureKind::Add;

    std::set<std::string, BlockIdLess> used_counterparts;
    for (const AddBatch& batch : batches) {
        std::vector<std::string> leads;
        try {
            leads = find_leading_blocks(patched, found.added, batch);
        } catch (const Error&) {
            continue;  // batch without an unchanged predecessor
        }
        for (const std::string& lead : leads) {
            std::string counterpart;
            try {
                counterpart = find_counterpart_block(vulnerable, patched, lead, new_to_old);
            } catch (const Error&) {
                continue;
            }
            if (!used_counterparts.insert(counterpart).second) {
                continue;  // same structure already emitted
            }
            const BasicBlock& block = vulnerable.block_at(counterpart);
            std::vector<std::string> succs = block.successors;
            std::sort(succs.begin(), succs.end(), block_id_less);
            if (succs.empty()) {
                continue;  // no following control flow to capture
            }
            ParentsChildrenStructure structure;
            structure.parent = normalize_block(block);
            for (const std::string& succ : succs) {
                structure.children.push_back(normalize_block(vulnerable.block_at(succ)));
            }
            sig.structures.emplace_back(std::move(structure));
        }
    }

    if (sig.structures.empty()) {
        raise(ErrorCode::SignatureEmpty,
              "no parents-children structure could be built from the add sites");
    }

    BlockListStructure patch;
    for (const AddBatch& batch : batches) {
        for (const std::string& id : batch.block_ids) {
            patch.blocks.push_back(normalize_block(patched.block_at(id)));
        }
    }
    // Mixed blocks contribute their added instructions only.
    const std::set<int> added_lines = site_line_numbers(add_sites, /*old_side=*/false);
    for (const std::string& id : found.modified) {
        std::vector<std::string> entry;
        for (const Instruction& insn : patched.block_at(id).instructions) {
            for (const SourceLineRef& ref : patched.lines_for_address(insn.address)) {
                if (line_ref_selected(ref, added_lines, options)) {
                    entry.push_back(normalize_instruction(insn).text());
                    break;
                }
            }
        }
        if (!entry.empty()) {
            patch.blocks.push_back(std::move(entry));
        }
    }
    if (!patch.blocks.empty()) {
        sig.patch_signature = std::move(patch);
    }

    sig.total_instructions = sig.computed_total();
    sig.validate("add signature");
    return sig;
}

Signature build_delete_signature(const BinaryFunction& vulnerable,
                                 const std::vector<PatchSite>& delete_sites,
                                 const std::string& cve_id,
                                 const SiggenOptions& options) {
    require_site_kind(delete_sites, PatchSite::Kind::Delete, "build_delete_signature");
    const BlockInstructionMap mapped = map_site_lines(vulnerable, delete_sites, /*old_side=*/true, options);
    if (mapped.empty()) {
        raise(ErrorCode::NoMappedInstructions, "no deleted source line maps to any instruction");
    }

    BlockListStructure structure;
    for (const auto& [id, insns] : mapped) {
        structure.blocks.push_back(normalize_instruction_list(insns));
    }

    Signature sig;
    sig.cve_id = cve_id;
    sig.function_name = vulnerable.name;
    sig.kind = SignatureKind::Delete;
    sig.structures.emplace_back(std::move(structure));
    sig.total_instructions = sig.computed_total();
    sig.validate("delete signature");
    return sig;
}

Signature build_change_signature(const BinaryFunction& vulnerable,
                                 const BinaryFunction& patched,
                                 const std::vector<PatchSite>& change_sites,
                                 const std::string& cve_id,
                                 const SiggenOptions& options) {
    require_site_kind(change_sites, PatchSite::Kind::Change, "build_change_signature");
    const BlockInstructionMap old_mapped =
        map_site_lines(vulnerable, change_sites, /*old_side=*/true, options);
    if (old_mapped.empty()) {
        raise(ErrorCode::NoMappedInstructions, "no changed source line maps to any instruction");
    }

    std::vector<std::string> changed_ids;
    for (const auto& [id, insns] : old_mapped) {
        changed_ids.push_back(id);
    }

    Signature sig;
    sig.cve_id = cve_id;
    sig.function_name = vulnerable.name;

    if (changed_ids.size() == 1) {
        sig.kind = SignatureKind::ChangeOneBlock;
        const std::string& id = changed_ids.front();
        const BasicBlock& block = vulnerable.block_at(id);
        const std::vector<std::string>& preds = vulnerable.predecessors(id);
        if (!preds.empty()) {
            for (const std::string& pred : preds) {
                ParentsChildrenStructure structure;
                structure.parent = normalize_block(vulnerable.block_at(pred));
                structure.children.push_back(normalize_block(block));
                sig.structures.emplace_back(std::move(structure));
            }
        } else {
            std::vector<std::string> succs = block.successors;
            std::sort(succs.begin(), succs.end(), block_id_less);
            if (!succs.empty()) {
                ParentsChildrenStructure structure;
                structure.parent = normalize_block(block);
                for (const std::string& succ : succs) {
                    structure.children.push_back(normalize_block(vulnerable.block_at(succ)));
                }
                sig.structures.emplace_back(std::move(structure));
            } else {
                // Isolated single-block function: lexical content only.
                BlockListStructure structure;
                structure.blocks.push_back(normalize_instruction_list(old_mapped.at(id)));
                sig.structures.emplace_back(std::move(structure));
            }
        }
    } else {
        sig.kind = SignatureKind::ChangeManyBlock;
        const std::set<std::string> changed_set(changed_ids.begin(), changed_ids.end());
        std::set<std::string> has_changed_neighbor;
        for (const std::string& id : changed_ids) {
            std::vector<std::string> succs = vulnerable.block_at(id).successors;
            std::sort(succs.begin(), succs.end(), block_id_less);
            for (const std::string& succ : succs) {
                if (succ != id && changed_set.count(succ) > 0) {
                    ParentsChildrenStructure structure;
                    structure.parent = normalize_block(vulnerable.block_at(id));
                    structure.children.push_back(normalize_block(vulnerable.block_at(succ)));
                    sig.structures.emplace_back(std::move(structure));
                    has_changed_neighbor.insert(id);
                    has_changed_neighbor.insert(succ);
                }
            }
        }
        BlockListStructure isolated;
        for (const std::string& id : changed_ids) {
            if (has_changed_neighbor.count(id) == 0) {
                isolated.blocks.push_back(normalize_instruction_list(old_mapped.at(id)));
            }
        }
        if (!isolated.blocks.empty()) {
            sig.structures.emplace_back(std::move(isolated));
        }
    }

    // Patch signature: new-side instructions with no equal counterpart in
    // the vulnerable change region.
    const BlockInstructionMap new_mapped =
        map_site_lines(patched, change_sites, /*old_side=*/false, options);
    std::set<std::string> region;
    for (const auto& [id, insns] : old_mapped) {
        for (const Instruction& insn : insns) {
            region.insert(normalize_instruction(insn).text());
        }
    }
    BlockListStructure patch;
    for (const auto& [id, insns] : new_mapped) {
        std::vector<std::string> entry;
        for (const Instruction& insn : insns) {
            const std::string text = normalize_instruction(insn).text();
            if (region.count(text) == 0) {
                entry.push_back(text);
            }
        }
        if (!entry.empty()) {
            patch.blocks.push_back(std::move(entry));
        }
    }
    if (!patch.blocks.empty()) {
        sig.patch_signature = std::move(patch);
    }

    sig.total_instructions = sig.computed_total();
    sig.validate("change signature");
    return sig;
}

GenerationResult generate_signatures(const BinaryFunction& vulnerable,
                                     const BinaryFunction& patched,
                                     const std::string& old_source,
                                     const std::string& new_source,
                                     const std::string& cve_id,
                                     const SiggenOptions& options) {
    const std::vector<std::string> old_lines = split_lines(old_source);
    const std::vector<std::string> new_lines = split_lines(new_source);
    const EditScript script = diff_lines(old_lines, new_lines);
    const std::vector<PatchSite> sites = classify_sites(script, old_lines, new_lines);

    GenerationResult result;
    if (sites.empty()) {
        result.diagnostics.push_back("no patch sites");
        return result;
    }

    std::vector<PatchSite> adds;
    std::vector<PatchSite> deletes;
    std::vector<PatchSite> changes;
    for (const PatchSite& site : sites) {
        switch (site.kind) {
        case PatchSite::Kind::Add: adds.push_back(site); break;
        case PatchSite::Kind::Delete: deletes.push_back(site); break;
        case PatchSite::Kind::Change: changes.push_back(site); break;
        }
    }

    const std::map<int, int> new_to_old = line_translation_new_to_old(script);

    if (!adds.empty()) {
        try {
            result.signatures.push_back(
                build_add_signature(vulnerable, patched, adds, cve_id, options, &new_to_old));
        } catch (const Error& e) {
            result.diagnostics.push_back(std::string("add: ") + e.what());
        }
    }
    if (!deletes.empty()) {
        try {
            result.signatures.push_back(build_delete_signature(vulnerable, deletes, cve_id, options));
        } catch (const Error& e) {
            result.diagnostics.push_back(std::string("delete: ") + e.what());
        }
    }
    if (!changes.empty()) {
        try {
            result.signatures.push_back(
                build_change_signature(vulnerable, patched, changes, cve_id, options));
        } catch (const Error& e) {
            result.diagnostics.push_back(std::string("change: ") + e.what());
        }
    }
    return result;
}

namespace {

json string_matrix_to_json(const std::vector<std::vector<std::string>>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back(row);
    }
    return out;
}

std::vector<std::vector<std::string>> string_matrix_from_json(const json& value,
                                                              const std::string& where) {
    if (!value.is_array()) {
        raise(ErrorCode::SchemaError, where + ": expected array of arrays");
    }
    std::vector<std::vector<std::string>> out;
    for (const json& row : value) {
        if (!row.is_array()) {
            raise(ErrorCode::SchemaError, where + ": expected array of arrays");
        }
        std::vector<std::string> texts;
        for (const json& cell : row) {
            if (!cell.is_string()) {
                raise(ErrorCode::SchemaError, where + ": expected string entries");
            }
            texts.push_back(cell.get<std::string>());
        }
        out.push_back(std::move(texts));
    }
    return out;
}

} // namespace

json signature_to_json(const Signature& sig) {
    json doc;
    doc["cve_id"] = sig.cve_id;
    doc["function_name"] = sig.function_name;
    doc["kind"] = signature_kind_name(sig.kind);
    doc["ordinal"] = sig.ordinal;
    doc["structures"] = json::array();
    for (const SignatureStructure& structure : sig.structures) {
        json js;
        if (const auto* pc = std::get_if<ParentsChildrenStructure>(&structure)) {
            js["type"] = "parents_children";
            js["parent"] = pc->parent;
            js["children"] = string_matrix_to_json(pc->children);
        } else {
            js["type"] = "block_list";
            js["blocks"] = string_matrix_to_json(std::get<BlockListStructure>(structure).blocks);
        }
        doc["structures"].push_back(std::move(js));
    }
    if (sig.patch_signature.has_value()) {
        doc["patch_signature"] = {{"blocks", string_matrix_to_json(sig.patch_signature->blocks)}};
    }
    doc["total_instructions"] = sig.total_instructions;
    return doc;
}

Signature signature_from_json(const json& doc, const std::string& where) {
    Signature sig;
    sig.cve_id = require_string(doc, "cve_id", where);
    sig.function_name = require_string(doc, "function_name", where);
    sig.kind = signature_kind_from_name(require_string(doc, "kind", where), where + "/kind");
    sig.ordinal = static_cast<int>(require_int(doc, "ordinal", where));
    const json& structures = require_array(doc, "structures", where);
    for (std::size_t i = 0; i < structures.size(); ++i) {
        const std::string swhere = where + "/structures/" + std::to_string(i);
        const json& js = structures[i];
        const std::string type = require_string(js, "type", swhere);
        if (type == "parents_children") {
            ParentsChildrenStructure pc;
            const json& parent = require_array(js, "parent", swhere);
            for (const json& cell : parent) {
                if (!cell.is_string()) {
                    raise(ErrorCode::SchemaError, swhere + "/parent: expected string entries");
                }
                pc.parent.push_back(cell.get<std::string>());
            }
            pc.children = string_matrix_from_json(require_member(js, "children", swhere),
                                                  swhere + "/children");
            sig.structures.emplace_back(std::move(pc));
        } else if (type == "block_list") {
            BlockListStructure bl;
            bl.blocks = string_matrix_from_json(require_member(js, "blocks", swhere),
                                                swhere + "/blocks");
            sig.structures.emplace_back(std::move(bl));
        } else {
            raise(ErrorCode::SchemaError, swhere + "/type: unknown structure type '" + type + "'");
        }
    }
    if (doc.contains("patch_signature")) {
        BlockListStructure bl;
        bl.blocks = string_matrix_from_json(
            require_member(doc["patch_signature"], "blocks", where + "/patch_signature"),
            where + "/patch_signature/blocks");
        sig.patch_signature = std::move(bl);
    }
    sig.total_instructions = static_cast<int>(require_int(doc, "total_instructions", where));
    sig.validate(where);
    return sig;
}

} // namespace vulmatch
