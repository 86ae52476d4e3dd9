#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vulmatch/binmodel.hpp"
#include "vulmatch/diffcore.hpp"

namespace vulmatch {

// One block's content plus its CFG-adjacent blocks' content: lexical
// information with local control flow.
struct ParentsChildrenStructure {
    std::vector<std::string> parent;                 // normalized instruction texts
    std::vector<std::vector<std::string>> children;  // one entry per child block
};

// Instruction lists grouped by block, no control-flow edges.
struct BlockListStructure {
    std::vector<std::vector<std::string>> blocks;
};

using SignatureStructure = std::variant<ParentsChildrenStructure, BlockListStructure>;

int structure_instruction_count(const SignatureStructure& structure);

enum class SignatureKind { Add, Delete, ChangeOneBlock, ChangeManyBlock };

const char* signature_kind_name(SignatureKind kind);
SignatureKind signature_kind_from_name(const std::string& name, const std::string& where);

struct Signature {
    std::string cve_id;
    std::string function_name;
    SignatureKind kind = SignatureKind::Add;
    int ordinal = 0;
    std::vector<SignatureStructure> structures;
    std::optional<BlockListStructure> patch_signature;
    int total_instructions = 0;

    int computed_total() const;
    void validate(const std::string& where) const;
};

// Connected group of added blocks (edges taken undirected).
struct AddBatch {
    std::vector<std::string> block_ids;  // sorted by block_id_less
};

struct AddedBlocks {
    std::vector<std::string> added;     // every line-mapped instruction maps to an added line
    std::vector<std::string> modified;  // mixes added and unchanged line mappings
};

// Controls how patch-site line numbers are matched against line_map
// entries: with an empty source_file any file matches.
struct SiggenOptions {
    std::string source_file;
};

AddedBlocks find_added_blocks(const BinaryFunction& patched,
                              const std::vector<PatchSite>& add_sites,
                              const SiggenOptions& options = {});

std::vector<AddBatch> find_add_batches(const BinaryFunction& patched,
                                       const std::vector<std::string>& added);

// Unchanged blocks with a CFG edge into the batch; `added_all` is the full
// added set so blocks of other batches never qualify.
std::vector<std::string> find_leading_blocks(const BinaryFunction& patched,
                                             const std::vector<std::string>& added_all,
                                             const AddBatch& batch);

// Maximal Jaccard overlap of line-map line sets, falling back to a
// normalized-instruction LCS when the leading block has no mapped lines.
// `new_to_old` rebases the leading block's line numbers into the old
// file's coordinates; pass nullptr when the numbering is shared.
std::string find_counterpart_block(const BinaryFunction& vulnerable,
                                   const BinaryFunction& patched,
                                   const std::string& leading_id,
                                   const std::map<int, int>* new_to_old = nullptr);

Signature build_add_signature(const BinaryFunction& vulnerable,
                              const BinaryFunction& patched,
                              const std::vector<PatchSite>& add_sites,
                              const std::string& cve_id,
                              const SiggenOptions& options = {},
                              const std::map<int, int>* new_to_old = nullptr);

Signature build_delete_signature(const BinaryFunction& vulnerable,
                                 const std::vector<PatchSite>& delete_sites,
                                 const std::string& cve_id,
                                 const SiggenOptions& options = {});

Signature build_change_signature(const BinaryFunction& vulnerable,
                                 const BinaryFunction& patched,
                                 const std::vector<PatchSite>& change_sites,
                                 const std::string& cve_id,
                                 const SiggenOptions& options = {});

struct GenerationResult {
    std::vector<Signature> signatures;      // ordered Add, Delete, Change
    std::vector<std::string> diagnostics;   // per-kind builder failures etc.
};

GenerationResult generate_signatures(const BinaryFunction& vulnerable,
                                     const BinaryFunction& patched,
                                     const std::string& old_source,
                                     const std::string& new_source,
                                     const std::string& cve_id,
                                     const SiggenOptions& options = {});

json signature_to_json(const Signature& sig);
Signature signature_from_json(const json& doc, const std::string& where);

} // namespace vulmatch
