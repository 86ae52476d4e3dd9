#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vulmatch/binmodel.hpp"
#include "vulmatch/sigdb.hpp"

namespace vulmatch {

// Per-query-function precomputation: normalized block texts plus sorted
// ids, shared across every signature scored against the function.
struct NormalizedBlock {
    std::string id;
    std::vector<std::string> texts;
    std::vector<std::string> successors;  // sorted by block_id_less
    const BasicBlock* source = nullptr;
};

class NormalizedFunction {
public:
    explicit NormalizedFunction(const BinaryFunction& func);

    const BinaryFunction& function() const { return *func_; }
    const std::vector<NormalizedBlock>& blocks() const { return blocks_; }
    const NormalizedBlock* find(const std::string& id) const;

private:
    const BinaryFunction* func_;
    std::vector<NormalizedBlock> blocks_;  // sorted by block_id_less
};

struct AlignmentEntry {
    std::string sig_path;  // "parent/3", "child/1/2", "block/0/4"
    std::string query_block;
    std::uint64_t query_address = 0;
};

struct StructureMatch {
    int matched = 0;
    int total = 0;
    std::vector<AlignmentEntry> alignment;  // length == matched
};

struct FunctionMatchResult {
    std::string cve_id;
    int ordinal = 0;
    bool patched = false;
    double sim = 0.0;
    std::vector<StructureMatch> structure_matches;
};

struct MatcherOptions {
    double patch_threshold = 0.8;
};

struct BlockSim {
    int matched = 0;
    std::vector<std::pair<int, int>> alignment;  // (signature index, query index)
};

// Longest common subsequence of normalized instruction texts with the
// lexicographically earliest optimal alignment.
BlockSim block_similarity(const std::vector<std::string>& sig_block,
                          const std::vector<std::string>& query_block);

StructureMatch match_block_list(const BlockListStructure& structure, const NormalizedFunction& query);
StructureMatch match_block_list(const BlockListStructure& structure, const BinaryFunction& query);

StructureMatch match_parents_children(const ParentsChildrenStructure& structure,
                                      const NormalizedFunction& query);
StructureMatch match_parents_children(const ParentsChildrenStructure& structure,
                                      const BinaryFunction& query);

struct PatchBlockMatch {
    int index = 0;
    std::string best_block;
    int matched = 0;
    int total = 0;
    bool ok = false;
};

// Per-block detail behind detect_patch, also used by the report renderer.
std::vector<PatchBlockMatch> patch_match_details(const Signature& sig,
                                                 const NormalizedFunction& query,
                                                 double threshold);

bool detect_patch(const Signature& sig, const NormalizedFunction& query, double threshold = 0.8);
bool detect_patch(const Signature& sig, const BinaryFunction& query, double threshold = 0.8);

FunctionMatchResult score_signature(const Signature& sig, const NormalizedFunction& query,
                                    const MatcherOptions& options = {});
FunctionMatchResult score_signature(const Signature& sig, const BinaryFunction& query,
                                    const MatcherOptions& options = {});

double score_cve(const std::vector<const Signature*>& sigs, const NormalizedFunction& query,
                 const MatcherOptions& options = {});
double score_cve(const std::vector<Signature>& sigs, const BinaryFunction& query,
                 const MatcherOptions& options = {});

struct SignatureGroup {
    std::string cve_id;
    std::string function_name;
    std::vector<const Signature*> signatures;
};

// Signatures grouped by (cve_id, function_name) in stored order, optionally
// restricted to one CVE (UnknownCve when it has no record).
std::vector<SignatureGroup> signature_groups(const SignatureDatabase& db,
                                             const std::optional<std::string>& cve_filter = std::nullopt);

struct RankedFunction {
    std::string binary_id;
    std::string name;
    double score = 0.0;
    bool patched = false;
};

struct GroupRanking {
    std::string cve_id;
    std::string function_name;
    std::vector<RankedFunction> ranking;  // score descending
};

// Scores every query function against every signature group. The scoring
// grid is pure, so results are identical for any `jobs` value.
std::vector<GroupRanking> rank_functions(const SignatureDatabase& db,
                                         const std::vector<BinaryFunction>& corpus,
                                         const MatcherOptions& options = {},
                                         int jobs = 1,
                                         const std::optional<std::string>& cve_filter = std::nullopt);

} // namespace vulmatch
