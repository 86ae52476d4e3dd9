#include "vulmatch/matcher.hpp"

#include <algorithm>
#include <thread>

#include "vulmatch/lcs.hpp"

namespace vulmatch {

namespace {

std::string path_join(const char* head, int a) {
    return std::string(head) + "/" + std::to_string(a);
}

std::string path_join(const char* head, int a, int b) {
    return std::string(head) + "/" + std::to_string(a) + "/" + std::to_string(b);
}

void append_alignment(StructureMatch& match, const std::string& path_head,
                      const std::vector<std::pair<int, int>>& pairs,
                      const NormalizedBlock& query_block) {
    for (const auto& [si, qi] : pairs) {
        AlignmentEntry entry;
        entry.sig_path = path_head + "/" + std::to_string(si);
        entry.query_block = query_block.id;
        entry.query_address = query_block.source->instructions[static_cast<std::size_t>(qi)].address;
        match.alignment.push_back(std::move(entry));
    }
}

// Exact injective assignment of children to distinct successors; children
// may stay unassigned. Returns the best per-child successor index (-1 for
// none), deterministic: the first maximum under (successor order, none)
// enumeration wins.
struct AssignmentSearch {
    const std::vector<std::vector<int>>& sim;  // [child][succ]
    int succ_count;
    std::vector<int> current;
    std::vector<int> best;
    int best_score = -1;
    std::vector<bool> used;

    AssignmentSearch(const std::vector<std::vector<int>>& sim_matrix, int succs)
        : sim(sim_matrix), succ_count(succs),
          current(sim_matrix.size(), -1), best(sim_matrix.size(), -1),
          used(static_cast<std::size_t>(succs), false) {}

    void run(std::size_t child, int score) {
        if (child == sim.size()) {
            if (score > best_score) {
                best_score = score;
                best = current;
            }
            return;
        }
        for (int s = 0; s < succ_count; ++s) {
            if (used[static_cast<std::size_t>(s)]) {
                continue;
            }
            used[static_cast<std::size_t>(s)] = true;
            current[child] = s;
            run(child + 1, score + sim[child][static_cast<std::size_t>(s)]);
            used[static_cast<std::size_t>(s)] = false;
        }
        current[child] = -1;
        run(child + 1, score);
    }
};

std::vector<int> assign_children(const std::vector<std::vector<int>>& sim, int succ_count,
                                 int& out_score) {
    const std::size_t children = sim.size();
    if (children <= 6) {
        AssignmentSearch search(sim, succ_count);
        search.run(0, 0);
        out_score = std::max(search.best_score, 0);
        return search.best;
    }

    // Greedy by descending pair similarity; ties by child index then
    // successor index (successors are pre-sorted by block id).
    struct Pair {
        int sim = 0;
        int child = 0;
        int succ = 0;
    };
    std::vector<Pair> pairs;
    for (std::size_t c = 0; c < children; ++c) {
        for (int s = 0; s < succ_count; ++s) {
            const int value = sim[c][static_cast<std::size_t>(s)];
            if (value > 0) {
                pairs.push_back({value, static_cast<int>(c), s});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        if (a.child != b.child) return a.child < b.child;
        return a.succ < b.succ;
    });
    std::vector<int> result(children, -1);
    std::vector<bool> child_used(children, false);
    std::vector<bool> succ_used(static_cast<std::size_t>(succ_count), false);
    int score = 0;
    for (const Pair& p : pairs) {
        if (child_used[static_cast<std::size_t>(p.child)] || succ_used[static_cast<std::size_t>(p.succ)]) {
            continue;
        }
        child_used[static_cast<std::size_t>(p.child)] = true;
        succ_used[static_cast<std::size_t>(p.succ)] = true;
        result[static_cast<std::size_t>(p.child)] = p.succ;
        score += p.sim;
    }
    out_score = score;
    return result;
}

} // namespace

NormalizedFunction::NormalizedFunction(const BinaryFunction& func) : func_(&func) {
    for (const std::string& id : func.block_ids_sorted()) {
        const BasicBlock& block = func.block_at(id);
        NormalizedBlock nb;
        nb.id = id;
        nb.texts = normalize_block(block);
        nb.successors = block.successors;
        std::sort(nb.successors.begin(), nb.successors.end(), block_id_less);
        nb.source = &block;
        blocks_.push_back(std::move(nb));
    }
}

const NormalizedBlock* NormalizedFunction::find(const std::string& id) const {
    for (const NormalizedBlock& block : blocks_) {
        if (block.id == id) {
            return &block;
        }
    }
    return nullptr;
}

BlockSim block_similarity(const std::vector<std::string>& sig_block,
                          const std::vector<std::string>& query_block) {
    BlockSim out;
    out.alignment = lcs_align(sig_block, query_block);
    out.matched = static_cast<int>(out.alignment.size());
    return out;
}

StructureMatch match_block_list(const BlockListStructure& structure, const NormalizedFunction& query) {
    StructureMatch match;
    for (std::size_t bi = 0; bi < structure.blocks.size(); ++bi) {
        const std::vector<std::string>& sig_block = structure.blocks[bi];
        match.total += static_cast<int>(sig_block.size());

        int best = 0;
        const NormalizedBlock* best_block = nullptr;
        for (const NormalizedBlock& candidate : query.blocks()) {
            const int len = lcs_length(sig_block, candidate.texts);
            if (len > best) {
                best = len;
                best_block = &candidate;
            }
        }
        if (best_block != nullptr) {
            match.matched += best;
            append_alignment(match, path_join("block", static_cast<int>(bi)),
                             lcs_align(sig_block, best_block->texts), *best_block);
        }
    }
    return match;
}

StructureMatch match_parents_children(const ParentsChildrenStructure& structure,
                                      const NormalizedFunction& query) {
    StructureMatch match;
    match.total = static_cast<int>(structure.parent.size());
    for (const auto& child : structure.children) {
        match.total += static_cast<int>(child.size());
    }

    int best_score = -1;
    const NormalizedBlock* best_parent = nullptr;
    std::vector<const NormalizedBlock*> best_succs;
    std::vector<int> best_assignment;

    for (const NormalizedBlock& candidate : query.blocks()) {
        const int parent_sim = lcs_length(structure.parent, candidate.texts);

        std::vector<const NormalizedBlock*> succs;
        for (const std::string& id : candidate.successors) {
            succs.push_back(query.find(id));
        }
        std::vector<std::vector<int>> sim(structure.children.size(),
                                          std::vector<int>(succs.size(), 0));
        for (std::size_t c = 0; c < structure.children.size(); ++c) {
            for (std::size_t s = 0; s < succs.size(); ++s) {
                sim[c][s] = lcs_length(structure.children[c], succs[s]->texts);
            }
        }
        int child_score = 0;
        std::vector<int> assignment =
            assign_children(sim, static_cast<int>(succs.size()), child_score);

        const int score = parent_sim + child_score;
        if (score > best_score) {
            best_score = score;
            best_parent = &candidate;
            best_succs = succs;
            best_assignment = std::move(assignment);
        }
    }

    if (best_parent == nullptr || best_score <= 0) {
        return match;  // nothing matched anywhere
    }

    match.matched = best_score;
    append_alignment(match, "parent", lcs_align(structure.parent, best_parent->texts), *best_parent);
    for (std::size_t c = 0; c < structure.children.size(); ++c) {
        const int s = best_assignment[c];
        if (s < 0) {
            continue;
        }
        const NormalizedBlock& succ = *best_succs[static_cast<std::size_t>(s)];
        append_alignment(match, path_join("child", static_cast<int>(c)),
                         lcs_align(structure.children[c], succ.texts), succ);
    }
    return match;
}

StructureMatch match_block_list(const BlockListStructure& structure, const BinaryFunction& query) {
    return match_block_list(structure, NormalizedFunction(query));
}

StructureMatch match_parents_children(const ParentsChildrenStructure& structure,
                                      const BinaryFunction& query) {
    return match_parents_children(structure, NormalizedFunction(query));
}

std::vector<PatchBlockMatch> patch_match_details(const Signature& sig,
                                                 const NormalizedFunction& query,
                                                 double threshold) {
    std::vector<PatchBlockMatch> details;
    if (!sig.patch_signature.has_value()) {
        return details;
    }
    const auto& blocks = sig.patch_signature->blocks;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        PatchBlockMatch detail;
        detail.index = static_cast<int>(bi);
        detail.total = static_cast<int>(blocks[bi].size());
        for (const NormalizedBlock& candidate : query.blocks()) {
            const int len = lcs_length(blocks[bi], candidate.texts);
            if (len > detail.matched) {
                detail.matched = len;
                detail.best_block = candidate.id;
            }
        }
        detail.ok = detail.total > 0 &&
                    static_cast<double>(detail.matched) / detail.total >= threshold;
        details.push_back(std::move(detail));
    }
    return details;
}

bool detect_patch(const Signature& sig, const NormalizedFunction& query, double threshold) {
    if (!sig.patch_signature.has_value()) {
        return false;
    }
    const auto details = patch_match_details(sig, query, threshold);
    return std::all_of(details.begin(), details.end(),
                       [](const PatchBlockMatch& d) { return d.ok; });
}

bool detect_patch(const Signature& sig, const BinaryFunction& query, double threshold) {
    return detect_patch(sig, NormalizedFunction(query), threshold);
}

FunctionMatchResult score_signature(const Signature& sig, const NormalizedFunction& query,
                                    const MatcherOptions& options) {
    FunctionMatchResult result;
    result.cve_id = sig.cve_id;
    result.ordinal = sig.ordinal;
    result.patched = detect_patch(sig, query, options.patch_threshold);

    int matched_sum = 0;
    int total_sum = 0;
    for (const SignatureStructure& structure : sig.structures) {
        StructureMatch match;
        if (const auto* pc = std::get_if<ParentsChildrenStructure>(&structure)) {
            match = match_parents_children(*pc, query);
        } else {
            match = match_block_list(std::get<BlockListStructure>(structure), query);
        }
        matched_sum += match.matched;
        total_sum += match.total;
        result.structure_matches.push_back(std::move(match));
    }
    result.sim = result.patched || total_sum == 0
                     ? 0.0
                     : static_cast<double>(matched_sum) / static_cast<double>(total_sum);
    return result;
}

FunctionMatchResult score_signature(const Signature& sig, const BinaryFunction& query,
                                    const MatcherOptions& options) {
    return score_signature(sig, NormalizedFunction(query), options);
}

double score_cve(const std::vector<const Signature*>& sigs, const NormalizedFunction& query,
                 const MatcherOptions& options) {
    double weighted = 0.0;
    double weight = 0.0;
    for (const Signature* sig : sigs) {
        const FunctionMatchResult result = score_signature(*sig, query, options);
        if (result.patched) {
            return 0.0;  // patch evidence dominates
        }
        weighted += result.sim * sig->total_instructions;
        weight += sig->total_instructions;
    }
    return weight == 0.0 ? 0.0 : weighted / weight;
}

double score_cve(const std::vector<Signature>& sigs, const BinaryFunction& query,
                 const MatcherOptions& options) {
    std::vector<const Signature*> ptrs;
    ptrs.reserve(sigs.size());
    for (const Signature& sig : sigs) {
        ptrs.push_back(&sig);
    }
    return score_cve(ptrs, NormalizedFunction(query), options);
}

std::vector<SignatureGroup> signature_groups(const SignatureDatabase& db,
                                             const std::optional<std::string>& cve_filter) {
    if (cve_filter.has_value() && db.find_record(*cve_filter) == nullptr) {
        raise(ErrorCode::UnknownCve, "no record for '" + *cve_filter + "'");
    }
    std::vector<SignatureGroup> groups;
    for (const Signature& sig : db.signatures) {
        if (cve_filter.has_value() && sig.cve_id != *cve_filter) {
            continue;
        }
        auto it = std::find_if(groups.begin(), groups.end(), [&sig](const SignatureGroup& g) {
            return g.cve_id == sig.cve_id && g.function_name == sig.function_name;
        });
        if (it == groups.end()) {
            groups.push_back({sig.cve_id, sig.function_name, {}});
            it = groups.end() - 1;
        }
        it->signatures.push_back(&sig);
    }
    return groups;
}

std::vector<GroupRanking> rank_functions(const SignatureDatabase& db,
                                         const std::vector<BinaryFunction>& corpus,
                                         const MatcherOptions& options,
                                         int jobs,
                                         const std::optional<std::string>& cve_filter) {
    const std::vector<SignatureGroup> groups = signature_groups(db, cve_filter);

    struct Cell {
        double score = 0.0;
        bool patched = false;
    };
    std::vector<std::vector<Cell>> grid(groups.size(), std::vector<Cell>(corpus.size()));

    auto score_function = [&](std::size_t f) {
        const NormalizedFunction view(corpus[f]);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            bool patched = false;
            double weighted = 0.0;
            double weight = 0.0;
            for (const Signature* sig : groups[g].signatures) {
                const FunctionMatchResult result = score_signature(*sig, view, options);
                patched = patched || result.patched;
                weighted += result.sim * sig->total_instructions;
                weight += sig->total_instructions;
            }
            Cell& cell = grid[g][f];
            cell.patched = patched;
            cell.score = (patched || weight == 0.0) ? 0.0 : weighted / weight;
        }
    };

    const int workers = std::max(1, jobs);
    if (workers == 1 || corpus.size() <= 1) {
        for (std::size_t f = 0; f < corpus.size(); ++f) {
            score_function(f);
        }
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                for (std::size_t f = static_cast<std::size_t>(w); f < corpus.size();
                     f += static_cast<std::size_t>(workers)) {
                    score_function(f);
                }
            });
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    std::vector<GroupRanking> rankings;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        GroupRanking ranking;
        ranking.cve_id = groups[g].cve_id;
        ranking.function_name = groups[g].function_name;
        for (std::size_t f = 0; f < corpus.size(); ++f) {
            ranking.ranking.push_back({corpus[f].binary_id, corpus[f].name, grid[g][f].score,
                                       grid[g][f].patched});
        }
        std::sort(ranking.ranking.begin(), ranking.ranking.end(),
                  [](const RankedFunction& a, const RankedFunction& b) {
                      if (a.score != b.score) return a.score > b.score;
                      if (a.name != b.name) return a.name < b.name;
                      return a.binary_id < b.binary_id;
                  });
        rankings.push_back(std::move(ranking));
    }
    return rankings;
}

} // namespace vulmatch
