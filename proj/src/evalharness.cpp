#include "vulmatch/evalharness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

namespace vulmatch {

bool top1_flag(const CaseScores& scores) {
    return std::all_of(scores.others.begin(), scores.others.end(),
                       [&scores](double s) { return s < scores.ground_truth; });
}

bool mismatch_flag(const CaseScores& scores, double alpha) {
    if (scores.ground_truth < kLowScoreCutoff) {
        return false;
    }
    const double threshold = scores.ground_truth - alpha;
    return std::any_of(scores.others.begin(), scores.others.end(),
                       [threshold](double s) { return s > threshold; });
}

double top1_from_grid(const std::vector<CaseScores>& grid) {
    if (grid.empty()) {
        return 0.0;
    }
    std::size_t hits = 0;
    for (const CaseScores& scores : grid) {
        hits += top1_flag(scores) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(grid.size());
}

double mismatch_from_grid(const std::vector<CaseScores>& grid, double alpha) {
    if (grid.empty()) {
        return 0.0;
    }
    std::size_t flagged = 0;
    for (const CaseScores& scores : grid) {
        flagged += mismatch_flag(scores, alpha) ? 1 : 0;
    }
    return static_cast<double>(flagged) / static_cast<double>(grid.size());
}

namespace {

std::vector<const Signature*> case_signatures(const EvalCase& ecase, const SignatureDatabase& db) {
    std::vector<const Signature*> sigs;
    for (const Signature& sig : db.signatures) {
        if (sig.cve_id == ecase.cve_id && sig.function_name == ecase.ground_truth_function) {
            sigs.push_back(&sig);
        }
    }
    if (sigs.empty()) {
        raise(ErrorCode::MissingSignatures,
              "no signatures for " + ecase.cve_id + " / " + ecase.ground_truth_function);
    }
    return sigs;
}

} // namespace

EvalMetrics evaluate(const std::vector<EvalCase>& cases, const SignatureDatabase& db,
                     double alpha, const MatcherOptions& options) {
    EvalMetrics metrics;
    metrics.alpha = alpha;

    std::vector<CaseScores> grid;
    for (const EvalCase& ecase : cases) {
        const std::vector<const Signature*> sigs = case_signatures(ecase, db);

        CaseOutcome outcome;
        outcome.id = ecase.id;
        CaseScores scores;
        bool found_ground_truth = false;

        for (const EvalCorpusEntry& entry : ecase.corpus) {
            for (const BinaryFunction& func : entry.functions) {
                const double score = score_cve(sigs, NormalizedFunction(func), options);
                outcome.ranking.push_back({entry.label, func.name, score});
                const bool is_ground_truth = !found_ground_truth &&
                                             entry.label == ecase.expected_vulnerable_binary &&
                                             func.name == ecase.ground_truth_function;
                if (is_ground_truth) {
                    found_ground_truth = true;
                    scores.ground_truth = score;
                } else {
                    scores.others.push_back(score);
                }
            }
        }
        if (!found_ground_truth) {
            raise(ErrorCode::ValidationError,
                  "case '" + ecase.id + "': ground-truth function '" + ecase.ground_truth_function +
                      "' not present in binary '" + ecase.expected_vulnerable_binary + "'");
        }

        std::sort(outcome.ranking.begin(), outcome.ranking.end(),
                  [](const ScoredFunction& a, const ScoredFunction& b) {
                      if (a.score != b.score) return a.score > b.score;
                      if (a.binary != b.binary) return a.binary < b.binary;
                      return a.function < b.function;
                  });
        outcome.ground_truth_score = scores.ground_truth;
        outcome.top1 = top1_flag(scores);
        outcome.mismatch = mismatch_flag(scores, alpha);
        metrics.per_case.push_back(std::move(outcome));
        grid.push_back(std::move(scores));
    }

    metrics.top1 = top1_from_grid(grid);
    metrics.mismatch = mismatch_from_grid(grid, alpha);
    return metrics;
}

double top1_score(const std::vector<EvalCase>& cases, const SignatureDatabase& db,
                  const MatcherOptions& options) {
    return evaluate(cases, db, /*alpha=*/0.1, options).top1;
}

double mismatch_score(const std::vector<EvalCase>& cases, const SignatureDatabase& db,
                      double alpha, const MatcherOptions& options) {
    return evaluate(cases, db, alpha, options).mismatch;
}

namespace {

std::string format_sim(double sim) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", sim);
    return buf;
}

struct StructureShape {
    struct Part {
        std::string group;
        const std::vector<std::string>* texts;
        std::string path_head;  // "parent", "child/0", "block/2"
    };
    std::string type_name;
    std::vector<Part> parts;
};

StructureShape shape_of(const SignatureStructure& structure) {
    StructureShape shape;
    if (const auto* pc = std::get_if<ParentsChildrenStructure>(&structure)) {
        shape.type_name = "parents_children";
        shape.parts.push_back({"parent", &pc->parent, "parent"});
        for (std::size_t c = 0; c < pc->children.size(); ++c) {
            shape.parts.push_back({"child " + std::to_string(c + 1), &pc->children[c],
                                   "child/" + std::to_string(c)});
        }
    } else {
        const auto& bl = std::get<BlockListStructure>(structure);
        shape.type_name = "block_list";
        for (std::size_t b = 0; b < bl.blocks.size(); ++b) {
            shape.parts.push_back({"block " + std::to_string(b + 1), &bl.blocks[b],
                                   "block/" + std::to_string(b)});
        }
    }
    return shape;
}

} // namespace

ReportData build_report_data(const FunctionMatchResult& result, const Signature& sig,
                             const BinaryFunction& query, double patch_threshold) {
    if (result.structure_matches.size() != sig.structures.size()) {
        raise(ErrorCode::ValidationError,
              "match result does not belong to this signature (structure count differs)");
    }

    ReportData data;
    data.cve_id = sig.cve_id;
    data.function_name = sig.function_name;
    data.kind = signature_kind_name(sig.kind);
    data.ordinal = sig.ordinal;
    data.query_binary = query.binary_id;
    data.query_function = query.name;
    data.patched = result.patched;
    data.sim = result.sim;

    for (std::size_t si = 0; si < sig.structures.size(); ++si) {
        const StructureMatch& match = result.structure_matches[si];
        const StructureShape shape = shape_of(sig.structures[si]);

        // sig_path -> (query block, query address)
        std::map<std::string, const AlignmentEntry*> aligned;
        for (const AlignmentEntry& entry : match.alignment) {
            aligned[entry.sig_path] = &entry;
        }

        ReportSection section;
        section.title = "structure " + std::to_string(si + 1) + " (" + shape.type_name + ")";
        section.matched = match.matched;
        section.total = match.total;
        for (const auto& part : shape.parts) {
            for (std::size_t i = 0; i < part.texts->size(); ++i) {
                ReportRow row;
                row.group = part.group;
                row.left = (*part.texts)[i];
                auto it = aligned.find(part.path_head + "/" + std::to_string(i));
                if (it != aligned.end()) {
                    row.matched = true;
                    const AlignmentEntry& entry = *it->second;
                    const BasicBlock& block = query.block_at(entry.query_block);
                    std::string text;
                    for (const Instruction& insn : block.instructions) {
                        if (insn.address == entry.query_address) {
                            text = insn.raw_text;
                            break;
                        }
                    }
                    row.right = format_address(entry.query_address) + "  " + text;
                }
                section.rows.push_back(std::move(row));
            }
        }
        data.matched_total += section.matched;
        data.total += section.total;
        data.sections.push_back(std::move(section));
    }

    if (result.patched) {
        const auto details = patch_match_details(sig, NormalizedFunction(query), patch_threshold);
        for (const PatchBlockMatch& detail : details) {
            data.patch_notes.push_back("patch block " + std::to_string(detail.index + 1) +
                                       " -> query block " + detail.best_block + " (" +
                                       std::to_string(detail.matched) + "/" +
                                       std::to_string(detail.total) + ")");
        }
    }
    return data;
}

std::string render_report_text(const ReportData& data) {
    std::ostringstream out;
    out << "=== " << data.cve_id << " " << data.function_name << " [" << data.kind << " #"
        << data.ordinal << "] vs " << data.query_binary << ":" << data.query_function
        << " ===\n";
    if (data.patched) {
        out << "PATCHED (patch signature matched)\n";
        for (const std::string& note : data.patch_notes) {
            out << "  " << note << "\n";
        }
    }

    std::size_t width = 0;
    for (const ReportSection& section : data.sections) {
        for (const ReportRow& row : section.rows) {
            width = std::max(width, row.left.size());
        }
    }

    for (const ReportSection& section : data.sections) {
        out << "\n" << section.title << "\n";
        std::string group;
        for (const ReportRow& row : section.rows) {
            if (row.group != group) {
                group = row.group;
                out << "  " << group << ":\n";
            }
            out << "    " << row.left << std::string(width - row.left.size(), ' ') << " | "
                << (row.matched ? row.right : "<unmatched>") << "\n";
        }
        out << "  -- " << section.title << ": " << section.matched << "/" << section.total
            << "\n";
    }

    out << "\ntotal: " << data.matched_total << "/" << data.total
        << ", sim=" << format_sim(data.sim) << "\n";
    return out.str();
}

std::string render_report(const FunctionMatchResult& result, const Signature& sig,
                          const BinaryFunction& query, double patch_threshold) {
    return render_report_text(build_report_data(result, sig, query, patch_threshold));
}

json report_data_to_json(const ReportData& data) {
    json doc;
    doc["cve_id"] = data.cve_id;
    doc["function_name"] = data.function_name;
    doc["kind"] = data.kind;
    doc["ordinal"] = data.ordinal;
    doc["query_binary"] = data.query_binary;
    doc["query_function"] = data.query_function;
    doc["patched"] = data.patched;
    doc["sim"] = data.sim;
    doc["matched"] = data.matched_total;
    doc["total"] = data.total;
    doc["sections"] = json::array();
    for (const ReportSection& section : data.sections) {
        json jsection;
        jsection["title"] = section.title;
        jsection["matched"] = section.matched;
        jsection["total"] = section.total;
        jsection["rows"] = json::array();
        for (const ReportRow& row : section.rows) {
            json jrow;
            jrow["group"] = row.group;
            jrow["left"] = row.left;
            jrow["matched"] = row.matched;
            if (row.matched) {
                jrow["right"] = row.right;
            }
            jsection["rows"].push_back(std::move(jrow));
        }
        doc["sections"].push_back(std::move(jsection));
    }
    doc["patch_notes"] = data.patch_notes;
    return doc;
}

ReportData report_data_from_json(const json& doc, const std::string& where) {
    ReportData data;
    data.cve_id = require_string(doc, "cve_id", where);
    data.function_name = require_string(doc, "function_name", where);
    data.kind = require_string(doc, "kind", where);
    data.ordinal = static_cast<int>(require_int(doc, "ordinal", where));
    data.query_binary = require_string(doc, "query_binary", where);
    data.query_function = require_string(doc, "query_function", where);
    data.patched = require_member(doc, "patched", where).get<bool>();
    data.sim = require_member(doc, "sim", where).get<double>();
    data.matched_total = static_cast<int>(require_int(doc, "matched", where));
    data.total = static_cast<int>(require_int(doc, "total", where));
    const json& sections = require_array(doc, "sections", where);
    for (std::size_t si = 0; si < sections.size(); ++si) {
        const std::string swhere = where + "/sections/" + std::to_string(si);
        const json& jsection = sections[si];
        ReportSection section;
        section.title = require_string(jsection, "title", swhere);
        section.matched = static_cast<int>(require_int(jsection, "matched", swhere));
        section.total = static_cast<int>(require_int(jsection, "total", swhere));
        const json& rows = require_array(jsection, "rows", swhere);
        for (std::size_t ri = 0; ri < rows.size(); ++ri) {
            const std::string rwhere = swhere + "/rows/" + std::to_string(ri);
            const json& jrow = rows[ri];
            ReportRow row;
            row.group = require_string(jrow, "group", rwhere);
            row.left = require_string(jrow, "left", rwhere);
            row.matched = require_member(jrow, "matched", rwhere).get<bool>();
            if (row.matched) {
                row.right = require_string(jrow, "right", rwhere);
            }
            section.rows.push_back(std::move(row));
        }
        data.sections.push_back(std::move(section));
    }
    if (doc.contains("patch_notes")) {
        for (const json& note : doc["patch_notes"]) {
            data.patch_notes.push_back(note.get<std::string>());
        }
    }
    return data;
}

std::vector<EvalCase> load_cases_file(const std::string& path) {
    const json doc = load_json_file(path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    const json& jcases = require_array(doc, "cases", path);
    std::vector<EvalCase> cases;
    for (std::size_t ci = 0; ci < jcases.size(); ++ci) {
        const std::string cwhere = path + "/cases/" + std::to_string(ci);
        const json& jcase = jcases[ci];
        EvalCase ecase;
        ecase.cve_id = require_string(jcase, "cve_id", cwhere);
        ecase.ground_truth_function = require_string(jcase, "ground_truth_function", cwhere);
        ecase.expected_vulnerable_binary =
            require_string(jcase, "expected_vulnerable_binary", cwhere);
        ecase.id = jcase.contains("id") ? jcase["id"].get<std::string>()
                                        : ecase.cve_id + "/" + ecase.ground_truth_function;
        const json& corpus = require_array(jcase, "corpus", cwhere);
        for (std::size_t bi = 0; bi < corpus.size(); ++bi) {
            const std::string bwhere = cwhere + "/corpus/" + std::to_string(bi);
            const json& jentry = corpus[bi];
            EvalCorpusEntry entry;
            entry.label = require_string(jentry, "binary", bwhere);
            const json& files = require_array(jentry, "functions", bwhere);
            for (const json& file : files) {
                if (!file.is_string()) {
                    raise(ErrorCode::SchemaError, bwhere + "/functions: expected string paths");
                }
                const std::filesystem::path ref(file.get<std::string>());
                const std::filesystem::path resolved = ref.is_absolute() ? ref : base / ref;
                entry.functions.push_back(load_function_file(resolved.string()));
            }
            ecase.corpus.push_back(std::move(entry));
        }
        cases.push_back(std::move(ecase));
    }
    return cases;
}

json metrics_to_json(const EvalMetrics& metrics) {
    json doc;
    doc["alpha"] = metrics.alpha;
    doc["top1"] = metrics.top1;
    doc["mismatch"] = metrics.mismatch;
    doc["per_case"] = json::array();
    for (const CaseOutcome& outcome : metrics.per_case) {
        json jcase;
        jcase["id"] = outcome.id;
        jcase["ground_truth_score"] = outcome.ground_truth_score;
        jcase["top1"] = outcome.top1;
        jcase["mismatch"] = outcome.mismatch;
        jcase["ranking"] = json::array();
        for (const ScoredFunction& entry : outcome.ranking) {
            jcase["ranking"].push_back(
                {{"binary", entry.binary}, {"function", entry.function}, {"score", entry.score}});
        }
        doc["per_case"].push_back(std::move(jcase));
    }
    return doc;
}

} // namespace vulmatch
