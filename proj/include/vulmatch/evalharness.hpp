#pragma once

#include <string>
#include <vector>

#include "vulmatch/matcher.hpp"

namespace vulmatch {

struct EvalCorpusEntry {
    std::string label;
    std::vector<BinaryFunction> functions;
};

struct EvalCase {
    std::string id;
    std::string cve_id;
    std::string ground_truth_function;
    std::string expected_vulnerable_binary;
    std::vector<EvalCorpusEntry> corpus;
};

struct ScoredFunction {
    std::string binary;
    std::string function;
    double score = 0.0;
};

struct CaseOutcome {
    std::string id;
    double ground_truth_score = 0.0;
    bool top1 = false;
    bool mismatch = false;
    std::vector<ScoredFunction> ranking;  // score descending
};

struct EvalMetrics {
    double top1 = 0.0;
    double mismatch = 0.0;
    double alpha = 0.0;
    std::vector<CaseOutcome> per_case;
};

// Ground-truth scores below this cutoff never flag a mismatch; the failure
// is in detecting the vulnerable function, not in its competitors.
inline constexpr double kLowScoreCutoff = 0.6;

// Score-grid primitives shared by the corpus metrics and property tests.
struct CaseScores {
    double ground_truth = 0.0;
    std::vector<double> others;
};

bool top1_flag(const CaseScores& scores);                       // strict: ties fail
bool mismatch_flag(const CaseScores& scores, double alpha);     // gated by kLowScoreCutoff
double top1_from_grid(const std::vector<CaseScores>& grid);
double mismatch_from_grid(const std::vector<CaseScores>& grid, double alpha);

EvalMetrics evaluate(const std::vector<EvalCase>& cases, const SignatureDatabase& db,
                     double alpha, const MatcherOptions& options = {});
double top1_score(const std::vector<EvalCase>& cases, const SignatureDatabase& db,
                  const MatcherOptions& options = {});
double mismatch_score(const std::vector<EvalCase>& cases, const SignatureDatabase& db,
                      double alpha, const MatcherOptions& options = {});

// --- interpretability report ---------------------------------------------

struct ReportRow {
    std::string group;   // "parent", "child 1", "block 2"
    std::string left;    // signature instruction
    std::string right;   // matched query instruction with address
    bool matched = false;
};

struct ReportSection {
    std::string title;
    std::vector<ReportRow> rows;  // one per signature instruction
    int matched = 0;
    int total = 0;
};

struct ReportData {
    std::string cve_id;
    std::string function_name;
    std::string kind;
    int ordinal = 0;
    std::string query_binary;
    std::string query_function;
    bool patched = false;
    double sim = 0.0;
    int matched_total = 0;
    int total = 0;
    std::vector<ReportSection> sections;
    std::vector<std::string> patch_notes;  // matched patch blocks when patched
};

ReportData build_report_data(const FunctionMatchResult& result, const Signature& sig,
                             const BinaryFunction& query, double patch_threshold = 0.8);
std::string render_report_text(const ReportData& data);
std::string render_report(const FunctionMatchResult& result, const Signature& sig,
                          const BinaryFunction& query, double patch_threshold = 0.8);

json report_data_to_json(const ReportData& data);
ReportData report_data_from_json(const json& doc, const std::string& where);

// cases.json loader: function document paths resolve relative to the cases
// file's directory.
std::vector<EvalCase> load_cases_file(const std::string& path);
json metrics_to_json(const EvalMetrics& metrics);

} // namespace vulmatch
