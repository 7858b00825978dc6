#pragma once

#include "ciporter/llm.hpp"
#include "ciporter/mining.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ciporter {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct CaseResult {
    std::string case_id;
    std::vector<Issue> issues;
    BuildOutcome build;
    std::optional<double> cs;  // against ground truth, when present
    std::optional<double> cb;
};

struct ReportAggregates {
    double bsr = 0.0;  // reported at 3 decimals
    std::optional<double> cs_median;
    std::optional<double> cb_median;
    std::map<std::string, int> issue_counts_by_type;

    bool operator==(const ReportAggregates&) const = default;
};

struct IterationTrace {
    int iteration = 0;
    int provider_calls = 0;
    std::vector<std::string> newly_fixed;
};

struct Report {
    std::string tool_version = std::string(kToolVersion);
    std::vector<CaseResult> cases;
    ReportAggregates aggregates;
    bool logic_checks_skipped = false;
    std::vector<IterationTrace> iterations;  // refine runs only
};

/// Recomputed from the cases; Report loading checks self-consistency
/// against the stored aggregates.
ReportAggregates compute_aggregates(const std::vector<CaseResult>& cases);

std::string report_to_json(const Report& report);
std::string report_to_text(const Report& report);

/// Parses and verifies: recomputing aggregates from the parsed cases must
/// reproduce the stored aggregates exactly.
Report report_from_json(const std::string& text);

/// Per-case simulated build plus CS/CB against ground truth; aggregates BSR
/// and medians. candidates maps case_id -> workflow text; any id mismatch
/// throws, listing the orphans.
Report score_corpus(const std::vector<TranslationRecord>& records,
                    const std::map<std::string, std::string>& candidates,
                    const LintContext& ctx, int workers = 1);

/// CLI entry: transpile | lint | score | refine | mine | effort.
/// Exit 0 on success, 1 on blocking issues or operational failure, 2 on
/// usage errors.
int run(int argc, const char* const* argv);

}  // namespace ciporter
