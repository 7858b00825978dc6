#include "ciporter/driver.hpp"

#include "ciporter/parallel.hpp"
#include "ciporter/transpiler.hpp"
#include "ciporter/yaml_frontend.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

namespace ciporter {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream content;
    content << in.rdbuf();
    return content.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write " + out_path);
    out << content;
}

json issue_to_json(const Issue& issue) {
    json doc{{"category", std::string(to_string_view(issue.category))},
             {"type", std::string(to_string_view(issue.issue_type))},
             {"path", issue.path},
             {"severity", std::string(to_string_view(issue.severity))},
             {"message", issue.message},
             {"evidence", issue.evidence}};
    if (issue.line)
        doc["line"] = *issue.line;
    return doc;
}

Issue issue_from_json(const json& doc) {
    Issue issue;
    issue.issue_type =
        issue_type_from_name(doc.value("type", "")).value_or(IssueType::MissingSymbol);
    issue.category = category_of(issue.issue_type);
    issue.severity = severity_of(issue.issue_type);
    issue.path = doc.value("path", "");
    issue.message = doc.value("message", "");
    issue.evidence = doc.value("evidence", "");
    if (doc.contains("line"))
        issue.line = doc["line"].get<int>();
    return issue;
}

json case_to_json(const CaseResult& result) {
    json issues = json::array();
    for (const auto& issue : result.issues)
        issues.push_back(issue_to_json(issue));
    json doc{{"case_id", result.case_id},
             {"issues", std::move(issues)},
             {"build",
              {{"status", result.build.status == BuildStatus::Success ? "success" : "failure"},
               {"messages", result.build.messages}}}};
    if (result.cs)
        doc["cs"] = *result.cs;
    if (result.cb)
        doc["cb"] = *result.cb;
    return doc;
}

}  // namespace

ReportAggregates compute_aggregates(const std::vector<CaseResult>& cases) {
    ReportAggregates aggregates;
    if (cases.empty())
        return aggregates;

    std::vector<BuildOutcome> outcomes;
    std::vector<double> cs_values;
    std::vector<double> cb_values;
    for (const auto& result : cases) {
        outcomes.push_back(result.build);
        if (result.cs)
            cs_values.push_back(*result.cs);
        if (result.cb)
            cb_values.push_back(*result.cb);
        for (const auto& issue : result.issues)
            ++aggregates.issue_counts_by_type[std::string(to_string_view(issue.issue_type))];
    }
    aggregates.bsr = round3(build_success_rate(outcomes));
    if (!cs_values.empty())
        aggregates.cs_median = median(std::move(cs_values));
    if (!cb_values.empty())
        aggregates.cb_median = median(std::move(cb_values));
    return aggregates;
}

std::string report_to_json(const Report& report) {
    json cases = json::array();
    for (const auto& result : report.cases)
        cases.push_back(case_to_json(result));
    json aggregates{{"bsr", report.aggregates.bsr},
                    {"issue_counts_by_type", report.aggregates.issue_counts_by_type}};
    if (report.aggregates.cs_median)
        aggregates["cs_median"] = *report.aggregates.cs_median;
    if (report.aggregates.cb_median)
        aggregates["cb_median"] = *report.aggregates.cb_median;
    json doc{{"tool_version", report.tool_version},
             {"cases", std::move(cases)},
             {"aggregates", std::move(aggregates)},
             {"logic_checks_skipped", report.logic_checks_skipped}};
    if (!report.iterations.empty()) {
        json iterations = json::array();
        for (const auto& trace : report.iterations)
            iterations.push_back({{"iteration", trace.iteration},
                                  {"provider_calls", trace.provider_calls},
                                  {"newly_fixed", trace.newly_fixed}});
        doc["iterations"] = std::move(iterations);
    }
    return doc.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
    const auto doc = json::parse(text);
    Report report;
    report.tool_version = doc.value("tool_version", "");
    report.logic_checks_skipped = doc.value("logic_checks_skipped", false);
    for (const auto& case_doc : doc.value("cases", json::array())) {
        CaseResult result;
        result.case_id = case_doc.value("case_id", "");
        for (const auto& issue_doc : case_doc.value("issues", json::array()))
            result.issues.push_back(issue_from_json(issue_doc));
        const auto& build = case_doc.at("build");
        result.build.case_id = result.case_id;
        result.build.status = build.value("status", "failure") == "success"
                                  ? BuildStatus::Success
                                  : BuildStatus::Failure;
        for (const auto& message : build.value("messages", json::array()))
            result.build.messages.push_back(message.get<std::string>());
        if (case_doc.contains("cs"))
            result.cs = case_doc["cs"].get<double>();
        if (case_doc.contains("cb"))
            result.cb = case_doc["cb"].get<double>();
        report.cases.push_back(std::move(result));
    }

    const auto& stored = doc.at("aggregates");
    report.aggregates.bsr = stored.value("bsr", 0.0);
    if (stored.contains("cs_median"))
        report.aggregates.cs_median = stored["cs_median"].get<double>();
    if (stored.contains("cb_median"))
        report.aggregates.cb_median = stored["cb_median"].get<double>();
    for (const auto& [type, count] : stored.value("issue_counts_by_type", json::object()).items())
        report.aggregates.issue_counts_by_type[type] = count.get<int>();

    if (!report.cases.empty() && compute_aggregates(report.cases) != report.aggregates)
        throw std::runtime_error("report aggregates are inconsistent with its cases");
    return report;
}

std::string report_to_text(const Report& report) {
    std::ostringstream out;
    out << "ci-porter report (v" << report.tool_version << ")\n";
    for (const auto& result : report.cases) {
        out << "\ncase " << result.case_id << ": "
            << (result.build.status == BuildStatus::Success ? "build success" : "build failure")
            << "\n";
        if (result.cs)
            out << "  cs: " << *result.cs << "\n";
        if (result.cb)
            out << "  cb: " << *result.cb << "\n";
        for (const auto& issue : result.issues)
            out << "  " << format_issue(issue) << "\n";
    }
    out << "\naggregates:\n";
    char bsr[32];
    std::snprintf(bsr, sizeof(bsr), "%.3f", report.aggregates.bsr);
    out << "  bsr: " << bsr << "\n";
    if (report.aggregates.cs_median)
        out << "  cs_median: " << *report.aggregates.cs_median << "\n";
    if (report.aggregates.cb_median)
        out << "  cb_median: " << *report.aggregates.cb_median << "\n";
    for (const auto& [type, count] : report.aggregates.issue_counts_by_type)
        out << "  " << type << ": " << count << "\n";
    if (report.logic_checks_skipped)
        out << "  note: logic checks skipped (no source configuration)\n";
    return out.str();
}

Report score_corpus(const std::vector<TranslationRecord>& records,
                    const std::map<std::string, std::string>& candidates,
                    const LintContext& ctx, int workers) {
    std::vector<std::string> orphans;
    for (const auto& record : records) {
        if (!candidates.count(record.id))
            orphans.push_back("record without candidate: " + record.id);
    }
    std::set<std::string> record_ids;
    for (const auto& record : records)
        record_ids.insert(record.id);
    for (const auto& [id, _] : candidates) {
        if (!record_ids.count(id))
            orphans.push_back("candidate without record: " + id);
    }
    if (!orphans.empty()) {
        std::string message = "case id mismatch:";
        for (const auto& orphan : orphans)
            message += "\n  " + orphan;
        throw std::runtime_error(message);
    }

    // The boilerplate n-gram set comes from the whole corpus: references
    // and candidates together.
    std::vector<Tokens> corpus;
    for (const auto& record : records) {
        if (!record.target_text.empty())
            corpus.push_back(tokenize(record.target_text));
        corpus.push_back(tokenize(candidates.at(record.id)));
    }
    const auto shared = trivially_shared_ngrams(corpus, 4, 500);

    Report report;
    report.cases.resize(records.size());
    std::mutex mutex;
    for_each_parallel(records.size(), workers, [&](std::size_t index) {
        const auto& record = records[index];
        const auto& candidate_text = candidates.at(record.id);

        CaseResult result;
        result.case_id = record.id;

        LintContext case_ctx = ctx;
        TravisConfig source;
        bool have_source = false;
        if (!record.source_text.empty()) {
            try {
                source = parse_travis(record.source_text);
                have_source = true;
            } catch (const ParseFailure&) {
                have_source = false;
            }
        }
        case_ctx.source = have_source ? &source : nullptr;

        result.issues = lint(candidate_text, case_ctx);
        result.build = simulate_build(candidate_text, case_ctx, record.id);

        if (!record.target_text.empty()) {
            const auto candidate_tokens = tokenize(candidate_text);
            const auto target_tokens = tokenize(record.target_text);
            if (!candidate_tokens.empty() && !target_tokens.empty()) {
                result.cs = cosine_similarity(term_frequencies(candidate_tokens),
                                              term_frequencies(target_tokens));
                result.cb = crystal_bleu(candidate_tokens, target_tokens, shared);
            }
        }

        std::lock_guard lock(mutex);
        report.cases[index] = std::move(result);
    });

    report.logic_checks_skipped = std::ranges::any_of(
        records, [](const TranslationRecord& r) { return r.source_text.empty(); });
    report.aggregates = compute_aggregates(report.cases);
    return report;
}

// ---------------------------------------------------------------------------
// CLI
// ---------------------------------------------------------------------------

namespace {

struct CommonTables {
    std::string registry_path;
    std::string packages_path;
    std::string credentials_path;
    std::string secrets_csv;

    LintContext make_context() const {
        LintContext ctx;
        if (!registry_path.empty())
            ctx.action_registry = ActionRegistry::load_file(registry_path);
        if (!packages_path.empty())
            ctx.package_table = load_package_table(packages_path);
        if (!credentials_path.empty())
            ctx.credentials = load_credentials(credentials_path);
        if (!secrets_csv.empty()) {
            std::istringstream stream(secrets_csv);
            std::string name;
            while (std::getline(stream, name, ',')) {
                if (!name.empty())
                    ctx.available_secrets.insert(name);
            }
        }
        return ctx;
    }
};

void add_table_flags(CLI::App* cmd, CommonTables& tables) {
    cmd->add_option("--registry", tables.registry_path, "Action registry file (YAML)");
    cmd->add_option("--packages", tables.packages_path, "Package table file (YAML)");
    cmd->add_option("--credentials", tables.credentials_path, "Credentials table file (YAML)");
    cmd->add_option("--secrets", tables.secrets_csv,
                    "Comma-separated secrets available in the environment");
}

std::map<std::string, std::string> load_candidates_dir(const std::string& dir) {
    std::map<std::string, std::string> candidates;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        const auto ext = entry.path().extension().string();
        if (ext != ".yml" && ext != ".yaml")
            continue;
        candidates[entry.path().stem().string()] = read_file(entry.path().string());
    }
    return candidates;
}

Strategy strategy_from_flag(const std::string& name) {
    if (name == "basic")
        return Strategy::Basic;
    if (name == "one-shot" || name == "one_shot")
        return Strategy::OneShot;
    if (name == "guideline" || name == "guideline-ir")
        return Strategy::Guideline;
    throw CLI::ValidationError("--strategy", "unknown strategy '" + name + "'");
}

int run_transpile(const std::string& source_path, const std::string& out_path,
                  const CommonTables& tables, bool strict_arch) {
    TranspileOptions opts;
    if (!tables.registry_path.empty())
        opts.action_registry = ActionRegistry::load_file(tables.registry_path);
    opts.strict_arch = strict_arch;

    const auto config = parse_travis(read_file(source_path));
    auto result = transpile(config, opts);
    if (!tables.packages_path.empty()) {
        auto injected = inject_known_packages(std::move(result.workflow), config,
                                              load_package_table(tables.packages_path));
        result.workflow = std::move(injected.workflow);
        result.warnings.insert(result.warnings.end(), injected.warnings.begin(),
                               injected.warnings.end());
    }
    write_output(out_path, render_workflow(result.workflow));
    for (const auto& warning : result.warnings)
        std::cerr << "warning: [" << to_string_view(warning.code) << "] " << warning.detail
                  << " (" << warning.source_path << ")\n";
    return 0;
}

int run_lint(const std::string& candidate_path, const std::string& source_path,
             const std::string& format, const std::string& out_path,
             const CommonTables& tables) {
    auto ctx = tables.make_context();
    TravisConfig source;
    if (!source_path.empty()) {
        source = parse_travis(read_file(source_path));
        ctx.source = &source;
    }
    const auto candidate_text = read_file(candidate_path);

    Report report;
    CaseResult result;
    result.case_id = fs::path(candidate_path).stem().string();
    result.issues = lint(candidate_text, ctx);
    result.build = simulate_build(candidate_text, ctx, result.case_id);
    report.cases.push_back(std::move(result));
    report.logic_checks_skipped = source_path.empty();
    report.aggregates = compute_aggregates(report.cases);

    write_output(out_path, format == "json" ? report_to_json(report) : report_to_text(report));
    const bool blocking = std::ranges::any_of(report.cases.front().issues, [](const Issue& i) {
        return i.severity == Severity::Blocking;
    });
    return blocking ? 1 : 0;
}

int run_score(const std::string& records_path, const std::string& candidates_dir,
              const std::string& format, const std::string& out_path,
              const CommonTables& tables, int workers) {
    const auto records = load_records_jsonl(records_path);
    const auto candidates = load_candidates_dir(candidates_dir);
    const auto report = score_corpus(records, candidates, tables.make_context(), workers);
    write_output(out_path, format == "json" ? report_to_json(report) : report_to_text(report));
    return 0;
}

int run_refine(const std::string& records_path, const std::string& provider_name,
               const std::string& mock_dir, const std::string& strategy_name, int max_iters,
               const std::string& guidelines_path, const std::string& format,
               const std::string& out_path, const CommonTables& tables, int workers) {
    const auto records = load_records_jsonl(records_path);
    std::vector<TranslationCase> cases;
    for (const auto& record : records) {
        TranslationCase translation_case;
        translation_case.case_id = record.id;
        translation_case.source_text = record.source_text;
        if (!record.target_text.empty())
            translation_case.target_text = record.target_text;
        cases.push_back(std::move(translation_case));
    }

    std::unique_ptr<Provider> provider;
    if (provider_name == "mock") {
        if (mock_dir.empty())
            throw CLI::ValidationError("--mock-dir", "required with --provider mock");
        provider = std::make_unique<MockProvider>(mock_dir);
    } else if (provider_name == "http") {
        provider = std::make_unique<HttpProvider>(HttpProvider::from_environment());
    } else {
        throw CLI::ValidationError("--provider", "unknown provider '" + provider_name + "'");
    }

    // Sources differ per case, so the build provider resolves them itself.
    class PerCaseBuild : public BuildProvider {
    public:
        PerCaseBuild(LintContext base, const std::vector<TranslationCase>& cases)
            : base_(std::move(base)) {
            for (const auto& c : cases)
                sources_.emplace(c.case_id, c.source_text);
        }
        BuildOutcome run(const std::string& case_id, const std::string& text) override {
            LintContext ctx = base_;
            TravisConfig source;
            auto it = sources_.find(case_id);
            if (it != sources_.end() && !it->second.empty()) {
                try {
                    source = parse_travis(it->second);
                    ctx.source = &source;
                } catch (const ParseFailure&) {
                }
            }
            return simulate_build(text, ctx, case_id);
        }

    private:
        LintContext base_;
        std::map<std::string, std::string> sources_;
    };
    PerCaseBuild build(tables.make_context(), cases);

    RefineOptions options;
    options.max_iters = max_iters;
    options.strategy_for_initial = strategy_from_flag(strategy_name);
    if (!guidelines_path.empty())
        options.guidelines = GuidelineSet::load_file(guidelines_path);
    options.workers = workers;

    const auto result = refine_batch(cases, *provider, build, options);

    std::vector<Tokens> corpus;
    for (const auto& translation_case : cases) {
        if (translation_case.target_text)
            corpus.push_back(tokenize(*translation_case.target_text));
        const auto& text = result.states.at(translation_case.case_id).current_text;
        if (!text.empty())
            corpus.push_back(tokenize(text));
    }
    std::optional<SharedNgramSet> shared;
    if (!corpus.empty())
        shared = trivially_shared_ngrams(corpus, 4, 500);

    Report report;
    const auto base_ctx = tables.make_context();
    for (const auto& translation_case : cases) {
        const auto& state = result.states.at(translation_case.case_id);
        CaseResult case_result;
        case_result.case_id = translation_case.case_id;
        case_result.build = state.last_outcome.value_or(BuildOutcome{
            translation_case.case_id, BuildStatus::Failure, {"never translated"}});

        LintContext ctx = base_ctx;
        TravisConfig source;
        if (!translation_case.source_text.empty()) {
            try {
                source = parse_travis(translation_case.source_text);
                ctx.source = &source;
            } catch (const ParseFailure&) {
            }
        }
        if (!state.current_text.empty())
            case_result.issues = lint(state.current_text, ctx);
        if (translation_case.target_text && !state.current_text.empty() && shared) {
            const auto candidate_tokens = tokenize(state.current_text);
            const auto target_tokens = tokenize(*translation_case.target_text);
            if (!candidate_tokens.empty() && !target_tokens.empty()) {
                case_result.cs = cosine_similarity(term_frequencies(candidate_tokens),
                                                   term_frequencies(target_tokens));
                case_result.cb = crystal_bleu(candidate_tokens, target_tokens, *shared);
            }
        }
        report.cases.push_back(std::move(case_result));
    }
    for (const auto& stats : result.iterations)
        report.iterations.push_back(
            IterationTrace{stats.iteration, stats.provider_calls, stats.newly_fixed});
    report.aggregates = compute_aggregates(report.cases);

    write_output(out_path, format == "json" ? report_to_json(report) : report_to_text(report));
    return 0;
}

int run_mine(const std::string& history_path, const std::string& blobs_dir,
             const std::string& out_path) {
    const auto history = load_history_jsonl(history_path);
    DirectoryBlobLookup blobs(blobs_dir);
    std::vector<TranslationRecord> records;
    if (auto record = extract_record(history, blobs))
        records.push_back(std::move(*record));
    if (!out_path.empty() && out_path != "-") {
        write_records_jsonl(out_path, records);
    } else {
        for (const auto& record : records)
            std::cout << record.id << "\n";
    }
    std::cerr << records.size() << " translation record(s) extracted from "
              << history.size() << " commits\n";
    return 0;
}

int run_effort(const std::string& records_path, const std::string& out_path) {
    const auto records = load_records_jsonl(records_path);
    std::vector<EffortReport> reports;
    for (const auto& record : records)
        reports.push_back(effort_metrics(record));
    const auto summary = aggregate_effort(reports);

    json doc{{"records", summary.record_count},
             {"mean_source_size", summary.mean_source_size},
             {"mean_target_size", summary.mean_target_size},
             {"multi_commit_fraction", summary.multi_commit_fraction},
             {"three_plus_commit_fraction", summary.three_plus_commit_fraction},
             {"mean_added_per_followup", summary.mean_added_per_followup},
             {"mean_deleted_per_followup", summary.mean_deleted_per_followup},
             {"source_size_histogram", summary.source_size_histogram},
             {"target_size_histogram", summary.target_size_histogram},
             {"histogram_intervals", {"1-30", "31-60", "61-90", "91-120", ">120"}}};
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"ci-porter: Travis CI to GitHub Actions translation toolkit"};
    app.require_subcommand(1);

    std::string source_path;
    std::string candidate_path;
    std::string records_path;
    std::string candidates_dir;
    std::string out_path;
    std::string format = "json";
    std::string strategy_name = "basic";
    std::string provider_name = "mock";
    std::string mock_dir;
    std::string guidelines_path;
    std::string history_path;
    std::string blobs_dir;
    int max_iters = 5;
    int workers = 1;
    bool strict_arch = false;
    CommonTables tables;

    auto* transpile_cmd = app.add_subcommand("transpile", "Translate a Travis configuration");
    transpile_cmd->add_option("--source", source_path, "Travis configuration file")->required();
    transpile_cmd->add_option("--out", out_path, "Output workflow file ('-' for stdout)");
    transpile_cmd->add_flag("--strict-arch", strict_arch,
                            "Fail on unsupported architectures instead of warning");
    add_table_flags(transpile_cmd, tables);

    auto* lint_cmd = app.add_subcommand("lint", "Lint a candidate workflow");
    lint_cmd->add_option("--candidate", candidate_path, "Workflow file to lint")->required();
    lint_cmd->add_option("--source", source_path, "Travis source for logic checks");
    lint_cmd->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    lint_cmd->add_option("--out", out_path, "Report destination ('-' for stdout)");
    add_table_flags(lint_cmd, tables);

    auto* score_cmd = app.add_subcommand("score", "Score candidates against a record corpus");
    score_cmd->add_option("--records", records_path, "Translation records (JSONL)")->required();
    score_cmd->add_option("--candidates", candidates_dir, "Directory of <case_id>.yml files")
        ->required();
    score_cmd->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    score_cmd->add_option("--out", out_path, "Report destination");
    score_cmd->add_option("--workers", workers, "Parallel workers");
    add_table_flags(score_cmd, tables);

    auto* refine_cmd = app.add_subcommand("refine", "Translate and iteratively refine");
    refine_cmd->add_option("--records", records_path, "Translation records (JSONL)")->required();
    refine_cmd->add_option("--provider", provider_name, "mock or http")
        ->check(CLI::IsMember({"mock", "http"}));
    refine_cmd->add_option("--mock-dir", mock_dir, "Scripted responses directory");
    refine_cmd
        ->add_option("--strategy", strategy_name,
                     "basic, one-shot, guideline, or guideline-ir")
        ->check(CLI::IsMember({"basic", "one-shot", "guideline", "guideline-ir"}));
    refine_cmd->add_option("--max-iters", max_iters, "Refinement iteration cap");
    refine_cmd->add_option("--guidelines", guidelines_path, "Guidelines file (YAML)");
    refine_cmd->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    refine_cmd->add_option("--out", out_path, "Report destination");
    refine_cmd->add_option("--workers", workers, "Parallel workers per iteration");
    add_table_flags(refine_cmd, tables);

    auto* mine_cmd = app.add_subcommand("mine", "Extract translation records from a history");
    mine_cmd->add_option("--history", history_path, "Commit history (JSONL)")->required();
    mine_cmd->add_option("--blobs", blobs_dir, "Blob content directory")->required();
    mine_cmd->add_option("--out", out_path, "Records destination (JSONL)");

    auto* effort_cmd = app.add_subcommand("effort", "Effort statistics over mined records");
    effort_cmd->add_option("--records", records_path, "Translation records (JSONL)")->required();
    effort_cmd->add_option("--out", out_path, "Summary destination");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (transpile_cmd->parsed())
            return run_transpile(source_path, out_path, tables, strict_arch);
        if (lint_cmd->parsed())
            return run_lint(candidate_path, source_path, format, out_path, tables);
        if (score_cmd->parsed())
            return run_score(records_path, candidates_dir, format, out_path, tables, workers);
        if (refine_cmd->parsed())
            return run_refine(records_path, provider_name, mock_dir, strategy_name, max_iters,
                              guidelines_path, format, out_path, tables, workers);
        if (mine_cmd->parsed())
            return run_mine(history_path, blobs_dir, out_path);
        if (effort_cmd->parsed())
            return run_effort(records_path, out_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace ciporter
