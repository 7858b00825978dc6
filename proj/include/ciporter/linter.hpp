#pragma once

#include "ciporter/model.hpp"
#include "ciporter/registry.hpp"
#include "ciporter/yaml_frontend.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ciporter {

enum class IssueCategory {
    SyntaxError,
    PlatformDiscrepancy,
    EnvironmentError,
    LogicInconsistency,
};

// The 17 issue types (4 syntax + 6 platform + 2 environment + 5 logic).
enum class IssueType {
    MissingSymbol,
    IndentationError,
    MissingOrMisplacedDefinition,
    InvalidValue,
    UnsupportedKey,
    UnsupportedExpression,
    UnsupportedArchitecture,
    TrailingZero,
    UnspecifiedDefault,
    MissingPackage,
    ObsoleteAction,
    MissingSecret,
    TriggerEventMisconfig,
    ExecutionOrderError,
    ConditionMisconfig,
    MissingTask,
    RedundantTask,
};

inline constexpr int kIssueTypeCount = 17;

IssueCategory category_of(IssueType type);

enum class Severity { Blocking, Advisory };

/// Fixed severity table: everything that breaks a real run is blocking;
/// the five logic types are advisory (the workflow runs but drifts).
Severity severity_of(IssueType type);

std::string_view to_string_view(IssueType type);
std::string_view to_string_view(IssueCategory category);
std::string_view to_string_view(Severity severity);
std::optional<IssueType> issue_type_from_name(std::string_view name);

struct Issue {
    IssueCategory category;
    IssueType issue_type;
    std::string path;  // document path, e.g. jobs.build.steps[2].run
    std::optional<int> line;
    Severity severity;
    std::string message;
    std::string evidence;  // offending snippet
};

struct LintContext {
    const TravisConfig* source = nullptr;
    std::set<std::string> available_secrets = {"GITHUB_TOKEN"};
    ActionRegistry action_registry = ActionRegistry::built_in();
    PackageTable package_table = built_in_package_table();
    CredentialsTable credentials = built_in_credentials();
};

/// Runs all four category detectors and orders the union by (line, path).
/// Unparseable candidates yield syntax issues only; logic detectors are
/// skipped when ctx.source is absent.
std::vector<Issue> lint(std::string_view candidate_text, const LintContext& ctx);

std::vector<Issue> detect_syntax(std::string_view candidate_text);
std::vector<Issue> detect_platform(const Workflow& candidate, std::string_view candidate_text,
                                   const LintContext& ctx);
std::vector<Issue> detect_environment(const Workflow& candidate, const LintContext& ctx);

/// Logic checks need the source; sanctioned_injections defaults to the
/// built-in package table's install commands.
std::vector<Issue> detect_logic(const TravisConfig& source, const Workflow& candidate,
                                const PackageTable* sanctioned_injections = nullptr);

/// One-line rendering used for reports and build error messages.
std::string format_issue(const Issue& issue);

}  // namespace ciporter
