#include "ciporter/linter.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <regex>
#include <sstream>

namespace ciporter {

namespace {

struct TypeRow {
    IssueType type;
    IssueCategory category;
    std::string_view name;
};

constexpr TypeRow kTypeTable[kIssueTypeCount] = {
    {IssueType::MissingSymbol, IssueCategory::SyntaxError, "missing_symbol"},
    {IssueType::IndentationError, IssueCategory::SyntaxError, "indentation_error"},
    {IssueType::MissingOrMisplacedDefinition, IssueCategory::SyntaxError,
     "missing_or_misplaced_definition"},
    {IssueType::InvalidValue, IssueCategory::SyntaxError, "invalid_value"},
    {IssueType::UnsupportedKey, IssueCategory::PlatformDiscrepancy, "unsupported_key"},
    {IssueType::UnsupportedExpression, IssueCategory::PlatformDiscrepancy,
     "unsupported_expression"},
    {IssueType::UnsupportedArchitecture, IssueCategory::PlatformDiscrepancy,
     "unsupported_architecture"},
    {IssueType::TrailingZero, IssueCategory::PlatformDiscrepancy, "trailing_zero"},
    {IssueType::UnspecifiedDefault, IssueCategory::PlatformDiscrepancy, "unspecified_default"},
    {IssueType::MissingPackage, IssueCategory::PlatformDiscrepancy, "missing_package"},
    {IssueType::ObsoleteAction, IssueCategory::EnvironmentError, "obsolete_action"},
    {IssueType::MissingSecret, IssueCategory::EnvironmentError, "missing_secret"},
    {IssueType::TriggerEventMisconfig, IssueCategory::LogicInconsistency,
     "trigger_event_misconfig"},
    {IssueType::ExecutionOrderError, IssueCategory::LogicInconsistency,
     "execution_order_error"},
    {IssueType::ConditionMisconfig, IssueCategory::LogicInconsistency, "condition_misconfig"},
    {IssueType::MissingTask, IssueCategory::LogicInconsistency, "missing_task"},
    {IssueType::RedundantTask, IssueCategory::LogicInconsistency, "redundant_task"},
};

Issue make_issue(IssueType type, std::string path, std::string message, std::string evidence,
                 std::optional<int> line = std::nullopt) {
    return Issue{category_of(type), type,       std::move(path), line,
                 severity_of(type), std::move(message), std::move(evidence)};
}

const std::regex kSecretsRefPattern(R"(\$\{\{\s*secrets\.([A-Za-z0-9_]+)\s*\}\})");
const std::regex kTrailingZeroPattern(R"(^\d+\.\d*0$)");

bool version_valued_key(std::string_view key) {
    return key == "version" || key.ends_with("-version") || key.ends_with("_version");
}

bool known_arch_token(std::string_view value) {
    static constexpr std::string_view kTokens[] = {"amd64",   "x64",  "arm64", "arm32",
                                                   "ppc64le", "s390x", "i386",  "i686",
                                                   "x86",     "armv7"};
    return std::ranges::find(kTokens, value) != std::end(kTokens);
}

std::string first_token(std::string_view normalized) {
    auto space = normalized.find(' ');
    return std::string(normalized.substr(0, space));
}

}  // namespace

IssueCategory category_of(IssueType type) {
    for (const auto& row : kTypeTable) {
        if (row.type == type)
            return row.category;
    }
    return IssueCategory::SyntaxError;
}

Severity severity_of(IssueType type) {
    return category_of(type) == IssueCategory::LogicInconsistency ? Severity::Advisory
                                                                  : Severity::Blocking;
}

std::string_view to_string_view(IssueType type) {
    for (const auto& row : kTypeTable) {
        if (row.type == type)
            return row.name;
    }
    return "unknown";
}

std::string_view to_string_view(IssueCategory category) {
    switch (category) {
        case IssueCategory::SyntaxError: return "syntax_error";
        case IssueCategory::PlatformDiscrepancy: return "platform_discrepancy";
        case IssueCategory::EnvironmentError: return "environment_error";
        case IssueCategory::LogicInconsistency: return "logic_inconsistency";
    }
    return "unknown";
}

std::string_view to_string_view(Severity severity) {
    return severity == Severity::Blocking ? "blocking" : "advisory";
}

std::optional<IssueType> issue_type_from_name(std::string_view name) {
    for (const auto& row : kTypeTable) {
        if (row.name == name)
            return row.type;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Syntax
// ---------------------------------------------------------------------------

std::vector<Issue> detect_syntax(std::string_view candidate_text) {
    std::vector<Issue> issues;
    for (const auto& finding : check_syntax(candidate_text)) {
        IssueType type = IssueType::MissingSymbol;
        switch (finding.subtype) {
            case SyntaxType::MissingSymbol: type = IssueType::MissingSymbol; break;
            case SyntaxType::IndentationError: type = IssueType::IndentationError; break;
            case SyntaxType::MissingOrMisplacedDefinition:
                type = IssueType::MissingOrMisplacedDefinition;
                break;
            case SyntaxType::InvalidValue: type = IssueType::InvalidValue; break;
        }
        issues.push_back(make_issue(type, "", finding.message,
                                    line_at(candidate_text, finding.line), finding.line));
    }
    return issues;
}

// ---------------------------------------------------------------------------
// Platform discrepancy
// ---------------------------------------------------------------------------

namespace {

// Travis vocabulary that must not survive translation.
bool deny_listed_key(std::string_view key) {
    return key == "fast-finish" || key == "fast_finish" || key == "language" ||
           key == "dist" || key == "sudo" || key == "before_install";
}

void walk_platform_tree(const YAML::Node& node, const std::string& path, int depth,
                        std::vector<Issue>& issues) {
    if (node.IsMap()) {
        for (const auto& kv : node) {
            const auto key = kv.first.Scalar();
            const auto child_path = path.empty() ? key : path + "." + key;
            if (deny_listed_key(key)) {
                issues.push_back(make_issue(IssueType::UnsupportedKey, child_path,
                                            "key '" + key +
                                                "' belongs to the source platform vocabulary",
                                            key + ":"));
            }
            if (depth == 0 && key == "cache" && kv.second.IsScalar()) {
                issues.push_back(make_issue(IssueType::UnsupportedKey, child_path,
                                            "top-level 'cache' shorthand is not supported; use "
                                            "a cache action",
                                            "cache: " + kv.second.Scalar()));
            }
            if (key == "env") {
                if (kv.second.IsSequence() || kv.second.IsScalar()) {
                    std::vector<std::string> items;
                    if (kv.second.IsScalar()) {
                        items.push_back(kv.second.Scalar());
                    } else {
                        for (const auto& item : kv.second) {
                            if (item.IsScalar())
                                items.push_back(item.Scalar());
                        }
                    }
                    for (const auto& item : items) {
                        if (item.find('=') != std::string::npos) {
                            issues.push_back(make_issue(
                                IssueType::UnsupportedExpression, child_path,
                                "environment variables require key-value pairs, not "
                                "assignment strings",
                                item));
                        }
                    }
                }
                continue;  // env values are user-defined; do not descend
            }
            if (key == "with" || key == "secrets") {
                // Version-shaped inputs still need the trailing-zero check.
                if (key == "with" && kv.second.IsMap()) {
                    for (const auto& arg : kv.second) {
                        if (!version_valued_key(arg.first.Scalar()))
                            continue;
                        auto flag = [&](const YAML::Node& scalar) {
                            if (scalar.Tag() == "?" &&
                                std::regex_match(scalar.Scalar(), kTrailingZeroPattern))
                                issues.push_back(make_issue(
                                    IssueType::TrailingZero,
                                    child_path + "." + arg.first.Scalar(),
                                    "version " + scalar.Scalar() +
                                        " must be enclosed in quotes or it collapses to " +
                                        scalar.Scalar().substr(0,
                                                               scalar.Scalar().size() - 1),
                                    scalar.Scalar()));
                        };
                        if (arg.second.IsScalar()) {
                            flag(arg.second);
                        } else if (arg.second.IsSequence()) {
                            for (const auto& item : arg.second) {
                                if (item.IsScalar())
                                    flag(item);
                            }
                        }
                    }
                }
                continue;
            }
            if (version_valued_key(key)) {
                auto flag = [&](const YAML::Node& scalar) {
                    if (scalar.Tag() == "?" &&
                        std::regex_match(scalar.Scalar(), kTrailingZeroPattern))
                        issues.push_back(make_issue(
                            IssueType::TrailingZero, child_path,
                            "version " + scalar.Scalar() +
                                " must be enclosed in quotes or it collapses to " +
                                scalar.Scalar().substr(0, scalar.Scalar().size() - 1),
                            scalar.Scalar()));
                };
                if (kv.second.IsScalar()) {
                    flag(kv.second);
                } else if (kv.second.IsSequence()) {
                    for (const auto& item : kv.second) {
                        if (item.IsScalar())
                            flag(item);
                    }
                }
            }
            walk_platform_tree(kv.second, child_path, depth + 1, issues);
        }
    } else if (node.IsSequence()) {
        int index = 0;
        for (const auto& item : node) {
            walk_platform_tree(item, path + "[" + std::to_string(index) + "]", depth + 1,
                               issues);
            ++index;
        }
    }
}

}  // namespace

std::vector<Issue> detect_platform(const Workflow& candidate, std::string_view candidate_text,
                                   const LintContext& ctx) {
    std::vector<Issue> issues;

    YAML::Node doc;
    try {
        doc = YAML::Load(std::string(candidate_text));
    } catch (const YAML::Exception&) {
        return issues;  // unparseable candidates yield syntax issues only
    }
    walk_platform_tree(doc, "", 0, issues);

    const auto* checkout = ctx.action_registry.find_purpose("checkout");
    for (const auto& [job_id, job] : candidate.jobs) {
        const std::string job_path = "jobs." + job_id;

        // Architectures outside the supported pair.
        if (job.strategy_matrix) {
            for (const auto& [axis, values] : job.strategy_matrix->axes) {
                if (axis != "arch" && axis != "architecture")
                    continue;
                for (const auto& value : values) {
                    if (value.raw_text != "x64" && value.raw_text != "arm64")
                        issues.push_back(
                            make_issue(IssueType::UnsupportedArchitecture,
                                       job_path + ".strategy.matrix." + axis,
                                       "architecture '" + value.raw_text +
                                           "' is not available; only x64 and arm64 are",
                                       value.raw_text));
                }
            }
        }
        if (known_arch_token(job.runs_on) && job.runs_on != "x64" && job.runs_on != "arm64") {
            issues.push_back(make_issue(IssueType::UnsupportedArchitecture,
                                        job_path + ".runs-on",
                                        "architecture '" + job.runs_on +
                                            "' is not available; only x64 and arm64 are",
                                        job.runs_on));
        }

        // Implicit defaults that the target platform requires spelled out.
        const bool has_run_steps = std::ranges::any_of(
            job.steps, [](const Step& step) { return step.run_command.has_value(); });
        const bool has_checkout =
            checkout && std::ranges::any_of(job.steps, [&](const Step& step) {
                return step.uses_ref && step.uses_ref->owner_repo == checkout->action.owner_repo;
            });
        if (has_run_steps && checkout && !has_checkout) {
            issues.push_back(make_issue(IssueType::UnspecifiedDefault, job_path + ".steps",
                                        "repository checkout is implicit on the source "
                                        "platform but must be an explicit step here",
                                        "steps:"));
        }
        if (job.strategy_matrix) {
            for (const auto& [axis, _] : job.strategy_matrix->axes) {
                if (!axis.ends_with("-version"))
                    continue;
                const auto language = axis.substr(0, axis.size() - std::strlen("-version"));
                const auto* setup = ctx.action_registry.find_purpose("setup-" + language);
                if (!setup)
                    continue;
                const bool has_setup = std::ranges::any_of(job.steps, [&](const Step& step) {
                    return step.uses_ref &&
                           step.uses_ref->owner_repo == setup->action.owner_repo;
                });
                if (!has_setup)
                    issues.push_back(make_issue(
                        IssueType::UnspecifiedDefault, job_path + ".steps",
                        "matrix axis '" + axis + "' has no " + setup->action.owner_repo +
                            " step to apply it",
                        axis + ":"));
            }
        }

        // Tools that the source platform preinstalls.
        std::set<std::string> satisfied;
        std::set<std::string> reported;
        for (std::size_t i = 0; i < job.steps.size(); ++i) {
            const auto& step = job.steps[i];
            if (!step.run_command)
                continue;
            for (const auto& line : split_run_commands(step.run_command->text)) {
                for (const auto& [tool, install] : ctx.package_table) {
                    auto install_cmd = normalize_command(install);
                    if (install_cmd &&
                        line.normalized.find(install_cmd->normalized) != std::string::npos)
                        satisfied.insert(tool);
                }
                const auto token = first_token(line.normalized);
                for (const auto& [tool, install] : ctx.package_table) {
                    if (satisfied.count(tool) || reported.count(tool) ||
                        !token.starts_with(tool))
                        continue;
                    issues.push_back(make_issue(
                        IssueType::MissingPackage,
                        job_path + ".steps[" + std::to_string(i) + "].run",
                        "'" + token + "' is preinstalled on the source platform; add '" +
                            install + "' first",
                        line.normalized));
                    reported.insert(tool);
                }
            }
        }
    }
    return issues;
}

// ---------------------------------------------------------------------------
// Environment
// ---------------------------------------------------------------------------

std::vector<Issue> detect_environment(const Workflow& candidate, const LintContext& ctx) {
    std::vector<Issue> issues;
    std::set<std::string> reported_secrets;

    auto scan_secrets = [&](const std::string& text, const std::string& path) {
        for (auto it = std::sregex_iterator(text.begin(), text.end(), kSecretsRefPattern);
             it != std::sregex_iterator(); ++it) {
            const auto name = (*it)[1].str();
            if (!ctx.available_secrets.count(name) && reported_secrets.insert(name).second)
                issues.push_back(make_issue(IssueType::MissingSecret, path,
                                            "secret '" + name +
                                                "' is not configured in this environment",
                                            (*it)[0].str()));
        }
    };

    for (const auto& [job_id, job] : candidate.jobs) {
        const std::string job_path = "jobs." + job_id;
        for (const auto& [_, v] : job.env)
            scan_secrets(v, job_path + ".env");

        for (std::size_t i = 0; i < job.steps.size(); ++i) {
            const auto& step = job.steps[i];
            const std::string step_path = job_path + ".steps[" + std::to_string(i) + "]";

            if (step.uses_ref) {
                if (const auto* entry =
                        ctx.action_registry.find_action(step.uses_ref->owner_repo)) {
                    if (version_below(step.uses_ref->version, entry->minimum))
                        issues.push_back(make_issue(
                            IssueType::ObsoleteAction, step_path + ".uses",
                            step.uses_ref->spec() + " is no longer supported; " +
                                entry->minimum + " and later are maintained",
                            step.uses_ref->spec()));
                }
            }
            for (const auto& [_, v] : step.with_args)
                scan_secrets(v, step_path + ".with");
            for (const auto& [_, v] : step.env)
                scan_secrets(v, step_path + ".env");
            if (step.run_command)
                scan_secrets(step.run_command->text, step_path + ".run");

            // Known-authenticated tools need a token env or a secrets reference.
            if (!step.run_command)
                continue;
            for (const auto& line : split_run_commands(step.run_command->text)) {
                const auto token = first_token(line.normalized);
                for (const auto& rule : ctx.credentials) {
                    if (token != rule.tool)
                        continue;
                    bool has_env_token = false;
                    for (const auto& name : rule.env_names) {
                        auto match = [&name](const auto& kv) { return kv.first == name; };
                        if (std::ranges::any_of(step.env, match) ||
                            std::ranges::any_of(job.env, match))
                            has_env_token = true;
                    }
                    bool has_secrets_ref =
                        step.run_command->text.find("secrets.") != std::string::npos;
                    for (const auto& [_, v] : step.env) {
                        if (v.find("secrets.") != std::string::npos)
                            has_secrets_ref = true;
                    }
                    if (!has_env_token && !has_secrets_ref)
                        issues.push_back(make_issue(
                            IssueType::MissingSecret, step_path + ".run",
                            "'" + rule.tool + "' cannot authenticate: provide one of [" +
                                [&rule] {
                                    std::string names;
                                    for (const auto& n : rule.env_names)
                                        names += names.empty() ? n : ", " + n;
                                    return names;
                                }() +
                                "] or a secrets reference",
                            line.normalized));
                }
            }
        }
    }
    return issues;
}

// ---------------------------------------------------------------------------
// Logic
// ---------------------------------------------------------------------------

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::ranges::transform(out, out.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string slugify(std::string_view text) {
    std::string out;
    for (char c : lower(text))
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
    return out;
}

// Expected `if:` condition per source phase; unconditional phases map to "".
std::map<std::string, std::string> expected_conditions(const TravisConfig& source) {
    std::map<std::string, std::string> expected;
    for (const auto& [phase, commands] : source.phases) {
        std::string condition;
        if (phase == "after_success")
            condition = "success()";
        else if (phase == "after_failure")
            condition = "failure()";
        else if (phase == "after_script")
            condition = "always()";
        for (const auto& command : commands)
            expected[command.normalized] = condition;
    }
    for (const auto& stage : source.stages) {
        for (const auto& job : stage.jobs) {
            for (const auto& command : job.script)
                expected[command.normalized] = "";
        }
    }
    return expected;
}

std::string trim_copy(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return std::string(s);
}

}  // namespace

std::vector<Issue> detect_logic(const TravisConfig& source, const Workflow& candidate,
                                const PackageTable* sanctioned_injections) {
    std::vector<Issue> issues;
    const PackageTable fallback_table = built_in_package_table();
    const PackageTable& injections =
        sanctioned_injections ? *sanctioned_injections : fallback_table;

    // Trigger events.
    const bool source_restricted = source.branch_filter.has_value();
    const Trigger* push = nullptr;
    const Trigger* pull_request = nullptr;
    for (const auto& trigger : candidate.triggers) {
        if (trigger.event == "push")
            push = &trigger;
        if (trigger.event == "pull_request")
            pull_request = &trigger;
    }
    if (!source_restricted) {
        if (push && push->filter && !push->filter->tags.empty()) {
            issues.push_back(make_issue(
                IssueType::TriggerEventMisconfig, "on.push",
                "push trigger is restricted to tags but the source built every push",
                "tags: " + push->filter->tags.front()));
        } else if (push && push->filter &&
                   (!push->filter->branches.empty() ||
                    !push->filter->branches_ignore.empty())) {
            issues.push_back(make_issue(
                IssueType::TriggerEventMisconfig, "on.push",
                "push trigger is branch-restricted but the source built every push",
                "branches: " + (push->filter->branches.empty()
                                    ? push->filter->branches_ignore.front()
                                    : push->filter->branches.front())));
        } else if (!push) {
            issues.push_back(make_issue(IssueType::TriggerEventMisconfig, "on",
                                        "push trigger is missing; the source built every push",
                                        "on:"));
        }
        if (!pull_request)
            issues.push_back(make_issue(IssueType::TriggerEventMisconfig, "on",
                                        "pull_request trigger is missing",
                                        "on:"));
    }

    // Stage order must be reflected as needs edges.
    for (std::size_t i = 0; i + 1 < source.stages.size(); ++i) {
        const auto earlier = slugify(source.stages[i].name);
        const auto later = slugify(source.stages[i + 1].name);
        const std::string* earlier_id = nullptr;
        const Job* later_job = nullptr;
        const std::string* later_id = nullptr;
        for (const auto& [job_id, job] : candidate.jobs) {
            const auto slug = slugify(job_id);
            if (slug.find(earlier) != std::string::npos && !earlier_id)
                earlier_id = &job_id;
            else if (slug.find(later) != std::string::npos && !later_job) {
                later_job = &job;
                later_id = &job_id;
            }
        }
        if (!earlier_id || !later_job)
            continue;
        if (std::ranges::find(later_job->needs, *earlier_id) == later_job->needs.end())
            issues.push_back(make_issue(
                IssueType::ExecutionOrderError, "jobs." + *later_id,
                "'" + *later_id + "' must run after '" + *earlier_id +
                    "' but declares no needs edge; jobs default to running concurrently",
                *later_id + ":"));
    }

    // Commands: wrong conditions, omissions, inventions.
    const auto expected = expected_conditions(source);
    std::map<std::string, int> source_counts;
    for (const auto& command : source.all_commands())
        ++source_counts[command.normalized];

    std::map<std::string, int> candidate_counts;
    std::set<std::string> condition_reported;
    struct CandidateLine {
        std::string normalized;
        std::string path;
    };
    std::vector<CandidateLine> candidate_lines;
    for (const auto& [job_id, job] : candidate.jobs) {
        for (std::size_t i = 0; i < job.steps.size(); ++i) {
            const auto& step = job.steps[i];
            if (!step.run_command)
                continue;
            const auto path = "jobs." + job_id + ".steps[" + std::to_string(i) + "].run";
            for (const auto& line : split_run_commands(step.run_command->text)) {
                ++candidate_counts[line.normalized];
                candidate_lines.push_back({line.normalized, path});
                auto it = expected.find(line.normalized);
                if (it == expected.end())
                    continue;
                const auto actual = trim_copy(step.condition.value_or(""));
                if (actual != it->second && condition_reported.insert(line.normalized).second) {
                    const auto detail =
                        it->second.empty()
                            ? "an extra condition 'if: " + actual + "' was introduced"
                            : actual.empty()
                                  ? "source runs this under '" + it->second +
                                        "' but the step is unconditional"
                                  : "source condition '" + it->second + "' became '" + actual +
                                        "'";
                    issues.push_back(make_issue(IssueType::ConditionMisconfig, path,
                                                detail, line.normalized));
                }
            }
        }
    }

    for (const auto& [command, count] : source_counts) {
        auto it = candidate_counts.find(command);
        const int have = it == candidate_counts.end() ? 0 : it->second;
        if (have < count)
            issues.push_back(make_issue(IssueType::MissingTask, "jobs",
                                        "task from the source is missing in the translation",
                                        command));
    }
    if (source.cache) {
        const bool has_cache_step = std::ranges::any_of(candidate.jobs, [](const auto& kv) {
            return std::ranges::any_of(kv.second.steps, [](const Step& step) {
                return step.uses_ref &&
                       step.uses_ref->owner_repo.find("cache") != std::string::npos;
            });
        });
        if (!has_cache_step) {
            std::string evidence = "cache:";
            for (const auto& kind : source.cache->kinds)
                evidence += " " + kind;
            issues.push_back(make_issue(IssueType::MissingTask, "jobs",
                                        "source caching has no equivalent cache step",
                                        evidence));
        }
    }

    std::set<std::string> invented_reported;
    for (const auto& line : candidate_lines) {
        auto it = source_counts.find(line.normalized);
        const int want = it == source_counts.end() ? 0 : it->second;
        if (candidate_counts[line.normalized] <= want)
            continue;
        // Injected installs for known packages are sanctioned.
        bool sanctioned = false;
        for (const auto& [_, install] : injections) {
            auto cmd = normalize_command(install);
            if (cmd && line.normalized == cmd->normalized)
                sanctioned = true;
        }
        if (!sanctioned && invented_reported.insert(line.normalized).second)
            issues.push_back(make_issue(IssueType::RedundantTask, line.path,
                                        "task does not come from the source configuration",
                                        line.normalized));
    }

    return issues;
}

// ---------------------------------------------------------------------------
// lint
// ---------------------------------------------------------------------------

std::vector<Issue> lint(std::string_view candidate_text, const LintContext& ctx) {
    std::vector<Issue> issues = detect_syntax(candidate_text);

    Workflow candidate;
    try {
        candidate = parse_workflow(candidate_text);
    } catch (const ParseFailure&) {
        return issues;  // syntax issues already cover it
    }

    auto platform = detect_platform(candidate, candidate_text, ctx);
    issues.insert(issues.end(), platform.begin(), platform.end());
    auto environment = detect_environment(candidate, ctx);
    issues.insert(issues.end(), environment.begin(), environment.end());
    if (ctx.source) {
        auto logic = detect_logic(*ctx.source, candidate, &ctx.package_table);
        issues.insert(issues.end(), logic.begin(), logic.end());
    }

    // Locate evidence in the candidate text for issues without a line.
    for (auto& issue : issues) {
        if (!issue.line && !issue.evidence.empty()) {
            if (int line = find_line(candidate_text, issue.evidence); line > 0)
                issue.line = line;
        }
    }

    std::ranges::stable_sort(issues, [](const Issue& a, const Issue& b) {
        const int la = a.line.value_or(1 << 20);
        const int lb = b.line.value_or(1 << 20);
        return std::tie(la, a.path) < std::tie(lb, b.path);
    });
    return issues;
}

std::string format_issue(const Issue& issue) {
    std::ostringstream out;
    out << "[" << to_string_view(issue.severity) << "] " << to_string_view(issue.issue_type)
        << " (" << to_string_view(issue.category) << ")";
    if (!issue.path.empty())
        out << " at " << issue.path;
    if (issue.line)
        out << " line " << *issue.line;
    out << ": " << issue.message;
    if (!issue.evidence.empty())
        out << " [" << issue.evidence << "]";
    return out.str();
}

}  // namespace ciporter
