#include "ciporter/transpiler.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace ciporter {

namespace {

std::string sanitize_job_id(std::string_view name) {
    std::string id;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
            id.push_back(c);
        else
            id.push_back('-');
    }
    if (id.empty())
        id = "job";
    if (std::isdigit(static_cast<unsigned char>(id.front())))
        id = "job-" + id;
    return id;
}

std::string map_os_label(std::string_view os, std::vector<TranspileWarning>* warnings) {
    if (os == "linux")
        return "ubuntu-latest";
    if (os == "osx")
        return "macos-latest";
    if (os == "windows")
        return "windows-latest";
    if (warnings)
        warnings->push_back({WarningCode::DroppedUnknownKey,
                             "unrecognized os '" + std::string(os) + "' passed through as a "
                             "runner label",
                             "os"});
    return std::string(os);
}

Step run_step(Command command, std::optional<std::string> condition = std::nullopt) {
    Step step;
    step.kind = StepKind::Run;
    step.run_command = std::move(command);
    step.condition = std::move(condition);
    return step;
}

Step uses_step(const ActionRef& action) {
    Step step;
    step.kind = StepKind::Uses;
    step.uses_ref = action;
    return step;
}

// after_* phases carry the status condition that preserves Travis semantics.
std::optional<std::string> phase_condition(std::string_view phase) {
    if (phase == "after_success")
        return "success()";
    if (phase == "after_failure")
        return "failure()";
    if (phase == "after_script")
        return "always()";
    return std::nullopt;
}

void append_phase(std::vector<Step>& steps, const TravisConfig& config,
                  std::string_view phase) {
    if (const auto* commands = config.phase(phase)) {
        for (const auto& command : *commands)
            steps.push_back(run_step(command, phase_condition(phase)));
    }
}

std::string cache_path_for(const CacheSpec& spec) {
    std::string path;
    for (const auto& kind : spec.kinds) {
        if (kind == "pip")
            path += path.empty() ? "~/.cache/pip" : "\n~/.cache/pip";
        else if (kind == "npm")
            path += path.empty() ? "~/.npm" : "\n~/.npm";
        else if (kind == "yarn")
            path += path.empty() ? "~/.cache/yarn" : "\n~/.cache/yarn";
        else if (kind == "bundler")
            path += path.empty() ? "vendor/bundle" : "\nvendor/bundle";
    }
    for (const auto& dir : spec.directories)
        path += path.empty() ? dir : "\n" + dir;
    return path;
}

bool is_install_like(const Step& step) {
    if (!step.run_command)
        return false;
    const auto& text = step.run_command->normalized;
    return text.find("install") != std::string::npos ||
           text.find("setup.py") != std::string::npos;
}

}  // namespace

std::string_view to_string_view(WarningCode code) {
    switch (code) {
        case WarningCode::DroppedNotifications: return "dropped_notifications";
        case WarningCode::DroppedUnknownKey: return "dropped_unknown_key";
        case WarningCode::SkippedArch: return "skipped_arch";
        case WarningCode::ImplicitDefaultAdded: return "implicit_default_added";
        case WarningCode::PackageInjected: return "package_injected";
    }
    return "unknown";
}

std::vector<std::pair<std::string, std::string>> map_env(
    const std::vector<EnvEntry>& entries, std::vector<TranspileWarning>* warnings) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& entry : entries) {
        auto it = std::ranges::find_if(out, [&](const auto& kv) { return kv.first == entry.name; });
        if (it != out.end()) {
            it->second = entry.value;  // last wins
            if (warnings)
                warnings->push_back({WarningCode::DroppedUnknownKey,
                                     "duplicate env name '" + entry.name +
                                         "'; the last value wins",
                                     "env." + entry.name});
        } else {
            out.emplace_back(entry.name, entry.value);
        }
    }
    return out;
}

Matrix map_matrix(const TravisConfig& config, const TranspileOptions& opts,
                  std::vector<TranspileWarning>* warnings) {
    Matrix matrix;

    auto versions = version_axis_values(config);
    if (!versions.empty()) {
        const auto axis = language_slug(config.language) + "-version";
        matrix.axes.emplace_back(axis, std::move(versions));
    }

    if (config.os_list.size() > 1) {
        std::vector<VersionLiteral> labels;
        for (const auto& os : config.os_list)
            labels.push_back(VersionLiteral{map_os_label(os, warnings), false});
        matrix.axes.emplace_back("os", std::move(labels));
    }

    if (!config.arch_list.empty()) {
        std::vector<VersionLiteral> arch_values;
        for (const auto& arch : config.arch_list) {
            if (arch == "amd64" || arch == "x64") {
                arch_values.push_back(VersionLiteral{"x64", false});
            } else if (arch == "arm64") {
                arch_values.push_back(VersionLiteral{"arm64", false});
            } else if (opts.strict_arch) {
                throw TranspileFailure("unsupported architecture '" + arch + "'");
            } else if (warnings) {
                warnings->push_back({WarningCode::SkippedArch,
                                     "architecture '" + arch +
                                         "' is not available (only x64 and arm64)",
                                     "arch"});
            }
        }
        if (!arch_values.empty())
            matrix.axes.emplace_back("arch", std::move(arch_values));
    }

    // Travis fast_finish: true means "do not hold remaining jobs hostage to a
    // failure", which on the target is fail-fast: false.
    if (config.matrix_extras.fast_finish_set)
        matrix.fail_fast = !config.matrix_extras.fast_finish;

    auto rename_entry = [&config](const MatrixEntry& entry) {
        MatrixEntry renamed;
        for (const auto& [key, value] : entry) {
            if (!config.version_key.empty() && key == config.version_key)
                renamed.emplace_back(language_slug(config.language) + "-version", value);
            else if (key == "os")
                renamed.emplace_back("os", value);
            else
                renamed.emplace_back(key, value);
        }
        return renamed;
    };
    for (const auto& entry : config.matrix_extras.include)
        matrix.include.push_back(rename_entry(entry));
    for (const auto& entry : config.matrix_extras.exclude)
        matrix.exclude.push_back(rename_entry(entry));

    return matrix;
}

std::vector<std::pair<std::string, std::vector<std::string>>> map_stages(
    const TravisConfig& config) {
    std::vector<std::pair<std::string, std::vector<std::string>>> plan;
    if (config.stages.empty()) {
        plan.emplace_back("build", std::vector<std::string>{});
        return plan;
    }
    std::set<std::string> seen;
    std::vector<std::string> previous_ids;
    for (const auto& stage : config.stages) {
        if (!seen.insert(stage.name).second)
            throw TranspileFailure("duplicate stage name '" + stage.name + "'");
        auto id = sanitize_job_id(stage.name);
        plan.emplace_back(id, previous_ids);
        previous_ids = {id};
    }
    return plan;
}

Workflow materialize_defaults(Workflow wf, const TravisConfig& config,
                              const TranspileOptions& opts,
                              std::vector<TranspileWarning>* warnings) {
    const auto* checkout = opts.action_registry.find_purpose("checkout");
    const auto* setup = opts.action_registry.setup_for_language(config.language);
    const auto* cache = opts.action_registry.find_purpose("cache");
    const bool has_axis = !version_axis_values(config).empty();

    for (auto& [job_id, job] : wf.jobs) {
        auto has_action = [&job](const RegistryEntry& entry) {
            return std::ranges::any_of(job.steps, [&](const Step& step) {
                return step.uses_ref && step.uses_ref->owner_repo == entry.action.owner_repo;
            });
        };

        std::vector<Step> prologue;
        if (checkout && !has_action(*checkout)) {
            prologue.push_back(uses_step(checkout->action));
            if (warnings)
                warnings->push_back({WarningCode::ImplicitDefaultAdded,
                                     "added " + checkout->action.spec() +
                                         " (implicit on the source platform)",
                                     "jobs." + job_id});
        }
        if (setup && has_axis && !has_action(*setup)) {
            Step step = uses_step(setup->action);
            const auto axis = language_slug(config.language) + "-version";
            step.with_args.emplace_back(axis, "${{ matrix." + axis + " }}");
            prologue.push_back(std::move(step));
            if (warnings)
                warnings->push_back({WarningCode::ImplicitDefaultAdded,
                                     "added " + setup->action.spec() + " for the " +
                                         config.language + " runtime",
                                     "jobs." + job_id});
        }
        job.steps.insert(job.steps.begin(), prologue.begin(), prologue.end());

        if (config.cache && cache && !has_action(*cache)) {
            const auto path = cache_path_for(*config.cache);
            if (!path.empty()) {
                Step step = uses_step(cache->action);
                const auto kind = config.cache->kinds.empty() ? std::string("files")
                                                              : config.cache->kinds.front();
                step.with_args.emplace_back("path", path);
                step.with_args.emplace_back("key", "${{ runner.os }}-" + kind);
                auto insert_at = std::ranges::find_if(job.steps, is_install_like);
                job.steps.insert(insert_at, std::move(step));
                if (warnings)
                    warnings->push_back({WarningCode::ImplicitDefaultAdded,
                                         "added " + cache->action.spec() + " for cache: " + kind,
                                         "cache"});
            }
        }
    }
    return wf;
}

TranspileResult inject_known_packages(Workflow wf, const TravisConfig& config,
                                      const PackageTable& table) {
    std::vector<TranspileWarning> warnings;
    for (auto& [job_id, job] : wf.jobs) {
        std::set<std::string> satisfied;
        std::vector<std::pair<std::size_t, Step>> insertions;
        for (std::size_t i = 0; i < job.steps.size(); ++i) {
            const auto& step = job.steps[i];
            if (!step.run_command)
                continue;
            for (const auto& line : split_run_commands(step.run_command->text)) {
                // Installation first: a line that installs a tool satisfies it
                // for everything after.
                for (const auto& [tool, install] : table) {
                    auto normalized_install = normalize_command(install);
                    if (normalized_install &&
                        line.normalized.find(normalized_install->normalized) !=
                            std::string::npos)
                        satisfied.insert(tool);
                }
                const auto first_token = line.normalized.substr(0, line.normalized.find(' '));
                for (const auto& [tool, install] : table) {
                    if (satisfied.count(tool) || !first_token.starts_with(tool))
                        continue;
                    auto install_cmd = normalize_command(install);
                    if (!install_cmd)
                        continue;
                    insertions.emplace_back(i, run_step(*install_cmd));
                    satisfied.insert(tool);
                    warnings.push_back({WarningCode::PackageInjected,
                                        "installed '" + tool + "' before its first use (" +
                                            install + ")",
                                        "jobs." + job_id + ".steps[" + std::to_string(i) + "]"});
                }
            }
        }
        for (auto it = insertions.rbegin(); it != insertions.rend(); ++it)
            job.steps.insert(job.steps.begin() + static_cast<std::ptrdiff_t>(it->first),
                             std::move(it->second));
    }
    (void)config;
    return TranspileResult{std::move(wf), std::move(warnings)};
}

TranspileResult transpile(const TravisConfig& config, const TranspileOptions& opts) {
    if (config.all_commands().empty())
        throw TranspileFailure("nothing to translate: no commands in any phase or stage");

    std::vector<TranspileWarning> warnings;
    Workflow wf;
    wf.name = "CI";

    // Triggers: Travis branch filters apply to push builds only.
    std::optional<EventFilter> push_filter;
    if (config.branch_filter) {
        EventFilter filter;
        if (!config.branch_filter->include.empty()) {
            filter.branches = config.branch_filter->include;
            if (!config.branch_filter->exclude.empty())
                warnings.push_back({WarningCode::DroppedUnknownKey,
                                    "branches.except ignored because branches.only is present",
                                    "branches.except"});
        } else if (!config.branch_filter->exclude.empty()) {
            filter.branches_ignore = config.branch_filter->exclude;
        }
        if (!filter.empty())
            push_filter = std::move(filter);
    }
    for (const auto& event : opts.default_triggers) {
        Trigger trigger{event, std::nullopt};
        if (event == "push" && push_filter)
            trigger.filter = push_filter;
        wf.triggers.push_back(std::move(trigger));
    }

    Matrix matrix = map_matrix(config, opts, &warnings);
    auto env = map_env(config.global_env, &warnings);

    std::string runs_on = opts.default_runner;
    if (matrix.axis("os")) {
        runs_on = "${{ matrix.os }}";
    } else if (config.os_list.size() == 1) {
        runs_on = map_os_label(config.os_list.front(), &warnings);
    }

    auto make_job = [&](const std::vector<std::string>& needs) {
        Job job;
        job.runs_on = runs_on;
        job.needs = needs;
        if (!matrix.empty())
            job.strategy_matrix = matrix;
        job.env = env;
        return job;
    };

    const auto plan = map_stages(config);
    if (config.stages.empty()) {
        Job job = make_job({});
        for (const auto* phase :
             {"before_install", "install", "before_script", "script", "after_success",
              "after_failure", "after_script", "before_deploy", "deploy"})
            append_phase(job.steps, config, phase);
        wf.jobs.emplace_back(plan.front().first, std::move(job));
    } else {
        for (std::size_t i = 0; i < config.stages.size(); ++i) {
            const auto& stage = config.stages[i];
            Job job = make_job(plan[i].second);
            for (const auto* phase : {"before_install", "install", "before_script"})
                append_phase(job.steps, config, phase);
            std::vector<Command> script;
            for (const auto& stage_job : stage.jobs)
                script.insert(script.end(), stage_job.script.begin(), stage_job.script.end());
            if (script.empty()) {
                if (const auto* global = config.phase("script"))
                    script = *global;
            }
            for (const auto& command : script)
                job.steps.push_back(run_step(command));
            for (const auto* phase : {"after_success", "after_failure", "after_script"})
                append_phase(job.steps, config, phase);
            wf.jobs.emplace_back(plan[i].first, std::move(job));
        }
    }

    wf = materialize_defaults(std::move(wf), config, opts, &warnings);

    if (config.notifications)
        warnings.push_back({WarningCode::DroppedNotifications,
                            "notifications are handled by the target platform itself",
                            "notifications"});
    if (config.env_matrix_raw)
        warnings.push_back({WarningCode::DroppedUnknownKey,
                            "env matrix expansion is not translated", "env.matrix"});
    for (const auto& [key, _] : config.raw_extras)
        warnings.push_back({WarningCode::DroppedUnknownKey,
                            "no translation rule for '" + key + "'", key});

    return TranspileResult{std::move(wf), std::move(warnings)};
}

}  // namespace ciporter
