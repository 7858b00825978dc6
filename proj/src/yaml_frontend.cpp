#include "ciporter/yaml_frontend.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <regex>
#include <set>
#include <sstream>

namespace ciporter {

namespace {

// yaml-cpp marks plain scalars with tag "?" and quoted ones with "!".
bool node_quoted(const YAML::Node& node) {
    return node.Tag() != "?";
}

VersionLiteral scalar_literal(const YAML::Node& node) {
    return VersionLiteral{node.Scalar(), node_quoted(node)};
}

int mark_line(const YAML::Node& node) {
    return node.Mark().line + 1;
}

std::string dump_subtree(const YAML::Node& node) {
    YAML::Emitter out;
    out << node;
    return std::string(out.c_str());
}

std::vector<std::string> scalar_or_sequence(const YAML::Node& node) {
    std::vector<std::string> out;
    if (node.IsScalar()) {
        out.push_back(node.Scalar());
    } else if (node.IsSequence()) {
        for (const auto& item : node) {
            if (item.IsScalar())
                out.push_back(item.Scalar());
        }
    }
    return out;
}

std::vector<VersionLiteral> literal_list(const YAML::Node& node) {
    std::vector<VersionLiteral> out;
    if (node.IsScalar()) {
        out.push_back(scalar_literal(node));
    } else if (node.IsSequence()) {
        for (const auto& item : node) {
            if (item.IsScalar())
                out.push_back(scalar_literal(item));
        }
    }
    return out;
}

std::vector<Command> command_list(const YAML::Node& node) {
    std::vector<Command> out;
    if (node.IsScalar()) {
        for (auto& cmd : split_run_commands(node.Scalar()))
            out.push_back(std::move(cmd));
    } else if (node.IsSequence()) {
        for (const auto& item : node) {
            if (!item.IsScalar())
                continue;
            for (auto& cmd : split_run_commands(item.Scalar()))
                out.push_back(std::move(cmd));
        }
    }
    return out;
}

// Travis version-axis keys and the language each one implies.
const std::map<std::string, std::string>& axis_key_languages() {
    static const std::map<std::string, std::string> table = {
        {"python", "python"},   {"node_js", "node_js"}, {"ruby", "ruby"},
        {"rvm", "ruby"},        {"php", "php"},         {"go", "go"},
        {"rust", "rust"},       {"jdk", "java"},        {"scala", "scala"},
        {"perl", "perl"},       {"julia", "julia"},     {"elixir", "elixir"},
        {"crystal", "crystal"}, {"dart", "dart"},       {"ghc", "haskell"},
        {"otp_release", "erlang"},
    };
    return table;
}

void parse_env_items(const YAML::Node& node, std::vector<EnvEntry>& out) {
    auto add_assignments = [&out](const std::string& text) {
        std::istringstream stream(text);
        std::string token;
        while (stream >> token) {
            auto eq = token.find('=');
            if (eq == std::string::npos || eq == 0)
                continue;
            out.push_back(EnvEntry{token.substr(0, eq), token.substr(eq + 1),
                                   EnvOrigin::AssignmentString});
        }
    };
    if (node.IsScalar()) {
        add_assignments(node.Scalar());
    } else if (node.IsSequence()) {
        for (const auto& item : node) {
            if (item.IsScalar()) {
                add_assignments(item.Scalar());
            } else if (item.IsMap()) {
                for (const auto& kv : item) {
                    if (kv.second.IsScalar())
                        out.push_back(EnvEntry{kv.first.Scalar(), kv.second.Scalar(),
                                               EnvOrigin::KeyValue});
                }
            }
        }
    } else if (node.IsMap()) {
        for (const auto& kv : node) {
            if (kv.second.IsScalar())
                out.push_back(EnvEntry{kv.first.Scalar(), kv.second.Scalar(),
                                       EnvOrigin::KeyValue});
        }
    }
}

MatrixEntry matrix_entry(const YAML::Node& node) {
    MatrixEntry entry;
    if (!node.IsMap())
        return entry;
    for (const auto& kv : node) {
        if (kv.second.IsScalar())
            entry.emplace_back(kv.first.Scalar(), scalar_literal(kv.second));
    }
    return entry;
}

ParseFailure from_yaml_exception(const YAML::Exception& e) {
    return ParseFailure(ParseError{e.mark.line + 1, e.mark.column + 1, e.msg});
}

}  // namespace

std::string_view to_string_view(SyntaxType type) {
    switch (type) {
        case SyntaxType::MissingSymbol: return "missing_symbol";
        case SyntaxType::IndentationError: return "indentation_error";
        case SyntaxType::MissingOrMisplacedDefinition: return "missing_or_misplaced_definition";
        case SyntaxType::InvalidValue: return "invalid_value";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// parse_travis
// ---------------------------------------------------------------------------

TravisConfig parse_travis(std::string_view text) {
    YAML::Node doc;
    try {
        doc = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw from_yaml_exception(e);
    }
    if (!doc || doc.IsNull())
        throw ParseFailure(ParseError{1, 1, "empty configuration"});
    if (!doc.IsMap())
        throw ParseFailure(ParseError{mark_line(doc), 1, "top-level mapping expected"});

    TravisConfig config;
    std::vector<std::string> explicit_stage_order;

    auto parse_jobs_block = [&config](const YAML::Node& block) {
        if (!block.IsMap())
            return;
        if (auto ff = block["fast_finish"]; ff && ff.IsScalar()) {
            config.matrix_extras.fast_finish = ff.as<bool>(false);
            config.matrix_extras.fast_finish_set = true;
        }
        if (auto excl = block["exclude"]; excl && excl.IsSequence()) {
            for (const auto& item : excl)
                config.matrix_extras.exclude.push_back(matrix_entry(item));
        }
        if (auto incl = block["include"]; incl && incl.IsSequence()) {
            StageDef* current_stage = nullptr;
            for (const auto& item : incl) {
                if (!item.IsMap())
                    continue;
                auto stage_node = item["stage"];
                if (stage_node && stage_node.IsScalar()) {
                    const auto stage_name = stage_node.Scalar();
                    auto it = std::ranges::find_if(config.stages, [&](const StageDef& s) {
                        return s.name == stage_name;
                    });
                    if (it == config.stages.end()) {
                        config.stages.push_back(StageDef{stage_name, {}});
                        current_stage = &config.stages.back();
                    } else {
                        current_stage = &*it;
                    }
                } else if (!current_stage) {
                    // No stage context: a plain matrix include entry.
                    config.matrix_extras.include.push_back(matrix_entry(item));
                    continue;
                }
                StageJob job;
                if (auto name = item["name"]; name && name.IsScalar())
                    job.name = name.Scalar();
                if (auto script = item["script"])
                    job.script = command_list(script);
                current_stage->jobs.push_back(std::move(job));
            }
        }
    };

    for (const auto& kv : doc) {
        const std::string key = kv.first.Scalar();
        const YAML::Node value = kv.second;
        config.source_keys.push_back(key);

        if (key == "language" && value.IsScalar()) {
            config.language = value.Scalar();
        } else if (axis_key_languages().count(key) &&
                   (value.IsScalar() || value.IsSequence())) {
            config.version_key = key;
            config.versions = literal_list(value);
            if (config.language.empty())
                config.language = axis_key_languages().at(key);
        } else if (key == "os") {
            config.os_list = scalar_or_sequence(value);
        } else if (key == "arch") {
            config.arch_list = scalar_or_sequence(value);
        } else if (key == "env") {
            if (value.IsMap()) {
                if (auto global = value["global"])
                    parse_env_items(global, config.global_env);
                for (const auto& sub : value) {
                    const auto sub_key = sub.first.Scalar();
                    if (sub_key == "matrix" || sub_key == "jobs")
                        config.env_matrix_raw = dump_subtree(sub.second);
                }
            } else {
                parse_env_items(value, config.global_env);
            }
        } else if (is_phase_name(key) && (value.IsScalar() || value.IsSequence())) {
            config.phases.emplace_back(key, command_list(value));
        } else if (key == "stages" && value.IsSequence()) {
            for (const auto& item : value) {
                if (item.IsScalar())
                    explicit_stage_order.push_back(item.Scalar());
                else if (item.IsMap() && item["name"] && item["name"].IsScalar())
                    explicit_stage_order.push_back(item["name"].Scalar());
            }
        } else if (key == "jobs" || key == "matrix") {
            parse_jobs_block(value);
        } else if (key == "cache") {
            CacheSpec spec;
            if (value.IsScalar()) {
                spec.kinds.push_back(value.Scalar());
            } else if (value.IsSequence()) {
                spec.kinds = scalar_or_sequence(value);
            } else if (value.IsMap()) {
                for (const auto& sub : value) {
                    const auto sub_key = sub.first.Scalar();
                    if (sub_key == "directories") {
                        spec.directories = scalar_or_sequence(sub.second);
                    } else if (sub.second.IsScalar() && sub.second.as<bool>(false)) {
                        spec.kinds.push_back(sub_key);
                    }
                }
            }
            config.cache = std::move(spec);
        } else if (key == "notifications") {
            config.notifications = dump_subtree(value);
        } else if (key == "branches" && value.IsMap()) {
            BranchFilter filter;
            if (auto only = value["only"])
                filter.include = scalar_or_sequence(only);
            if (auto except = value["except"])
                filter.exclude = scalar_or_sequence(except);
            config.branch_filter = std::move(filter);
        } else {
            config.raw_extras.emplace_back(key, dump_subtree(value));
        }
    }

    // Explicit top-level stage order wins over first-appearance order.
    if (!explicit_stage_order.empty()) {
        std::vector<StageDef> ordered;
        for (const auto& name : explicit_stage_order) {
            auto it = std::ranges::find_if(config.stages,
                                           [&](const StageDef& s) { return s.name == name; });
            if (it != config.stages.end()) {
                ordered.push_back(std::move(*it));
                config.stages.erase(it);
            } else {
                ordered.push_back(StageDef{name, {}});
            }
        }
        for (auto& leftover : config.stages)
            ordered.push_back(std::move(leftover));
        config.stages = std::move(ordered);
    }
    return config;
}

// ---------------------------------------------------------------------------
// parse_workflow
// ---------------------------------------------------------------------------

namespace {

std::string flow_text(const YAML::Node& node) {
    if (node.IsScalar())
        return node.Scalar();
    YAML::Emitter out;
    out.SetMapFormat(YAML::Flow);
    out.SetSeqFormat(YAML::Flow);
    out << node;
    return std::string(out.c_str());
}

std::vector<std::pair<std::string, std::string>> string_pairs(const YAML::Node& node) {
    std::vector<std::pair<std::string, std::string>> out;
    if (node.IsMap()) {
        for (const auto& kv : node)
            out.emplace_back(kv.first.Scalar(), flow_text(kv.second));
    } else if (node.IsSequence()) {
        // Travis-style assignment strings; the linter flags the shape.
        for (const auto& item : node) {
            if (!item.IsScalar())
                continue;
            const auto& text = item.Scalar();
            auto eq = text.find('=');
            if (eq != std::string::npos && eq > 0)
                out.emplace_back(text.substr(0, eq), text.substr(eq + 1));
            else
                out.emplace_back(text, "");
        }
    }
    return out;
}

std::optional<EventFilter> parse_event_filter(const YAML::Node& node) {
    if (!node || node.IsNull() || !node.IsMap())
        return std::nullopt;
    EventFilter filter;
    for (const auto& kv : node) {
        const auto key = kv.first.Scalar();
        if (key == "branches")
            filter.branches = scalar_or_sequence(kv.second);
        else if (key == "branches-ignore")
            filter.branches_ignore = scalar_or_sequence(kv.second);
        else if (key == "tags")
            filter.tags = scalar_or_sequence(kv.second);
        else if (key == "paths")
            filter.paths = scalar_or_sequence(kv.second);
    }
    if (filter.empty())
        return std::nullopt;
    return filter;
}

Matrix parse_matrix(const YAML::Node& strategy) {
    Matrix matrix;
    if (auto ff = strategy["fail-fast"]; ff && ff.IsScalar())
        matrix.fail_fast = ff.as<bool>(true);
    auto node = strategy["matrix"];
    if (!node || !node.IsMap())
        return matrix;
    for (const auto& kv : node) {
        const auto key = kv.first.Scalar();
        if (key == "include" && kv.second.IsSequence()) {
            for (const auto& item : kv.second)
                matrix.include.push_back(matrix_entry(item));
        } else if (key == "exclude" && kv.second.IsSequence()) {
            for (const auto& item : kv.second)
                matrix.exclude.push_back(matrix_entry(item));
        } else if (kv.second.IsScalar() || kv.second.IsSequence()) {
            matrix.axes.emplace_back(key, literal_list(kv.second));
        }
    }
    return matrix;
}

Job parse_job(const YAML::Node& node) {
    Job job;
    if (!node.IsMap())
        return job;
    if (auto runs_on = node["runs-on"]; runs_on && runs_on.IsScalar())
        job.runs_on = runs_on.Scalar();
    if (auto needs = node["needs"])
        job.needs = scalar_or_sequence(needs);
    if (auto strategy = node["strategy"]; strategy && strategy.IsMap()) {
        auto matrix = parse_matrix(strategy);
        if (!matrix.empty())
            job.strategy_matrix = std::move(matrix);
    }
    if (auto env = node["env"])
        job.env = string_pairs(env);
    if (auto steps = node["steps"]; steps && steps.IsSequence()) {
        for (const auto& item : steps) {
            if (!item.IsMap())
                continue;
            Step step;
            if (auto name = item["name"]; name && name.IsScalar())
                step.name = name.Scalar();
            if (auto cond = item["if"]; cond && cond.IsScalar())
                step.condition = cond.Scalar();
            if (auto env = item["env"])
                step.env = string_pairs(env);
            if (auto with = item["with"]; with && with.IsMap()) {
                for (const auto& kv : with)
                    step.with_args.emplace_back(kv.first.Scalar(), flow_text(kv.second));
            }
            if (auto uses = item["uses"]; uses && uses.IsScalar()) {
                step.kind = StepKind::Uses;
                step.uses_ref = parse_action_ref(uses.Scalar());
            } else if (auto run = item["run"]; run && run.IsScalar()) {
                step.kind = StepKind::Run;
                std::string text = run.Scalar();
                // Block scalars carry a trailing newline; the command text
                // itself does not.
                while (!text.empty() && text.back() == '\n')
                    text.pop_back();
                if (auto cmd = normalize_command(text))
                    step.run_command = std::move(*cmd);
                else
                    step.run_command = Command{text, ""};
            } else {
                continue;  // neither uses nor run; check_syntax reports it
            }
            job.steps.push_back(std::move(step));
        }
    }
    return job;
}

}  // namespace

Workflow parse_workflow(std::string_view text) {
    YAML::Node doc;
    try {
        doc = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw from_yaml_exception(e);
    }
    if (!doc || doc.IsNull())
        throw ParseFailure(ParseError{1, 1, "empty configuration"});
    if (!doc.IsMap() || !doc["jobs"])
        throw ParseFailure(ParseError{1, 1, "not a workflow: no jobs defined"});

    Workflow wf;
    if (auto name = doc["name"]; name && name.IsScalar())
        wf.name = name.Scalar();

    if (auto on = doc["on"]) {
        if (on.IsScalar()) {
            wf.triggers.push_back(Trigger{on.Scalar(), std::nullopt});
        } else if (on.IsSequence()) {
            for (const auto& item : on) {
                if (item.IsScalar())
                    wf.triggers.push_back(Trigger{item.Scalar(), std::nullopt});
            }
        } else if (on.IsMap()) {
            for (const auto& kv : on)
                wf.triggers.push_back(Trigger{kv.first.Scalar(), parse_event_filter(kv.second)});
        }
    }

    if (auto jobs = doc["jobs"]; jobs.IsMap()) {
        for (const auto& kv : jobs)
            wf.jobs.emplace_back(kv.first.Scalar(), parse_job(kv.second));
    }
    return wf;
}

// ---------------------------------------------------------------------------
// render_workflow
// ---------------------------------------------------------------------------

namespace {

const std::regex kMatrixRefPattern(R"(matrix\.([A-Za-z0-9_-]+))");

bool plain_safe(std::string_view s) {
    if (s.empty() || s.front() == ' ' || s.back() == ' ' || s.back() == ':')
        return false;
    static constexpr std::string_view kBoolWords[] = {
        "true", "false", "yes", "no", "on", "off", "null", "~",
        "True", "False", "Yes", "No", "On", "Off", "Null",
        "TRUE", "FALSE", "YES", "NO", "ON", "OFF", "NULL",
    };
    if (std::ranges::find(kBoolWords, s) != std::end(kBoolWords))
        return false;
    if (std::strchr("#&*!|>%@`\"'{[,?:", s.front()))
        return false;
    if (s.front() == '-' && (s.size() == 1 || s[1] == ' '))
        return false;
    if (s.find(": ") != std::string_view::npos || s.find(" #") != std::string_view::npos)
        return false;
    if (s.find('\n') != std::string_view::npos)
        return false;
    return true;
}

std::string quoted(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string emit_scalar(std::string_view s, bool force_quote = false) {
    if (force_quote || !plain_safe(s))
        return quoted(s);
    return std::string(s);
}

std::string emit_literal(const VersionLiteral& lit) {
    const bool force = lit.quoted || lit.trailing_zero_hazard();
    return emit_scalar(lit.raw_text, force);
}

std::string flow_list(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ", ";
        out += emit_scalar(items[i]);
    }
    out += "]";
    return out;
}

void emit_matrix_entries(std::ostringstream& out, const std::vector<MatrixEntry>& entries,
                         std::string_view label, int indent) {
    const std::string pad(indent, ' ');
    out << pad << label << ":\n";
    for (const auto& entry : entries) {
        bool first = true;
        for (const auto& [key, value] : entry) {
            out << pad << (first ? "  - " : "    ") << key << ": " << emit_literal(value)
                << "\n";
            first = false;
        }
    }
}

void validate_for_render(const Workflow& wf) {
    if (wf.triggers.empty())
        throw RenderFailure("render refused: workflow has no triggers");
    if (wf.jobs.empty())
        throw RenderFailure("render refused: workflow has no jobs");
    std::set<std::string> ids;
    for (const auto& [id, job] : wf.jobs) {
        if (!ids.insert(id).second)
            throw RenderFailure("render refused: duplicate job id '" + id + "'");
    }
    for (const auto& [id, job] : wf.jobs) {
        for (const auto& need : job.needs) {
            if (!ids.count(need))
                throw RenderFailure("render refused: job '" + id + "' needs unknown job '" +
                                    need + "'");
        }
        if (job.steps.empty())
            throw RenderFailure("render refused: job '" + id + "' has no steps");
        std::set<std::string> axes;
        if (job.strategy_matrix) {
            for (const auto& [axis, _] : job.strategy_matrix->axes)
                axes.insert(axis);
            for (const auto& entry : job.strategy_matrix->include) {
                for (const auto& [axis, _] : entry)
                    axes.insert(axis);
            }
        }
        auto check_refs = [&](const std::string& text) {
            for (auto it = std::sregex_iterator(text.begin(), text.end(), kMatrixRefPattern);
                 it != std::sregex_iterator(); ++it) {
                const auto axis = (*it)[1].str();
                if (!axes.count(axis))
                    throw RenderFailure("render refused: job '" + id +
                                        "' references undefined matrix axis '" + axis + "'");
            }
        };
        check_refs(job.runs_on);
        for (const auto& step : job.steps) {
            const bool uses_set = step.uses_ref.has_value();
            const bool run_set = step.run_command.has_value();
            if (uses_set == run_set)
                throw RenderFailure("render refused: step must set exactly one of uses/run");
            if ((step.kind == StepKind::Uses) != uses_set)
                throw RenderFailure("render refused: step kind does not match its payload");
            for (const auto& [_, v] : step.with_args)
                check_refs(v);
            for (const auto& [_, v] : step.env)
                check_refs(v);
            if (step.run_command)
                check_refs(step.run_command->text);
            if (step.condition)
                check_refs(*step.condition);
        }
    }
}

}  // namespace

std::string render_workflow(const Workflow& wf) {
    validate_for_render(wf);

    std::ostringstream out;
    if (wf.name)
        out << "name: " << emit_scalar(*wf.name) << "\n";

    const bool any_filter = std::ranges::any_of(
        wf.triggers, [](const Trigger& t) { return t.filter && !t.filter->empty(); });
    if (!any_filter) {
        std::vector<std::string> events;
        for (const auto& t : wf.triggers)
            events.push_back(t.event);
        out << "on: " << flow_list(events) << "\n";
    } else {
        out << "on:\n";
        for (const auto& t : wf.triggers) {
            out << "  " << t.event << ":";
            if (!t.filter || t.filter->empty()) {
                out << "\n";
                continue;
            }
            out << "\n";
            if (!t.filter->branches.empty())
                out << "    branches: " << flow_list(t.filter->branches) << "\n";
            if (!t.filter->branches_ignore.empty())
                out << "    branches-ignore: " << flow_list(t.filter->branches_ignore) << "\n";
            if (!t.filter->tags.empty())
                out << "    tags: " << flow_list(t.filter->tags) << "\n";
            if (!t.filter->paths.empty())
                out << "    paths: " << flow_list(t.filter->paths) << "\n";
        }
    }

    out << "jobs:\n";
    for (const auto& [id, job] : wf.jobs) {
        out << "  " << id << ":\n";
        out << "    runs-on: " << emit_scalar(job.runs_on) << "\n";
        if (!job.needs.empty())
            out << "    needs: " << flow_list(job.needs) << "\n";
        if (job.strategy_matrix && !job.strategy_matrix->empty()) {
            const auto& matrix = *job.strategy_matrix;
            out << "    strategy:\n";
            if (matrix.fail_fast)
                out << "      fail-fast: " << (*matrix.fail_fast ? "true" : "false") << "\n";
            out << "      matrix:\n";
            for (const auto& [axis, values] : matrix.axes) {
                out << "        " << axis << ": [";
                for (std::size_t i = 0; i < values.size(); ++i) {
                    if (i)
                        out << ", ";
                    out << emit_literal(values[i]);
                }
                out << "]\n";
            }
            if (!matrix.include.empty())
                emit_matrix_entries(out, matrix.include, "include", 8);
            if (!matrix.exclude.empty())
                emit_matrix_entries(out, matrix.exclude, "exclude", 8);
        }
        if (!job.env.empty()) {
            out << "    env:\n";
            for (const auto& [k, v] : job.env)
                out << "      " << k << ": " << emit_scalar(v) << "\n";
        }
        out << "    steps:\n";
        for (const auto& step : job.steps) {
            std::string lead = "      - ";
            auto field = [&](std::string_view key, const std::string& value) {
                out << lead << key << ": " << value << "\n";
                lead = "        ";
            };
            if (step.name)
                field("name", emit_scalar(*step.name));
            if (step.uses_ref)
                field("uses", emit_scalar(step.uses_ref->spec()));
            if (step.run_command) {
                const auto& text = step.run_command->text;
                if (text.find('\n') != std::string::npos) {
                    out << lead << "run: |" << (text.back() == '\n' ? "" : "-") << "\n";
                    lead = "        ";
                    std::size_t start = 0;
                    while (start < text.size()) {
                        auto end = text.find('\n', start);
                        if (end == std::string::npos)
                            end = text.size();
                        out << "          " << text.substr(start, end - start) << "\n";
                        start = end + 1;
                    }
                } else {
                    field("run", emit_scalar(text));
                }
            }
            if (!step.with_args.empty()) {
                out << lead << "with:\n";
                lead = "        ";
                for (const auto& [k, v] : step.with_args)
                    out << "          " << k << ": " << emit_scalar(v) << "\n";
            }
            if (!step.env.empty()) {
                out << lead << "env:\n";
                lead = "        ";
                for (const auto& [k, v] : step.env)
                    out << "          " << k << ": " << emit_scalar(v) << "\n";
            }
            if (step.condition)
                field("if", emit_scalar(*step.condition));
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// check_syntax
// ---------------------------------------------------------------------------

namespace {

int count_lines(std::string_view text) {
    return 1 + static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

int clamp_line(int line, std::string_view text) {
    return std::clamp(line, 1, count_lines(text));
}

SyntaxType classify_parse_failure(const std::string& message) {
    if (message.find("end of map not found") != std::string::npos ||
        message.find("end of sequence not found") != std::string::npos ||
        message.find("wrong indentation") != std::string::npos)
        return SyntaxType::IndentationError;
    // Default bucket: unterminated key tokens and everything unclassifiable.
    return SyntaxType::MissingSymbol;
}

void collect_scalars(const YAML::Node& node, std::vector<YAML::Node>& out) {
    if (node.IsScalar()) {
        out.push_back(node);
    } else if (node.IsSequence()) {
        for (const auto& item : node)
            collect_scalars(item, out);
    } else if (node.IsMap()) {
        for (const auto& kv : node)
            collect_scalars(kv.second, out);
    }
}

bool version_key_name(std::string_view key) {
    return key == "version" || key.ends_with("-version") || key.ends_with("_version");
}

}  // namespace

std::vector<SyntaxFinding> check_syntax(std::string_view text) {
    std::vector<SyntaxFinding> findings;
    YAML::Node doc;
    try {
        doc = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        auto subtype = classify_parse_failure(e.msg);
        std::string note = subtype == SyntaxType::MissingSymbol &&
                                   e.msg.find("map value") == std::string::npos
                               ? " (low-confidence classification)"
                               : "";
        findings.push_back(SyntaxFinding{subtype, clamp_line(e.mark.line + 1, text),
                                         e.mark.column + 1, e.msg + note});
        return findings;
    }

    auto add = [&](SyntaxType subtype, int line, std::string message) {
        findings.push_back(
            SyntaxFinding{subtype, clamp_line(line, text), std::nullopt, std::move(message)});
    };

    if (!doc || doc.IsNull()) {
        add(SyntaxType::MissingOrMisplacedDefinition, 1, "document is empty");
        return findings;
    }
    if (!doc.IsMap()) {
        add(SyntaxType::MissingOrMisplacedDefinition, 1, "document is not a mapping");
        return findings;
    }

    // Fig. 4a shape: event names written without trailing colons or leading
    // hyphens fold into one multi-word plain scalar.
    if (auto on = doc["on"]; on && on.IsScalar()) {
        const auto& value = on.Scalar();
        if (value.find_first_of(" \n\t") != std::string::npos)
            add(SyntaxType::MissingSymbol, mark_line(on),
                "event list '" + value + "' is missing ':' or '-' separators");
    }

    auto jobs = doc["jobs"];
    if (!jobs || jobs.IsNull()) {
        add(SyntaxType::MissingOrMisplacedDefinition, 1, "workflow has no jobs definition");
        return findings;
    }
    if (!jobs.IsMap()) {
        add(SyntaxType::MissingOrMisplacedDefinition, mark_line(jobs),
            "jobs must be a mapping of job ids");
        return findings;
    }

    std::set<std::string> job_ids;
    for (const auto& kv : jobs)
        job_ids.insert(kv.first.Scalar());

    for (const auto& kv : jobs) {
        const auto job_id = kv.first.Scalar();
        const auto& job = kv.second;
        if (!job.IsMap())
            continue;

        std::set<std::string> axes;
        bool has_matrix = false;
        if (auto strategy = job["strategy"]; strategy && strategy.IsMap()) {
            for (const auto& item : strategy) {
                const auto strategy_key = item.first.Scalar();
                // Fig. 4b shape: matrix children attached to the parent.
                if (strategy_key == "include" || strategy_key == "exclude")
                    add(SyntaxType::IndentationError, mark_line(item.first),
                        "'" + strategy_key + "' must be nested under matrix, not beside it");
            }
            if (auto matrix = strategy["matrix"]; matrix && matrix.IsMap()) {
                has_matrix = true;
                for (const auto& item : matrix) {
                    const auto axis = item.first.Scalar();
                    if (axis == "include" || axis == "exclude") {
                        if (item.second.IsSequence()) {
                            for (const auto& entry : item.second) {
                                if (!entry.IsMap())
                                    continue;
                                for (const auto& pair : entry)
                                    axes.insert(pair.first.Scalar());
                            }
                        }
                    } else {
                        axes.insert(axis);
                    }
                }
            }
        }

        if (auto needs = job["needs"]) {
            for (const auto& need : scalar_or_sequence(needs)) {
                if (!job_ids.count(need))
                    add(SyntaxType::MissingOrMisplacedDefinition, mark_line(needs),
                        "job '" + job_id + "' needs undefined job '" + need + "'");
            }
        }

        auto steps = job["steps"];
        if (!steps || steps.IsNull()) {
            add(SyntaxType::MissingOrMisplacedDefinition, mark_line(kv.first),
                "job '" + job_id + "' has no steps");
        } else if (steps.IsMap()) {
            add(SyntaxType::MissingSymbol, mark_line(steps),
                "steps must be a sequence; '-' markers are missing");
        } else if (steps.IsSequence() && steps.size() == 0) {
            add(SyntaxType::MissingOrMisplacedDefinition, mark_line(steps),
                "job '" + job_id + "' has no steps");
        }

        // Unresolvable ${{ matrix.* }} references (Fig. 4c).
        std::vector<YAML::Node> scalars;
        collect_scalars(job, scalars);
        std::set<std::string> reported;
        for (const auto& scalar : scalars) {
            const auto& value = scalar.Scalar();
            for (auto it = std::sregex_iterator(value.begin(), value.end(), kMatrixRefPattern);
                 it != std::sregex_iterator(); ++it) {
                const auto axis = (*it)[1].str();
                if (!axes.count(axis) && reported.insert(axis).second) {
                    add(SyntaxType::MissingOrMisplacedDefinition, mark_line(scalar),
                        has_matrix
                            ? "matrix axis '" + axis + "' referenced but not defined"
                            : "matrix." + axis + " referenced but no matrix is defined");
                }
            }
        }

        // Fig. 4d shape: a single-valued setup input holding several versions.
        if (steps && steps.IsSequence()) {
            for (const auto& step : steps) {
                if (!step.IsMap())
                    continue;
                auto with = step["with"];
                if (!with || !with.IsMap())
                    continue;
                for (const auto& arg : with) {
                    if (!version_key_name(arg.first.Scalar()))
                        continue;
                    if (arg.second.IsSequence()) {
                        add(SyntaxType::InvalidValue, mark_line(arg.second),
                            "'" + arg.first.Scalar() + "' expects a single version value");
                    } else if (arg.second.IsScalar() &&
                               arg.second.Scalar().find(',') != std::string::npos) {
                        add(SyntaxType::InvalidValue, mark_line(arg.second),
                            "'" + arg.first.Scalar() + "' expects a single version value, got '" +
                                arg.second.Scalar() + "'");
                    }
                }
            }
        }
    }

    std::ranges::stable_sort(findings, [](const SyntaxFinding& a, const SyntaxFinding& b) {
        return std::tie(a.line, a.message) < std::tie(b.line, b.message);
    });
    return findings;
}

int find_line(std::string_view text, std::string_view needle) {
    auto pos = text.find(needle);
    if (pos == std::string_view::npos)
        return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

std::string line_at(std::string_view text, int line) {
    int current = 1;
    std::size_t start = 0;
    while (current < line) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos)
            return "";
        start = pos + 1;
        ++current;
    }
    auto end = text.find('\n', start);
    auto content = text.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                    : end - start);
    while (!content.empty() && (content.front() == ' ' || content.front() == '\t'))
        content.remove_prefix(1);
    while (!content.empty() && (content.back() == ' ' || content.back() == '\t'))
        content.remove_suffix(1);
    return std::string(content);
}

}  // namespace ciporter
