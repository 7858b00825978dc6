#include "ciporter/llm.hpp"

#include "ciporter/mining.hpp"
#include "ciporter/parallel.hpp"
#include "ciporter/yaml_frontend.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

namespace ciporter {

std::string_view to_string_view(Strategy strategy) {
    switch (strategy) {
        case Strategy::Basic: return "basic";
        case Strategy::OneShot: return "one_shot";
        case Strategy::Guideline: return "guideline";
        case Strategy::Refinement: return "refinement";
    }
    return "unknown";
}

std::string_view to_string_view(RefinementStatus status) {
    switch (status) {
        case RefinementStatus::Pending: return "pending";
        case RefinementStatus::Fixed: return "fixed";
        case RefinementStatus::Exhausted: return "exhausted";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kOutputControl =
    "Only generate the translated configuration. Do not include any explanations, "
    "descriptions, or surrounding text.";

constexpr std::string_view kBasicTemplate =
    R"(You are an expert in continuous integration systems.
Translate the following CI configuration so that it achieves the same behavior on the target platform.
Source platform: Travis CI
Target platform: GitHub Actions

Source configuration:
${SOURCE_CONFIGURATION}

${OUTPUT_CONTROL})";

constexpr std::string_view kOneShotTemplate =
    R"(You are an expert in continuous integration systems.
Translate the following CI configuration so that it achieves the same behavior on the target platform.
Source platform: Travis CI
Target platform: GitHub Actions

Here is an example translation.
Example Travis CI configuration:
${EXAMPLE_SOURCE}

Example GitHub Actions workflow:
${EXAMPLE_TARGET}

Source configuration:
${SOURCE_CONFIGURATION}

${OUTPUT_CONTROL})";

constexpr std::string_view kGuidelineTemplate =
    R"(You are an expert in continuous integration systems.
Translate the following CI configuration so that it achieves the same behavior on the target platform.
Source platform: Travis CI
Target platform: GitHub Actions

Follow these translation guidelines:
${GUIDELINES}

Source configuration:
${SOURCE_CONFIGURATION}

${OUTPUT_CONTROL})";

constexpr std::string_view kRefinementTemplate =
    R"(You are an expert in continuous integration systems.
A GitHub Actions workflow translated from a Travis CI configuration fails to build.
Source platform: Travis CI
Target platform: GitHub Actions

Original Travis CI configuration:
${SOURCE_CONFIGURATION}

Faulty workflow:
${FAULTY_CONFIGURATION}

Build error messages:
${ERROR_MESSAGES}

Regenerate the workflow so that the build succeeds.
${OUTPUT_CONTROL})";

std::string substitute(std::string text, const std::string& slot, const std::string& value) {
    const std::string needle = "${" + slot + "}";
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos))
        text.replace(pos, needle.size(), value);
    return text;
}

const std::vector<std::string>& required_slots(Strategy strategy) {
    static const std::vector<std::string> none;
    static const std::vector<std::string> one_shot = {"EXAMPLE_SOURCE", "EXAMPLE_TARGET"};
    static const std::vector<std::string> guideline = {"GUIDELINES"};
    static const std::vector<std::string> refinement = {"FAULTY_CONFIGURATION",
                                                        "ERROR_MESSAGES"};
    switch (strategy) {
        case Strategy::OneShot: return one_shot;
        case Strategy::Guideline: return guideline;
        case Strategy::Refinement: return refinement;
        default: return none;
    }
}

}  // namespace

PromptInstance build_prompt(Strategy strategy, std::string_view source_text,
                            const PromptContext& context) {
    if (source_text.empty())
        throw PromptError("source configuration is empty");
    for (const auto& slot : required_slots(strategy)) {
        if (!context.slots.count(slot))
            throw PromptError("missing required slot " + slot + " for " +
                              std::string(to_string_view(strategy)) + " prompting");
    }

    std::string_view raw;
    switch (strategy) {
        case Strategy::Basic: raw = kBasicTemplate; break;
        case Strategy::OneShot: raw = kOneShotTemplate; break;
        case Strategy::Guideline: raw = kGuidelineTemplate; break;
        case Strategy::Refinement: raw = kRefinementTemplate; break;
    }

    PromptInstance prompt;
    prompt.strategy = strategy;
    prompt.slots = context.slots;
    prompt.slots["SOURCE_CONFIGURATION"] = std::string(source_text);

    std::string text(raw);
    text = substitute(std::move(text), "OUTPUT_CONTROL", std::string(kOutputControl));
    for (const auto& [slot, value] : prompt.slots)
        text = substitute(std::move(text), slot, value);
    prompt.text = std::move(text);
    return prompt;
}

// ---------------------------------------------------------------------------
// Guidelines
// ---------------------------------------------------------------------------

std::string GuidelineSet::joined_text() const {
    std::string out;
    for (const auto& [_, rule] : rules) {
        out += "- ";
        out += rule;
        out += "\n";
    }
    if (!out.empty())
        out.pop_back();
    return out;
}

GuidelineSet GuidelineSet::built_in() {
    GuidelineSet set;
    set.rules = {
        {IssueType::MissingSymbol,
         "End every mapping key with ':' and begin every sequence item with '- '; trigger "
         "events must form a YAML list or mapping, never bare words."},
        {IssueType::IndentationError,
         "Nest include and exclude under matrix; indentation defines structure, so children "
         "must be indented below their parent key."},
        {IssueType::MissingOrMisplacedDefinition,
         "Define strategy.matrix for every axis referenced through ${{ matrix.* }}, and make "
         "every needs entry name an existing job."},
        {IssueType::InvalidValue,
         "Give each with: input a single value of the expected shape; a version input takes "
         "one version, not a comma-separated list."},
        {IssueType::UnsupportedKey,
         "Do not carry Travis CI keys (language, dist, sudo, fast_finish) into the workflow; "
         "the matrix cancellation flag is spelled fail-fast."},
        {IssueType::UnsupportedExpression,
         "Write environment variables as key-value pairs (NAME: value), never as NAME=value "
         "assignment strings."},
        {IssueType::UnsupportedArchitecture,
         "Use only the x64 and arm64 architectures; map amd64 to x64 and drop values the "
         "platform cannot provide."},
        {IssueType::TrailingZero,
         "Preserve version numbers in string format: quote versions with trailing zeros "
         "(\"3.10\") so they are not read as 3.1."},
        {IssueType::UnspecifiedDefault,
         "Start every job with actions/checkout and add the language setup action bound to "
         "the version axis; both are implicit in Travis CI but required here."},
        {IssueType::MissingPackage,
         "Explicitly install tools that Travis CI preinstalls (for example pip install nose) "
         "before their first use."},
        {IssueType::ObsoleteAction,
         "Reference maintained action versions such as actions/checkout@v4, "
         "actions/setup-python@v5, and actions/cache@v4; v2-era references are unsupported."},
        {IssueType::MissingSecret,
         "Provide required credentials through the secrets context and reference only secrets "
         "that exist (secrets.GITHUB_TOKEN is always available)."},
        {IssueType::TriggerEventMisconfig,
         "Trigger on [push, pull_request] unless the source restricts branches; never "
         "restrict push to tags when the source built every push."},
        {IssueType::ExecutionOrderError,
         "Express Travis stage ordering with needs: every job of a later stage must list the "
         "jobs of the stage before it."},
        {IssueType::ConditionMisconfig,
         "Add if: conditions only for after_success (success()), after_failure (failure()), "
         "and after_script (always()); keep every other step unconditional."},
        {IssueType::MissingTask,
         "Translate every command from every Travis phase, including caching configuration, "
         "into workflow steps."},
        {IssueType::RedundantTask,
         "Do not invent steps that have no counterpart in the source configuration."},
    };
    return set;
}

GuidelineSet GuidelineSet::load_file(const std::string& path) {
    YAML::Node doc = YAML::LoadFile(path);
    if (!doc.IsMap())
        throw std::runtime_error("guidelines file must be a mapping: " + path);
    GuidelineSet set;
    for (const auto& kv : doc) {
        auto type = issue_type_from_name(kv.first.Scalar());
        if (!type)
            throw std::runtime_error("unknown issue type in guidelines: " + kv.first.Scalar());
        if (kv.second.IsScalar()) {
            set.rules.emplace_back(*type, kv.second.Scalar());
        } else if (kv.second.IsSequence()) {
            for (const auto& rule : kv.second)
                set.rules.emplace_back(*type, rule.Scalar());
        }
    }
    for (const auto& row : {IssueType::MissingSymbol, IssueType::IndentationError,
                            IssueType::MissingOrMisplacedDefinition, IssueType::InvalidValue,
                            IssueType::UnsupportedKey, IssueType::UnsupportedExpression,
                            IssueType::UnsupportedArchitecture, IssueType::TrailingZero,
                            IssueType::UnspecifiedDefault, IssueType::MissingPackage,
                            IssueType::ObsoleteAction, IssueType::MissingSecret,
                            IssueType::TriggerEventMisconfig, IssueType::ExecutionOrderError,
                            IssueType::ConditionMisconfig, IssueType::MissingTask,
                            IssueType::RedundantTask}) {
        const bool covered = std::ranges::any_of(
            set.rules, [&](const auto& rule) { return rule.first == row; });
        if (!covered)
            throw std::runtime_error("guidelines are missing a rule for issue type '" +
                                     std::string(to_string_view(row)) + "'");
    }
    return set;
}

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

MockProvider::MockProvider(std::string directory) : directory_(std::move(directory)) {}

ProviderResponse MockProvider::complete(const ProviderRequest& request) {
    namespace fs = std::filesystem;
    for (int iteration = request.iteration; iteration >= 0; --iteration) {
        const auto path = fs::path(directory_) /
                          (request.case_id + "." + std::to_string(iteration) + ".txt");
        std::ifstream in(path);
        if (!in)
            continue;
        std::ostringstream content;
        content << in.rdbuf();
        return ProviderResponse{content.str()};
    }
    throw TransportError("no scripted response for case '" + request.case_id +
                         "' iteration " + std::to_string(request.iteration) + " under " +
                         directory_);
}

const TranslationRecord& select_one_shot_example(std::string_view source_text,
                                                 const std::vector<TranslationRecord>& pool) {
    if (pool.empty())
        throw PromptError("one-shot example pool is empty");
    const auto query = term_frequencies(tokenize(source_text));
    const TranslationRecord* best = nullptr;
    double best_score = -1.0;
    for (const auto& record : pool) {
        const auto candidate = term_frequencies(tokenize(record.source_text));
        double score = 0.0;
        if (!query.empty() && !candidate.empty())
            score = cosine_similarity(query, candidate);
        if (score > best_score) {  // strict: ties keep pool order
            best_score = score;
            best = &record;
        }
    }
    return *best;
}

std::optional<std::string> extract_config(std::string_view response) {
    auto parses_as_mapping = [](const std::string& text) {
        if (text.empty())
            return false;
        try {
            auto doc = YAML::Load(text);
            return doc.IsMap();
        } catch (const YAML::Exception&) {
            return false;
        }
    };

    std::vector<std::string> lines;
    {
        std::istringstream stream{std::string(response)};
        std::string line;
        while (std::getline(stream, line))
            lines.push_back(line);
    }

    auto join = [&lines](std::size_t first, std::size_t last) {
        std::string out;
        for (std::size_t i = first; i <= last && i < lines.size(); ++i) {
            out += lines[i];
            out += "\n";
        }
        return out;
    };

    // Fenced blocks take precedence.
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!lines[i].starts_with("```"))
            continue;
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (!lines[j].starts_with("```"))
                continue;
            if (j > i + 1) {
                auto block = join(i + 1, j - 1);
                if (parses_as_mapping(block))
                    return block;
            }
            i = j;
            break;
        }
    }

    // Otherwise drop prose before the first top-level key and after the last
    // YAML-shaped line.
    auto is_top_level_key = [](const std::string& line) {
        if (line.empty() || std::isspace(static_cast<unsigned char>(line.front())))
            return false;
        auto colon = line.find(':');
        if (colon == std::string::npos || colon == 0)
            return false;
        for (std::size_t i = 0; i < colon; ++i) {
            const char c = line[i];
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
                c != '"' && c != '\'')
                return false;
        }
        return colon + 1 == line.size() || line[colon + 1] == ' ';
    };
    auto looks_like_yaml = [&](const std::string& line) {
        if (line.empty())
            return true;
        if (std::isspace(static_cast<unsigned char>(line.front())))
            return true;
        return line.front() == '#' || line.starts_with("- ") || is_top_level_key(line);
    };

    std::size_t first = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (is_top_level_key(lines[i])) {
            first = i;
            break;
        }
    }
    if (first == lines.size())
        return std::nullopt;
    std::size_t last = lines.size() - 1;
    while (last > first && !looks_like_yaml(lines[last]))
        --last;
    while (last > first && lines[last].empty())
        --last;

    auto block = join(first, last);
    if (parses_as_mapping(block))
        return block;
    return std::nullopt;
}

TranslateOutcome translate_once(Provider& provider, Strategy strategy,
                                const TranslationCase& translation_case,
                                const PromptContext& context, int iteration) {
    auto prompt = build_prompt(strategy, translation_case.source_text, context);

    ProviderRequest request;
    request.temperature = 0.0;
    request.messages.push_back(Message{"user", prompt.text});
    request.case_id = translation_case.case_id;
    request.iteration = iteration;

    ProviderResponse response;
    try {
        response = provider.complete(request);
    } catch (const TransportError&) {
        throw;
    } catch (const std::exception& e) {
        throw TransportError("provider failed for case '" + translation_case.case_id +
                             "': " + e.what());
    }
    return TranslateOutcome{extract_config(response.content), std::move(prompt)};
}

BuildOutcome simulate_build(std::string_view candidate_text, const LintContext& ctx,
                            std::string_view case_id) {
    BuildOutcome outcome;
    outcome.case_id = std::string(case_id);
    const auto issues = lint(candidate_text, ctx);
    for (const auto& issue : issues) {
        if (issue.severity == Severity::Blocking)
            outcome.messages.push_back(format_issue(issue));
    }
    outcome.status = outcome.messages.empty() ? BuildStatus::Success : BuildStatus::Failure;
    return outcome;
}

// ---------------------------------------------------------------------------
// Refinement loop
// ---------------------------------------------------------------------------

namespace {

std::string cap_lines(const std::vector<std::string>& messages, int cap) {
    std::string joined;
    int count = 0;
    for (const auto& message : messages) {
        std::istringstream stream(message);
        std::string line;
        while (std::getline(stream, line)) {
            if (count++ >= cap)
                return joined + "(further messages truncated)\n";
            joined += line;
            joined += "\n";
        }
    }
    return joined;
}

}  // namespace

RefinementResult refine_batch(const std::vector<TranslationCase>& cases, Provider& provider,
                              BuildProvider& build, const RefineOptions& options) {
    if (options.max_iters < 1)
        throw std::invalid_argument("max_iters must be >= 1");

    RefinementResult result;
    for (const auto& translation_case : cases) {
        RefinementState state;
        state.case_id = translation_case.case_id;
        result.states[translation_case.case_id] = std::move(state);
    }

    const GuidelineSet guidelines =
        options.guidelines ? *options.guidelines : GuidelineSet::built_in();

    for (int iteration = 0; iteration <= options.max_iters; ++iteration) {
        std::vector<const TranslationCase*> failing;
        for (const auto& translation_case : cases) {
            if (result.states.at(translation_case.case_id).status != RefinementStatus::Fixed)
                failing.push_back(&translation_case);
        }
        if (failing.empty())
            break;

        IterationStats stats;
        stats.iteration = iteration;
        bool any_text_changed = false;
        std::mutex mutex;

        for_each_parallel(failing.size(), options.workers, [&](std::size_t index) {
            const auto& translation_case = *failing[index];
            auto& state = result.states.at(translation_case.case_id);

            PromptContext context;
            Strategy strategy;
            if (iteration == 0) {
                strategy = options.strategy_for_initial;
                if (strategy == Strategy::Guideline) {
                    context.slots["GUIDELINES"] = guidelines.joined_text();
                } else if (strategy == Strategy::OneShot) {
                    std::vector<TranslationRecord> pool;
                    for (const auto& other : cases) {
                        if (other.case_id != translation_case.case_id && other.target_text)
                            pool.push_back(TranslationRecord{other.case_id, other.source_text,
                                                             *other.target_text, "", {}});
                    }
                    if (!pool.empty()) {
                        const auto& example =
                            select_one_shot_example(translation_case.source_text, pool);
                        context.slots["EXAMPLE_SOURCE"] = example.source_text;
                        context.slots["EXAMPLE_TARGET"] = example.target_text;
                    } else {
                        strategy = Strategy::Basic;  // nothing to demonstrate with
                    }
                }
            } else {
                strategy = Strategy::Refinement;
                context.slots["FAULTY_CONFIGURATION"] = state.current_text;
                context.slots["ERROR_MESSAGES"] =
                    state.last_outcome
                        ? cap_lines(state.last_outcome->messages, options.error_message_line_cap)
                        : "";
            }

            BuildOutcome outcome;
            bool transport_failed = false;
            std::optional<std::string> candidate;
            try {
                auto translated =
                    translate_once(provider, strategy, translation_case, context, iteration);
                candidate = std::move(translated.candidate_text);
            } catch (const TransportError& e) {
                transport_failed = true;
                outcome.case_id = translation_case.case_id;
                outcome.status = BuildStatus::Failure;
                outcome.messages = {std::string("transport error: ") + e.what()};
            }

            if (!transport_failed) {
                if (candidate) {
                    outcome = build.run(translation_case.case_id, *candidate);
                } else {
                    outcome.case_id = translation_case.case_id;
                    outcome.status = BuildStatus::Failure;
                    outcome.messages = {"no configuration could be extracted from the response"};
                }
            }

            std::lock_guard lock(mutex);
            ++stats.provider_calls;
            state.iteration = iteration;
            if (candidate) {
                if (*candidate != state.current_text)
                    any_text_changed = true;
                state.current_text = *candidate;
            }
            state.last_outcome = outcome;
            if (outcome.status == BuildStatus::Success) {
                state.status = RefinementStatus::Fixed;
                stats.newly_fixed.push_back(translation_case.case_id);
            }
        });

        std::ranges::sort(stats.newly_fixed);
        result.total_provider_calls += stats.provider_calls;
        // Zero-new-fix termination: a refinement round that fixed nothing and
        // produced no new candidate text cannot make further progress (the
        // build verdict is deterministic in the text).
        const bool stalled = iteration >= 1 && stats.newly_fixed.empty() && !any_text_changed;
        result.iterations.push_back(std::move(stats));
        if (stalled)
            break;
    }

    for (auto& [_, state] : result.states) {
        if (state.status == RefinementStatus::Pending)
            state.status = RefinementStatus::Exhausted;
    }
    return result;
}

// ---------------------------------------------------------------------------
// HTTP provider
// ---------------------------------------------------------------------------

HttpProvider::HttpProvider(std::string url, std::string key, std::string model)
    : url_(std::move(url)), key_(std::move(key)), model_(std::move(model)) {}

HttpProvider HttpProvider::from_environment() {
    const char* url = std::getenv("CI_PORTER_LLM_URL");
    if (!url || !*url)
        throw TransportError("CI_PORTER_LLM_URL is not set");
    const char* key = std::getenv("CI_PORTER_LLM_KEY");
    return HttpProvider(url, key ? key : "");
}

}  // namespace ciporter
