#pragma once

#include "ciporter/linter.hpp"
#include "ciporter/metrics.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ciporter {

enum class Strategy { Basic, OneShot, Guideline, Refinement };

std::string_view to_string_view(Strategy strategy);

struct PromptInstance {
    Strategy strategy = Strategy::Basic;
    std::string text;
    std::map<std::string, std::string> slots;  // SOURCE_CONFIGURATION always present
};

class PromptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Natural-language rules keyed by issue type; every one of the 17 types
/// carries at least one rule.
struct GuidelineSet {
    std::vector<std::pair<IssueType, std::string>> rules;

    std::string joined_text() const;
    static GuidelineSet built_in();
    static GuidelineSet load_file(const std::string& path);
};

enum class RefinementStatus { Pending, Fixed, Exhausted };

std::string_view to_string_view(RefinementStatus status);

struct RefinementState {
    std::string case_id;
    int iteration = 0;
    std::string current_text;
    std::optional<BuildOutcome> last_outcome;
    RefinementStatus status = RefinementStatus::Pending;
};

struct Message {
    std::string role;
    std::string content;
};

struct ProviderRequest {
    std::string model = "default";
    double temperature = 0.0;  // deterministic by default
    std::vector<Message> messages;
    // Routing metadata for scripted providers; never part of the wire body.
    std::string case_id;
    int iteration = 0;
};

struct ProviderResponse {
    std::string content;
};

/// Transport failures are retriable and distinct from extraction failures.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One round-trip to a model. Implementations must be callable from
/// concurrent workers.
class Provider {
public:
    virtual ~Provider() = default;
    virtual ProviderResponse complete(const ProviderRequest& request) = 0;
};

/// Scripted provider reading <case_id>.<iteration>.txt from a directory.
/// A missing iteration file falls back to the nearest lower iteration, so a
/// single file scripts a provider that repeats itself.
class MockProvider : public Provider {
public:
    explicit MockProvider(std::string directory);
    ProviderResponse complete(const ProviderRequest& request) override;

private:
    std::string directory_;
};

/// JSON-over-HTTP provider configured by CI_PORTER_LLM_URL / CI_PORTER_LLM_KEY.
/// Request: {model, temperature, messages:[{role, content}]}; response: {content}.
class HttpProvider : public Provider {
public:
    HttpProvider(std::string url, std::string key, std::string model = "default");
    static HttpProvider from_environment();
    ProviderResponse complete(const ProviderRequest& request) override;

private:
    std::string url_;
    std::string key_;
    std::string model_;
};

struct PromptContext {
    std::map<std::string, std::string> slots;
};

/// Instantiates the template for the strategy: task instruction, source
/// platform, target platform, the configuration, and the output-control
/// instruction. Throws PromptError naming any missing slot.
PromptInstance build_prompt(Strategy strategy, std::string_view source_text,
                            const PromptContext& context);

struct TranslationRecord;  // mining.hpp

/// The pool record whose source is most cosine-similar to source_text;
/// ties break by pool order. Throws on an empty pool.
const TranslationRecord& select_one_shot_example(std::string_view source_text,
                                                 const std::vector<TranslationRecord>& pool);

/// Strips code fences and surrounding prose; nullopt when no YAML-shaped
/// region parses (counts as a build failure downstream).
std::optional<std::string> extract_config(std::string_view response);

struct TranslationCase {
    std::string case_id;
    std::string source_text;
    std::optional<std::string> target_text;  // ground truth when known
};

struct TranslateOutcome {
    std::optional<std::string> candidate_text;  // nullopt: extraction failure
    PromptInstance prompt;
};

/// One provider round-trip; candidate_text = extract_config(response).
TranslateOutcome translate_once(Provider& provider, Strategy strategy,
                                const TranslationCase& translation_case,
                                const PromptContext& context, int iteration = 0);

/// Success iff the candidate parses and lint reports zero blocking issues;
/// failure messages are the rendered blocking issues.
BuildOutcome simulate_build(std::string_view candidate_text, const LintContext& ctx,
                            std::string_view case_id = "");

/// Build verdict used by the refinement loop; simulate_build is the shipped
/// implementation, a live CI runner would be another.
class BuildProvider {
public:
    virtual ~BuildProvider() = default;
    virtual BuildOutcome run(const std::string& case_id, const std::string& candidate_text) = 0;
};

class SimulatedBuildProvider : public BuildProvider {
public:
    explicit SimulatedBuildProvider(LintContext ctx) : ctx_(std::move(ctx)) {}
    BuildOutcome run(const std::string& case_id, const std::string& candidate_text) override {
        return simulate_build(candidate_text, ctx_, case_id);
    }

private:
    LintContext ctx_;
};

struct IterationStats {
    int iteration = 0;
    int provider_calls = 0;
    std::vector<std::string> newly_fixed;
};

struct RefinementResult {
    std::map<std::string, RefinementState> states;
    std::vector<IterationStats> iterations;
    int total_provider_calls = 0;
};

struct RefineOptions {
    int max_iters = 5;                              // refinement rounds after iteration 0
    Strategy strategy_for_initial = Strategy::Basic;
    std::optional<GuidelineSet> guidelines;         // required for guideline prompting
    int error_message_line_cap = 100;               // prompt-size bound per case
    int workers = 1;
};

/// Iteration 0 translates every case with the initial strategy; later
/// iterations re-prompt only still-failing cases with their error messages.
/// Stops when everything is fixed, when a refinement round fixes zero new
/// cases while every response repeats its previous text (stalled), or when
/// max_iters is reached. The fixed set grows monotonically.
RefinementResult refine_batch(const std::vector<TranslationCase>& cases, Provider& provider,
                              BuildProvider& build, const RefineOptions& options);

}  // namespace ciporter
