#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ciporter/llm.hpp"
#include "ciporter/mining.hpp"
#include "testutil.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

using namespace ciporter;
namespace fs = std::filesystem;

namespace {

struct ScratchDir {
    fs::path path;
    explicit ScratchDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("ciporter-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }

    void script(const std::string& case_id, int iteration, const std::string& content) const {
        std::ofstream out(path / (case_id + "." + std::to_string(iteration) + ".txt"));
        out << content;
    }
};

const std::string kFaultyTrailingZero =
    "name: CI\non: [push, pull_request]\njobs:\n  build:\n    runs-on: ubuntu-latest\n"
    "    strategy:\n      matrix:\n        python-version: [3.10]\n    steps:\n"
    "      - uses: actions/checkout@v4\n      - uses: actions/setup-python@v5\n"
    "        with:\n          python-version: ${{ matrix.python-version }}\n"
    "      - run: python -m pytest\n";

std::string clean_workflow() {
    return testutil::fixture("fig1/workflow.yml");
}

}  // namespace

TEST_CASE("basic prompt carries the five components") {
    const auto source = testutil::fixture("fig1/travis.yml");
    const auto prompt = build_prompt(Strategy::Basic, source, {});
    CHECK(prompt.text.find("Translate") != std::string::npos);          // task instruction
    CHECK(prompt.text.find("Travis CI") != std::string::npos);          // source platform
    CHECK(prompt.text.find("GitHub Actions") != std::string::npos);     // target platform
    CHECK(prompt.text.find(source) != std::string::npos);               // the configuration
    CHECK(prompt.text.find("Only generate the translated configuration") !=
          std::string::npos);                                           // output control
    CHECK(prompt.slots.count("SOURCE_CONFIGURATION") == 1);
    CHECK(prompt.text.find("${") == std::string::npos);  // no unfilled slots
}

TEST_CASE("one-shot prompt embeds both example sides") {
    PromptContext context;
    context.slots["EXAMPLE_SOURCE"] = "language: go";
    context.slots["EXAMPLE_TARGET"] = "on: [push]\njobs: {}";
    const auto prompt = build_prompt(Strategy::OneShot, "language: python", context);
    CHECK(prompt.text.find("language: go") != std::string::npos);
    CHECK(prompt.text.find("on: [push]") != std::string::npos);
}

TEST_CASE("guideline prompt embeds the rules") {
    PromptContext context;
    context.slots["GUIDELINES"] = GuidelineSet::built_in().joined_text();
    const auto prompt = build_prompt(Strategy::Guideline, "language: python", context);
    CHECK(prompt.text.find("Preserve version numbers in string format") != std::string::npos);
}

TEST_CASE("refinement prompt embeds faulty output and errors verbatim") {
    PromptContext context;
    context.slots["FAULTY_CONFIGURATION"] = kFaultyTrailingZero;
    context.slots["ERROR_MESSAGES"] = "[blocking] trailing_zero at jobs.build: version 3.10";
    const auto prompt = build_prompt(Strategy::Refinement, "language: python", context);
    CHECK(prompt.text.find(kFaultyTrailingZero) != std::string::npos);
    CHECK(prompt.text.find("trailing_zero at jobs.build") != std::string::npos);
    CHECK(prompt.text.find("language: python") != std::string::npos);  // source included
}

TEST_CASE("missing slots are named in the error") {
    CHECK_THROWS_WITH_AS((void)build_prompt(Strategy::Refinement, "language: python", {}),
                         doctest::Contains("FAULTY_CONFIGURATION"), PromptError);
    CHECK_THROWS_WITH_AS((void)build_prompt(Strategy::OneShot, "language: python", {}),
                         doctest::Contains("EXAMPLE_SOURCE"), PromptError);
    CHECK_THROWS_AS((void)build_prompt(Strategy::Basic, "", {}), PromptError);
}

TEST_CASE("prompts are byte-deterministic") {
    const auto source = testutil::fixture("fig1/travis.yml");
    PromptContext context;
    context.slots["GUIDELINES"] = GuidelineSet::built_in().joined_text();
    CHECK(build_prompt(Strategy::Guideline, source, context).text ==
          build_prompt(Strategy::Guideline, source, context).text);
}

TEST_CASE("built-in guidelines cover all seventeen issue types") {
    const auto set = GuidelineSet::built_in();
    std::set<IssueType> covered;
    for (const auto& [type, _] : set.rules)
        covered.insert(type);
    CHECK(covered.size() == 17);
}

TEST_CASE("guidelines file loads and matches the built-in coverage") {
    const auto set = GuidelineSet::load_file(std::string(CIPORTER_DATA_DIR) + "/guidelines.yml");
    std::set<IssueType> covered;
    for (const auto& [type, _] : set.rules)
        covered.insert(type);
    CHECK(covered.size() == 17);
}

TEST_CASE("one-shot selection maximizes term-frequency cosine similarity") {
    std::vector<TranslationRecord> pool;
    pool.push_back({"r1", "language: go", "wf1", "", {}});
    pool.push_back({"r2", "language: python\npython: [3.9]", "wf2", "", {}});
    pool.push_back({"r3", "python: [3.8]", "wf3", "", {}});

    // query TF {language:1, python:2, 3.8:1}; hand-computed Eq.2 scores:
    // r1 = 1/sqrt(12) = 0.2887, r2 = 5/6 = 0.8333, r3 = 3/sqrt(12) = 0.8660
    const auto& best = select_one_shot_example("language: python\npython: [3.8]", pool);
    CHECK(best.id == "r3");

    const std::vector<TranslationRecord> single = {pool[0]};
    CHECK(select_one_shot_example("anything at all", single).id == "r1");

    // identical source dominates (CS = 1)
    const auto& identical = select_one_shot_example("language: python\npython: [3.9]", pool);
    CHECK(identical.id == "r2");

    CHECK_THROWS_AS((void)select_one_shot_example("x", {}), PromptError);
}

TEST_CASE("one-shot ties keep pool order") {
    std::vector<TranslationRecord> pool;
    pool.push_back({"first", "language: rust", "wf1", "", {}});
    pool.push_back({"second", "language: rust", "wf2", "", {}});
    CHECK(select_one_shot_example("language: rust", pool).id == "first");
}

TEST_CASE("extract_config strips fences, prose, or reports failure") {
    CHECK(extract_config("```yaml\nname: CI\non: [push]\njobs: {b: {steps: []}}\n```") ==
          "name: CI\non: [push]\njobs: {b: {steps: []}}\n");

    const auto bare = clean_workflow();
    CHECK(extract_config(bare) == bare);

    CHECK_FALSE(extract_config("Sure! Here is the translated configuration").has_value());
    CHECK_FALSE(extract_config("").has_value());

    const auto prose = "Here is your workflow\n\nname: CI\non: [push]\njobs:\n  b:\n    steps:\n"
                       "      - run: make\n\nLet me know if this works for you";
    const auto extracted = extract_config(prose);
    REQUIRE(extracted.has_value());
    CHECK(extracted->find("Here is your workflow") == std::string::npos);
    CHECK(extracted->find("Let me know") == std::string::npos);
    CHECK(extracted->find("name: CI") != std::string::npos);
}

TEST_CASE("translate_once round-trips through the mock provider") {
    ScratchDir dir("translate");
    dir.script("case-a", 0, clean_workflow());
    dir.script("case-b", 0, "```yaml\n" + clean_workflow() + "```\n");
    MockProvider provider(dir.path.string());

    TranslationCase a{"case-a", testutil::fixture("fig1/travis.yml"), std::nullopt};
    const auto outcome = translate_once(provider, Strategy::Basic, a, {});
    REQUIRE(outcome.candidate_text.has_value());
    CHECK(*outcome.candidate_text == clean_workflow());
    CHECK(outcome.prompt.strategy == Strategy::Basic);

    TranslationCase b{"case-b", "language: python\npython: [3.8]\nscript: [pytest]", std::nullopt};
    const auto fenced = translate_once(provider, Strategy::Basic, b, {});
    REQUIRE(fenced.candidate_text.has_value());
    CHECK(*fenced.candidate_text == clean_workflow());

    TranslationCase ghost{"ghost", "language: python\npython: [3.8]", std::nullopt};
    CHECK_THROWS_WITH_AS((void)translate_once(provider, Strategy::Basic, ghost, {}),
                         doctest::Contains("ghost"), TransportError);
}

TEST_CASE("simulate_build verdicts follow the blocking/advisory split") {
    LintContext ctx;
    const auto clean = simulate_build(clean_workflow(), ctx, "ok");
    CHECK(clean.status == BuildStatus::Success);
    CHECK(clean.messages.empty());

    const auto broken = simulate_build(kFaultyTrailingZero, ctx, "tz");
    CHECK(broken.status == BuildStatus::Failure);
    REQUIRE(!broken.messages.empty());
    CHECK(broken.messages.front().find("trailing_zero") != std::string::npos);

    // advisory-only issues still build
    TravisConfig source = parse_travis(
        "language: python\npython: [3.8]\nscript:\n  - pytest\n  - flake8\n");
    LintContext with_source;
    with_source.source = &source;
    const auto advisory = simulate_build(
        "on: [push, pull_request]\njobs:\n  b:\n    runs-on: x\n    steps:\n"
        "      - uses: actions/checkout@v4\n      - run: pytest\n",
        with_source, "adv");
    CHECK(advisory.status == BuildStatus::Success);
}

TEST_CASE("refine_batch: case scripted clean at iteration 2 ends fixed there") {
    ScratchDir dir("fix-at-2");
    dir.script("a", 0, kFaultyTrailingZero);
    dir.script("a", 1, kFaultyTrailingZero + "# still wrong\n");
    dir.script("a", 2, clean_workflow());
    MockProvider provider(dir.path.string());
    SimulatedBuildProvider build{LintContext{}};

    RefineOptions options;
    options.max_iters = 5;
    const std::vector<TranslationCase> cases = {
        {"a", testutil::fixture("fig1/travis.yml"), std::nullopt}};
    const auto result = refine_batch(cases, provider, build, options);

    const auto& state = result.states.at("a");
    CHECK(state.status == RefinementStatus::Fixed);
    CHECK(state.iteration == 2);
    REQUIRE(state.last_outcome.has_value());
    CHECK(state.last_outcome->status == BuildStatus::Success);
    CHECK(result.iterations.size() == 3);
}

TEST_CASE("refine_batch halts when an iteration fixes nothing new") {
    ScratchDir dir("flat");
    dir.script("a", 0, kFaultyTrailingZero);  // the fallback repeats it forever
    MockProvider provider(dir.path.string());
    SimulatedBuildProvider build{LintContext{}};

    RefineOptions options;
    options.max_iters = 5;
    const std::vector<TranslationCase> cases = {
        {"a", testutil::fixture("fig1/travis.yml"), std::nullopt}};
    const auto result = refine_batch(cases, provider, build, options);

    CHECK(result.states.at("a").status == RefinementStatus::Exhausted);
    CHECK(result.iterations.size() == 2);  // iteration 0 plus one refinement
    CHECK(result.total_provider_calls == 2);
}

TEST_CASE("refine_batch: mixed batch leaves the unfixable case exhausted") {
    ScratchDir dir("mixed");
    dir.script("a", 0, kFaultyTrailingZero);
    dir.script("a", 1, clean_workflow());
    dir.script("b", 0, kFaultyTrailingZero);
    MockProvider provider(dir.path.string());
    SimulatedBuildProvider build{LintContext{}};

    RefineOptions options;
    options.max_iters = 5;
    const std::vector<TranslationCase> cases = {
        {"a", testutil::fixture("fig1/travis.yml"), std::nullopt},
        {"b", "language: python\npython: [3.8]\nscript: [pytest]\n", std::nullopt}};
    const auto result = refine_batch(cases, provider, build, options);

    CHECK(result.states.at("a").status == RefinementStatus::Fixed);
    CHECK(result.states.at("a").iteration == 1);
    CHECK(result.states.at("b").status == RefinementStatus::Exhausted);
    // iteration 2 fixed nothing new, so the loop stopped there
    CHECK(result.iterations.size() == 3);
}

TEST_CASE("refine_batch: transport failures mark the case, not the batch") {
    ScratchDir dir("transport");
    dir.script("a", 0, clean_workflow());
    // no files at all for "x"
    MockProvider provider(dir.path.string());
    SimulatedBuildProvider build{LintContext{}};

    RefineOptions options;
    options.max_iters = 3;
    const std::vector<TranslationCase> cases = {
        {"a", testutil::fixture("fig1/travis.yml"), std::nullopt},
        {"x", "language: python\npython: [3.8]\nscript: [pytest]\n", std::nullopt}};
    const auto result = refine_batch(cases, provider, build, options);

    CHECK(result.states.at("a").status == RefinementStatus::Fixed);
    const auto& x = result.states.at("x");
    CHECK(x.status == RefinementStatus::Exhausted);
    REQUIRE(x.last_outcome.has_value());
    REQUIRE(!x.last_outcome->messages.empty());
    CHECK(x.last_outcome->messages.front().find("transport error") != std::string::npos);
}

TEST_CASE("refine_batch: monotone fixed sets over a randomized schedule") {
    std::mt19937 rng(99);
    ScratchDir dir("schedule");
    std::vector<TranslationCase> cases;
    std::map<std::string, int> scheduled;
    for (int i = 0; i < 10; ++i) {
        const auto id = "case-" + std::to_string(i);
        const int fix_at = static_cast<int>(rng() % 7);  // 0..6; 6 > max_iters, never fixed
        scheduled[id] = fix_at;
        // distinct faulty text each round so the loop never stalls early
        for (int it = 0; it < std::min(fix_at, 6); ++it)
            dir.script(id, it, kFaultyTrailingZero + "# attempt " + std::to_string(it) + "\n");
        if (fix_at <= 5)
            dir.script(id, fix_at, clean_workflow());
        cases.push_back({id, "language: python\npython: [3.8]\nscript: [pytest]\n", std::nullopt});
    }
    MockProvider provider(dir.path.string());
    SimulatedBuildProvider build{LintContext{}};
    RefineOptions options;
    options.max_iters = 5;
    options.workers = 4;
    const auto result = refine_batch(cases, provider, build, options);

    // monotone: iterations never re-fix and the cumulative set only grows
    std::set<std::string> seen;
    for (const auto& stats : result.iterations) {
        for (const auto& id : stats.newly_fixed)
            CHECK(seen.insert(id).second);
    }
    // a fixed case is fixed exactly at its scheduled iteration
    for (const auto& [id, state] : result.states) {
        if (state.status == RefinementStatus::Fixed)
            CHECK(state.iteration == scheduled.at(id));
    }
    // call budget: |cases| * (max_iters + 1)
    CHECK(result.total_provider_calls <= 10 * (options.max_iters + 1));
    // zero-new-fix rule: if the loop ended early, the last completed
    // iteration fixed nothing new
    if (!result.iterations.empty() &&
        result.iterations.back().iteration < options.max_iters) {
        const bool all_fixed = std::ranges::all_of(result.states, [](const auto& kv) {
            return kv.second.status == RefinementStatus::Fixed;
        });
        if (!all_fixed)
            CHECK(result.iterations.back().newly_fixed.empty());
    }
}

TEST_CASE("refine_batch rejects a zero iteration cap") {
    ScratchDir dir("cap");
    MockProvider provider(dir.path.string());
    SimulatedBuildProvider build{LintContext{}};
    RefineOptions options;
    options.max_iters = 0;
    CHECK_THROWS_AS((void)refine_batch({}, provider, build, options), std::invalid_argument);
}
