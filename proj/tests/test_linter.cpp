#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ciporter/linter.hpp"
#include "ciporter/transpiler.hpp"
#include "testutil.hpp"

#include <map>

using namespace ciporter;

namespace {

const char* kSeededTypes[] = {
    "missing_symbol",          "indentation_error", "missing_or_misplaced_definition",
    "invalid_value",           "unsupported_key",   "unsupported_expression",
    "unsupported_architecture", "trailing_zero",    "unspecified_default",
    "missing_package",         "obsolete_action",   "missing_secret",
    "trigger_event_misconfig", "execution_order_error", "condition_misconfig",
    "missing_task",            "redundant_task",
};

std::vector<Issue> lint_fixture(const std::string& name, LintContext& ctx,
                                TravisConfig& source_storage) {
    const auto candidate = testutil::fixture("taxonomy/" + name + ".yml");
    const auto source_path = testutil::fixture_dir() / ("taxonomy/" + name + ".travis.yml");
    if (std::filesystem::exists(source_path)) {
        source_storage = parse_travis(testutil::slurp(source_path));
        ctx.source = &source_storage;
    }
    return lint(candidate, ctx);
}

}  // namespace

TEST_CASE("seventeen seeded fixtures trigger exactly their type") {
    for (const auto* name : kSeededTypes) {
        LintContext ctx;
        TravisConfig source;
        const auto issues = lint_fixture(name, ctx, source);
        CAPTURE(name);
        REQUIRE(!issues.empty());
        const auto expected = issue_type_from_name(name);
        REQUIRE(expected.has_value());
        // the seeded type fires...
        CHECK(std::ranges::any_of(
            issues, [&](const Issue& i) { return i.issue_type == *expected; }));
        // ...and nothing else blocking does
        for (const auto& issue : issues) {
            CAPTURE(format_issue(issue));
            if (issue.issue_type != *expected)
                CHECK(issue.severity != Severity::Blocking);
            else
                CHECK(issue.issue_type == *expected);
        }
        // category/type pairing follows the taxonomy table
        for (const auto& issue : issues)
            CHECK(category_of(issue.issue_type) == issue.category);
    }
}

TEST_CASE("clean workflows produce no issues at all") {
    for (const auto* name : {"clean_1", "clean_2", "clean_3"}) {
        LintContext ctx;
        TravisConfig source;
        const auto issues = lint_fixture(name, ctx, source);
        CAPTURE(name);
        for (const auto& issue : issues)
            CAPTURE(format_issue(issue));
        CHECK(issues.empty());
    }
}

TEST_CASE("severity table: logic advisory, everything else blocking") {
    const IssueType blocking[] = {
        IssueType::MissingSymbol,       IssueType::IndentationError,
        IssueType::MissingOrMisplacedDefinition, IssueType::InvalidValue,
        IssueType::UnsupportedKey,      IssueType::UnsupportedExpression,
        IssueType::UnsupportedArchitecture, IssueType::TrailingZero,
        IssueType::UnspecifiedDefault,  IssueType::MissingPackage,
        IssueType::ObsoleteAction,      IssueType::MissingSecret,
    };
    const IssueType advisory[] = {
        IssueType::TriggerEventMisconfig, IssueType::ExecutionOrderError,
        IssueType::ConditionMisconfig,    IssueType::MissingTask,
        IssueType::RedundantTask,
    };
    for (auto type : blocking)
        CHECK(severity_of(type) == Severity::Blocking);
    for (auto type : advisory)
        CHECK(severity_of(type) == Severity::Advisory);
}

TEST_CASE("category membership matches the taxonomy arithmetic: 4+6+2+5") {
    std::map<IssueCategory, int> counts;
    for (const auto* name : kSeededTypes) {
        const auto type = issue_type_from_name(name);
        REQUIRE(type.has_value());
        ++counts[category_of(*type)];
    }
    CHECK(counts[IssueCategory::SyntaxError] == 4);
    CHECK(counts[IssueCategory::PlatformDiscrepancy] == 6);
    CHECK(counts[IssueCategory::EnvironmentError] == 2);
    CHECK(counts[IssueCategory::LogicInconsistency] == 5);
}

TEST_CASE("lint is deterministic and ordered by line") {
    const auto candidate = testutil::fixture("taxonomy/trailing_zero.yml");
    LintContext ctx;
    const auto first = lint(candidate, ctx);
    const auto second = lint(candidate, ctx);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].issue_type == second[i].issue_type);
        CHECK(first[i].path == second[i].path);
        CHECK(first[i].line == second[i].line);
    }
    for (std::size_t i = 1; i < first.size(); ++i)
        CHECK(first[i - 1].line.value_or(1 << 20) <= first[i].line.value_or(1 << 20));
}

TEST_CASE("unparseable candidates yield syntax issues only") {
    LintContext ctx;
    const auto issues = lint("on: [push\njobs: {", ctx);
    REQUIRE(!issues.empty());
    for (const auto& issue : issues)
        CHECK(issue.category == IssueCategory::SyntaxError);
}

TEST_CASE("the reference workflow is clean without a source too") {
    LintContext ctx;
    CHECK(lint(testutil::fixture("fig1/workflow.yml"), ctx).empty());
}

TEST_CASE("secrets context: GITHUB_TOKEN is always available") {
    LintContext ctx;
    const auto clean = lint(
        "on: [push]\njobs:\n  b:\n    runs-on: x\n    steps:\n      - uses: actions/checkout@v4\n"
        "      - run: make release\n        env:\n          TOKEN: ${{ secrets.GITHUB_TOKEN }}\n",
        ctx);
    CHECK(clean.empty());

    const auto flagged = lint(
        "on: [push]\njobs:\n  b:\n    runs-on: x\n    steps:\n      - uses: actions/checkout@v4\n"
        "      - run: make release\n        env:\n          TOKEN: ${{ secrets.DEPLOY_KEY }}\n",
        ctx);
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0].issue_type == IssueType::MissingSecret);

    LintContext extended;
    extended.available_secrets.insert("DEPLOY_KEY");
    CHECK(lint(
              "on: [push]\njobs:\n  b:\n    runs-on: x\n    steps:\n      - uses: actions/checkout@v4\n"
              "      - run: make release\n        env:\n          TOKEN: ${{ secrets.DEPLOY_KEY }}\n",
              extended)
              .empty());
}

TEST_CASE("credentialed tools need a token env or secrets reference") {
    LintContext ctx;
    TravisConfig source = parse_travis(
        "language: python\npython: [\"3.8\"]\nscript:\n  - pip install coveralls\n  - coveralls\n");
    ctx.source = &source;
    const auto flagged = lint(
        "on: [push, pull_request]\njobs:\n  b:\n    runs-on: x\n    steps:\n"
        "      - uses: actions/checkout@v4\n      - run: pip install coveralls\n      - run: coveralls\n",
        ctx);
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0].issue_type == IssueType::MissingSecret);
}

TEST_CASE("obsolete actions are judged against the registry minimum") {
    LintContext ctx;
    const auto base =
        "on: [push]\njobs:\n  b:\n    runs-on: x\n    steps:\n      - uses: actions/checkout@";
    CHECK(lint(base + std::string("v4\n      - run: make\n"), ctx).empty());
    CHECK(lint(base + std::string("v3\n      - run: make\n"), ctx).empty());  // at the floor
    const auto flagged = lint(base + std::string("v2\n      - run: make\n"), ctx);
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0].issue_type == IssueType::ObsoleteAction);
    // unparseable versions (shas, branches) are not judged
    CHECK(lint(base + std::string("deadbeef\n      - run: make\n"), ctx).empty());
}

TEST_CASE("logic checks are skipped entirely without a source") {
    LintContext ctx;
    const auto issues = lint(testutil::fixture("taxonomy/missing_task.yml"), ctx);
    CHECK(issues.empty());  // missing_task only fires when the source is present
}

TEST_CASE("detect_logic flags a lost cache step") {
    const auto source = parse_travis(testutil::fixture("golden/g3_cache_env.travis.yml"));
    const auto candidate = parse_workflow(
        "on: [push, pull_request]\njobs:\n  build:\n    runs-on: ubuntu-latest\n    steps:\n"
        "      - uses: actions/checkout@v4\n      - run: pip install tox\n      - run: tox\n");
    const auto issues = detect_logic(source, candidate);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].issue_type == IssueType::MissingTask);
    CHECK(issues[0].evidence.find("cache") != std::string::npos);
}

TEST_CASE("detect_logic traces conditions in both directions") {
    const auto source = parse_travis(
        "language: python\npython: [\"3.8\"]\nscript: [pytest]\nafter_failure:\n  - cat log\n");

    // conditional phase rendered unconditional
    const auto flat = parse_workflow(
        "on: [push, pull_request]\njobs:\n  b:\n    runs-on: x\n    steps:\n"
        "      - uses: actions/checkout@v4\n      - run: pytest\n      - run: cat log\n");
    auto issues = detect_logic(source, flat);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].issue_type == IssueType::ConditionMisconfig);

    // correct polarity is quiet
    const auto conditional = parse_workflow(
        "on: [push, pull_request]\njobs:\n  b:\n    runs-on: x\n    steps:\n"
        "      - uses: actions/checkout@v4\n      - run: pytest\n      - run: cat log\n"
        "        if: failure()\n");
    CHECK(detect_logic(source, conditional).empty());
}

TEST_CASE("issue type round-trips through names") {
    for (const auto* name : kSeededTypes) {
        const auto type = issue_type_from_name(name);
        REQUIRE(type.has_value());
        CHECK(to_string_view(*type) == name);
    }
    CHECK_FALSE(issue_type_from_name("nonsense").has_value());
}
