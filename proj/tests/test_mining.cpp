#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ciporter/mining.hpp"
#include "testutil.hpp"

#include <filesystem>

using namespace ciporter;

namespace {

std::vector<CommitInfo> fixture_history() {
    return load_history_jsonl((testutil::fixture_dir() / "mining/history.jsonl").string());
}

DirectoryBlobLookup fixture_blobs() {
    return DirectoryBlobLookup((testutil::fixture_dir() / "mining/blobs").string());
}

}  // namespace

TEST_CASE("migration message patterns match case-insensitively and in order") {
    CHECK(is_migration_commit("Migrate CI from Travis to GitHub Actions"));
    CHECK(is_migration_commit("MOVE off travis"));
    CHECK(is_migration_commit("replace travis with actions"));
    CHECK(is_migration_commit("switch to travis alternatives"));
    CHECK(is_migration_commit("SWITCH ci away from TRAVIS"));

    CHECK_FALSE(is_migration_commit("Fix flaky test"));
    CHECK_FALSE(is_migration_commit(""));
    // order matters: travis before the verb does not match
    CHECK_FALSE(is_migration_commit("travis is gone, we migrate later"));
    CHECK_FALSE(is_migration_commit("Drop travis badge, migrate remaining docs"));
    // "migration" does not contain the verb stem "migrate"
    CHECK_FALSE(is_migration_commit("Discuss travis migration plan"));
}

TEST_CASE("the 12-commit fixture has exactly 3 matching messages") {
    const auto history = fixture_history();
    REQUIRE(history.size() == 12);
    int matches = 0;
    for (const auto& commit : history) {
        if (is_migration_commit(commit.message))
            ++matches;
    }
    CHECK(matches == 3);
}

TEST_CASE("extract_record finds the one-to-one migration") {
    const auto history = fixture_history();
    const auto blobs = fixture_blobs();
    const auto record = extract_record(history, blobs);
    REQUIRE(record.has_value());
    CHECK(record->migration_commit == "c05");
    CHECK(record->follow_up_commits.size() == 2);
    CHECK(record->follow_up_commits[0].sha == "c06");
    CHECK(record->follow_up_commits[1].sha == "c09");
    CHECK(count_raw_lines(record->source_text) == 38);
    CHECK(count_raw_lines(record->target_text) == 58);
}

TEST_CASE("one-to-many migrations produce no record") {
    auto history = fixture_history();
    for (auto& commit : history) {
        if (commit.sha == "c05") {
            FileChange extra = commit.file_changes.front();
            extra.path = ".github/workflows/extra.yml";
            commit.file_changes.push_back(extra);
        }
    }
    CHECK_FALSE(extract_record(history, fixture_blobs()).has_value());
}

TEST_CASE("histories without matching messages produce no record") {
    auto history = fixture_history();
    for (auto& commit : history)
        commit.message = "routine update";
    CHECK_FALSE(extract_record(history, fixture_blobs()).has_value());
}

TEST_CASE("missing blobs raise an error naming the reference") {
    const auto history = fixture_history();
    DirectoryBlobLookup empty_blobs("/nonexistent-blob-dir");
    CHECK_THROWS_WITH_AS((void)extract_record(history, empty_blobs), doctest::Contains("t2"),
                         MiningError);
}

TEST_CASE("effort metrics compute the hand-traced values") {
    const auto record = extract_record(fixture_history(), fixture_blobs());
    REQUIRE(record.has_value());
    const auto report = effort_metrics(*record);
    CHECK(report.source_size == 38);
    CHECK(report.target_size == 58);
    CHECK(report.attempts == 3);
    REQUIRE(report.change_sizes.size() == 2);
    CHECK(report.change_sizes[0] == std::pair(12, 7));
    CHECK(report.change_sizes[1] == std::pair(12, 7));
}

TEST_CASE("single-commit migrations have no change sizes") {
    TranslationRecord record;
    record.id = "r";
    record.source_text = "a\nb\n";
    record.target_text = "a\nb\nc\n";
    const auto report = effort_metrics(record);
    CHECK(report.attempts == 1);
    CHECK(report.change_sizes.empty());
    CHECK(report.source_size == 2);
    CHECK(report.target_size == 3);
}

TEST_CASE("aggregate_effort mirrors single and paired reports") {
    EffortReport one{38, 58, 1, {}};
    const auto single = aggregate_effort({one});
    CHECK(single.record_count == 1);
    CHECK(single.mean_source_size == 38.0);
    CHECK(single.mean_target_size == 58.0);
    CHECK(single.multi_commit_fraction == 0.0);
    CHECK(single.three_plus_commit_fraction == 0.0);

    EffortReport three{40, 60, 3, {{12, 7}, {12, 7}}};
    const auto pair = aggregate_effort({one, three});
    CHECK(pair.multi_commit_fraction == 0.5);
    CHECK(pair.three_plus_commit_fraction == 0.5);
    CHECK(pair.mean_added_per_followup == 12.0);
    CHECK(pair.mean_deleted_per_followup == 7.0);

    CHECK_THROWS_AS((void)aggregate_effort({}), MiningError);
}

TEST_CASE("a synthetic corpus reproduces the reported means") {
    // 811 records drawn to average 38/58 lines with 387 multi-commit
    std::vector<EffortReport> reports;
    for (int i = 0; i < 811; ++i) {
        EffortReport report;
        report.source_size = (i % 2 == 0) ? 30 : 46;  // mean 38
        report.target_size = (i % 2 == 0) ? 50 : 66;  // mean 58
        if (i < 387) {
            report.attempts = (i < 213) ? 3 : 2;
            for (int c = 1; c < report.attempts; ++c)
                report.change_sizes.push_back({12, 7});
        }
        reports.push_back(std::move(report));
    }
    const auto summary = aggregate_effort(reports);
    CHECK(summary.record_count == 811);
    CHECK(summary.mean_source_size == doctest::Approx(38.0).epsilon(0.01));
    CHECK(summary.mean_target_size == doctest::Approx(58.0).epsilon(0.01));
    CHECK(summary.multi_commit_fraction == doctest::Approx(387.0 / 811.0).epsilon(1e-9));
    CHECK(summary.three_plus_commit_fraction == doctest::Approx(213.0 / 811.0).epsilon(1e-9));
    CHECK(summary.mean_added_per_followup == 12.0);
    CHECK(summary.mean_deleted_per_followup == 7.0);
    CHECK(summary.multi_commit_fraction >= summary.three_plus_commit_fraction);

    int histogram_total = 0;
    for (int count : summary.source_size_histogram)
        histogram_total += count;
    CHECK(histogram_total == 811);
}

TEST_CASE("records round-trip through JSON Lines") {
    const auto record = extract_record(fixture_history(), fixture_blobs());
    REQUIRE(record.has_value());
    const auto path =
        (std::filesystem::temp_directory_path() / "ciporter-records-test.jsonl").string();
    write_records_jsonl(path, {*record});
    const auto loaded = load_records_jsonl(path);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].id == record->id);
    CHECK(loaded[0].source_text == record->source_text);
    CHECK(loaded[0].target_text == record->target_text);
    CHECK(loaded[0].follow_up_commits.size() == 2);
    CHECK(loaded[0].follow_up_commits[1].file_changes.size() == 1);
    std::filesystem::remove(path);
}

TEST_CASE("count_raw_lines counts blanks and comments") {
    CHECK(count_raw_lines("") == 0);
    CHECK(count_raw_lines("a") == 1);
    CHECK(count_raw_lines("a\n") == 1);
    CHECK(count_raw_lines("a\n\n# c\n") == 3);
}
