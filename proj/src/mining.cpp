#include "ciporter/mining.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace ciporter {

namespace {

using nlohmann::json;

constexpr std::string_view kWorkflowDir = ".github/workflows/";
constexpr std::string_view kTravisFile = ".travis.yml";

bool under_workflow_dir(std::string_view path) {
    return path.starts_with(kWorkflowDir) && path.size() > kWorkflowDir.size();
}

}  // namespace

std::string_view to_string_view(ChangeKind kind) {
    switch (kind) {
        case ChangeKind::Added: return "added";
        case ChangeKind::Removed: return "removed";
        case ChangeKind::Modified: return "modified";
    }
    return "unknown";
}

std::optional<ChangeKind> change_kind_from_name(std::string_view name) {
    if (name == "added")
        return ChangeKind::Added;
    if (name == "removed")
        return ChangeKind::Removed;
    if (name == "modified")
        return ChangeKind::Modified;
    return std::nullopt;
}

DirectoryBlobLookup::DirectoryBlobLookup(std::string directory)
    : directory_(std::move(directory)) {}

std::string DirectoryBlobLookup::get(const std::string& blob_ref) const {
    const auto path = std::filesystem::path(directory_) / blob_ref;
    std::ifstream in(path);
    if (!in)
        throw MiningError("missing blob content: " + blob_ref + " under " + directory_);
    std::ostringstream content;
    content << in.rdbuf();
    return content.str();
}

bool is_migration_commit(std::string_view message) {
    static const std::regex pattern(
        R"(migrate.*travis|move.*travis|replace.*travis|switch.*travis)",
        std::regex::icase | std::regex::optimize);
    return std::regex_search(message.begin(), message.end(), pattern);
}

std::optional<TranslationRecord> extract_record(const std::vector<CommitInfo>& history,
                                                const BlobLookup& blobs) {
    // The repository must have carried a .travis.yml at some point.
    std::string travis_blob;  // latest content before the migration commit
    bool saw_travis = false;

    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& commit = history[i];
        for (const auto& change : commit.file_changes) {
            if (change.path == kTravisFile) {
                saw_travis = true;
                if (!change.blob_ref.empty())
                    travis_blob = change.blob_ref;
            }
        }
        if (!is_migration_commit(commit.message))
            continue;

        std::vector<const FileChange*> added_workflows;
        for (const auto& change : commit.file_changes) {
            if (change.kind == ChangeKind::Added && under_workflow_dir(change.path))
                added_workflows.push_back(&change);
        }
        if (added_workflows.empty())
            continue;  // message matched but nothing was migrated here
        if (added_workflows.size() > 1)
            return std::nullopt;  // one-to-many translation, out of scope
        if (!saw_travis || travis_blob.empty())
            return std::nullopt;

        const auto& workflow = *added_workflows.front();
        TranslationRecord record;
        record.id = commit.sha;
        record.migration_commit = commit.sha;
        record.source_text = blobs.get(travis_blob);

        std::string target_blob = workflow.blob_ref;
        for (std::size_t j = i + 1; j < history.size(); ++j) {
            for (const auto& change : history[j].file_changes) {
                if (change.path != workflow.path)
                    continue;
                record.follow_up_commits.push_back(history[j]);
                if (!change.blob_ref.empty())
                    target_blob = change.blob_ref;
                break;
            }
        }
        if (target_blob.empty())
            throw MiningError("migration commit " + commit.sha + " lists " + workflow.path +
                              " without blob content");
        record.target_text = blobs.get(target_blob);
        return record;
    }
    return std::nullopt;
}

int count_raw_lines(std::string_view text) {
    if (text.empty())
        return 0;
    int lines = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
    if (text.back() != '\n')
        ++lines;
    return lines;
}

EffortReport effort_metrics(const TranslationRecord& record) {
    EffortReport report;
    report.source_size = count_raw_lines(record.source_text);
    report.target_size = count_raw_lines(record.target_text);
    report.attempts = 1 + static_cast<int>(record.follow_up_commits.size());
    for (const auto& commit : record.follow_up_commits) {
        int added = 0;
        int deleted = 0;
        for (const auto& change : commit.file_changes) {
            added += change.lines_added;
            deleted += change.lines_deleted;
        }
        report.change_sizes.emplace_back(added, deleted);
    }
    return report;
}

EffortSummary aggregate_effort(const std::vector<EffortReport>& reports) {
    if (reports.empty())
        throw MiningError("no effort reports to aggregate");

    EffortSummary summary;
    summary.record_count = static_cast<int>(reports.size());
    summary.source_size_histogram.assign(5, 0);
    summary.target_size_histogram.assign(5, 0);

    auto bucket = [](int size) {
        if (size <= 30)
            return 0;
        if (size <= 60)
            return 1;
        if (size <= 90)
            return 2;
        if (size <= 120)
            return 3;
        return 4;
    };

    double source_sum = 0.0;
    double target_sum = 0.0;
    int multi = 0;
    int three_plus = 0;
    long added_sum = 0;
    long deleted_sum = 0;
    long followups = 0;
    for (const auto& report : reports) {
        source_sum += report.source_size;
        target_sum += report.target_size;
        ++summary.source_size_histogram[static_cast<std::size_t>(bucket(report.source_size))];
        ++summary.target_size_histogram[static_cast<std::size_t>(bucket(report.target_size))];
        if (report.attempts >= 2)
            ++multi;
        if (report.attempts >= 3)
            ++three_plus;
        for (const auto& [added, deleted] : report.change_sizes) {
            added_sum += added;
            deleted_sum += deleted;
            ++followups;
        }
    }
    const auto n = static_cast<double>(reports.size());
    summary.mean_source_size = source_sum / n;
    summary.mean_target_size = target_sum / n;
    summary.multi_commit_fraction = static_cast<double>(multi) / n;
    summary.three_plus_commit_fraction = static_cast<double>(three_plus) / n;
    if (followups > 0) {
        summary.mean_added_per_followup =
            static_cast<double>(added_sum) / static_cast<double>(followups);
        summary.mean_deleted_per_followup =
            static_cast<double>(deleted_sum) / static_cast<double>(followups);
    }
    return summary;
}

// ---------------------------------------------------------------------------
// JSON Lines I/O
// ---------------------------------------------------------------------------

namespace {

CommitInfo commit_from_json(const json& doc) {
    CommitInfo commit;
    commit.sha = doc.value("sha", "");
    commit.message = doc.value("message", "");
    commit.timestamp = doc.value("timestamp", std::int64_t{0});
    if (doc.contains("files")) {
        for (const auto& file : doc["files"]) {
            FileChange change;
            change.path = file.value("path", "");
            change.kind =
                change_kind_from_name(file.value("kind", "modified")).value_or(ChangeKind::Modified);
            change.lines_added = file.value("added", 0);
            change.lines_deleted = file.value("deleted", 0);
            change.blob_ref = file.value("blob_ref", "");
            commit.file_changes.push_back(std::move(change));
        }
    }
    return commit;
}

json commit_to_json(const CommitInfo& commit) {
    json files = json::array();
    for (const auto& change : commit.file_changes) {
        files.push_back({{"path", change.path},
                         {"kind", std::string(to_string_view(change.kind))},
                         {"added", change.lines_added},
                         {"deleted", change.lines_deleted},
                         {"blob_ref", change.blob_ref}});
    }
    return json{{"sha", commit.sha},
                {"message", commit.message},
                {"timestamp", commit.timestamp},
                {"files", std::move(files)}};
}

}  // namespace

std::vector<CommitInfo> load_history_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw MiningError("cannot open history file: " + path);
    std::vector<CommitInfo> history;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        history.push_back(commit_from_json(json::parse(line)));
    }
    return history;
}

std::vector<TranslationRecord> load_records_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw MiningError("cannot open records file: " + path);
    std::vector<TranslationRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto doc = json::parse(line);
        TranslationRecord record;
        record.id = doc.value("id", "");
        record.source_text = doc.value("source_text", "");
        record.target_text = doc.value("target_text", "");
        record.migration_commit = doc.value("migration_commit", "");
        if (doc.contains("follow_up_commits")) {
            for (const auto& commit : doc["follow_up_commits"])
                record.follow_up_commits.push_back(commit_from_json(commit));
        }
        records.push_back(std::move(record));
    }
    return records;
}

void write_records_jsonl(const std::string& path,
                         const std::vector<TranslationRecord>& records) {
    std::ofstream out(path);
    if (!out)
        throw MiningError("cannot write records file: " + path);
    for (const auto& record : records) {
        json followups = json::array();
        for (const auto& commit : record.follow_up_commits)
            followups.push_back(commit_to_json(commit));
        const json doc{{"id", record.id},
                       {"source_text", record.source_text},
                       {"target_text", record.target_text},
                       {"migration_commit", record.migration_commit},
                       {"follow_up_commits", std::move(followups)}};
        out << doc.dump() << "\n";
    }
}

}  // namespace ciporter
