#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ciporter {

enum class ChangeKind { Added, Removed, Modified };

std::string_view to_string_view(ChangeKind kind);
std::optional<ChangeKind> change_kind_from_name(std::string_view name);

struct FileChange {
    std::string path;
    ChangeKind kind = ChangeKind::Modified;
    int lines_added = 0;
    int lines_deleted = 0;
    std::string blob_ref;  // content key for added/modified; pre-removal content for removed
};

struct CommitInfo {
    std::string sha;
    std::string message;
    std::int64_t timestamp = 0;  // epoch seconds
    std::vector<FileChange> file_changes;
};

/// One source Travis configuration and the single workflow file that
/// replaced it, plus the commits that later touched that workflow.
struct TranslationRecord {
    std::string id;
    std::string source_text;
    std::string target_text;
    std::string migration_commit;
    std::vector<CommitInfo> follow_up_commits;
};

struct EffortReport {
    int source_size = 0;  // raw line counts, blanks and comments included
    int target_size = 0;
    int attempts = 1;  // 1 + follow-up commits
    std::vector<std::pair<int, int>> change_sizes;  // (added, deleted) per follow-up
};

struct EffortSummary {
    int record_count = 0;
    double mean_source_size = 0.0;
    double mean_target_size = 0.0;
    double multi_commit_fraction = 0.0;     // attempts >= 2
    double three_plus_commit_fraction = 0.0;  // attempts >= 3
    double mean_added_per_followup = 0.0;
    double mean_deleted_per_followup = 0.0;
    // Interval histograms over configuration sizes: 1-30, 31-60, 61-90,
    // 91-120, >120.
    std::vector<int> source_size_histogram;
    std::vector<int> target_size_histogram;
};

class MiningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Content lookup by blob reference. Implementations must be safe for
/// concurrent reads; only the directory-backed one ships.
class BlobLookup {
public:
    virtual ~BlobLookup() = default;
    virtual std::string get(const std::string& blob_ref) const = 0;
};

class DirectoryBlobLookup : public BlobLookup {
public:
    explicit DirectoryBlobLookup(std::string directory);
    std::string get(const std::string& blob_ref) const override;

private:
    std::string directory_;
};

/// Case-insensitive match of migrate/move/replace/switch followed by travis.
/// Order matters: "travis ... migrate" alone does not match.
bool is_migration_commit(std::string_view message);

/// Extracts the one-to-one record from a chronological history: the first
/// migration-message commit that adds exactly one workflow file, in a
/// repository that carried a .travis.yml. target_text is the workflow
/// content at the last follow-up commit. Returns nothing when the
/// one-to-one constraint fails.
std::optional<TranslationRecord> extract_record(const std::vector<CommitInfo>& history,
                                                const BlobLookup& blobs);

EffortReport effort_metrics(const TranslationRecord& record);

/// Means, multi-commit fractions, and Fig.-style interval histograms.
/// Throws MiningError on empty input.
EffortSummary aggregate_effort(const std::vector<EffortReport>& reports);

/// JSON Lines I/O for history fixtures and extracted records.
std::vector<CommitInfo> load_history_jsonl(const std::string& path);
std::vector<TranslationRecord> load_records_jsonl(const std::string& path);
void write_records_jsonl(const std::string& path, const std::vector<TranslationRecord>& records);

int count_raw_lines(std::string_view text);

}  // namespace ciporter
