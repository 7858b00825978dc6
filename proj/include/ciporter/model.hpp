#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ciporter {

/// One scalar from a version axis, kept exactly as spelled in the source.
/// Numeric reinterpretation (3.10 -> 3.1) must never happen inside the model.
struct VersionLiteral {
    std::string raw_text;
    bool quoted = false;

    // Unquoted values like 3.10 collapse to 3.1 under YAML number parsing.
    bool trailing_zero_hazard() const;

    bool operator==(const VersionLiteral&) const = default;
};

enum class EnvOrigin {
    AssignmentString,  // source wrote KEY=VAL
    KeyValue,          // source wrote KEY: VAL
};

struct EnvEntry {
    std::string name;   // non-empty, contains no '='
    std::string value;
    EnvOrigin origin_form = EnvOrigin::KeyValue;

    bool operator==(const EnvEntry&) const = default;
};

/// One shell command line plus its whitespace-normalized form.
struct Command {
    std::string text;
    std::string normalized;

    bool operator==(const Command&) const = default;
};

// Travis lifecycle phases, in execution order.
inline constexpr std::string_view kPhaseNames[] = {
    "before_install", "install", "before_script", "script",
    "after_success",  "after_failure", "after_script",
    "before_deploy",  "deploy",
};

bool is_phase_name(std::string_view key);

struct StageJob {
    std::string name;  // may be empty
    std::vector<Command> script;

    bool operator==(const StageJob&) const = default;
};

struct StageDef {
    std::string name;
    std::vector<StageJob> jobs;

    bool operator==(const StageDef&) const = default;
};

struct CacheSpec {
    std::vector<std::string> kinds;        // e.g. "pip"
    std::vector<std::string> directories;

    bool operator==(const CacheSpec&) const = default;
};

struct BranchFilter {
    std::vector<std::string> include;  // branches: only:
    std::vector<std::string> exclude;  // branches: except:

    bool operator==(const BranchFilter&) const = default;
};

// include/exclude entry: ordered axis -> value pairs, values kept as spelled.
using MatrixEntry = std::vector<std::pair<std::string, VersionLiteral>>;

struct MatrixExtras {
    std::vector<MatrixEntry> include;
    std::vector<MatrixEntry> exclude;
    bool fast_finish = false;
    bool fast_finish_set = false;

    bool operator==(const MatrixExtras&) const = default;
};

/// Typed model of a .travis.yml document. Immutable after construction.
/// Every top-level source key lands in exactly one named field or in
/// raw_extras; nothing is silently dropped.
struct TravisConfig {
    std::string language;
    std::string version_key;  // source key of the version axis ("python", "node_js", ...)
    std::vector<VersionLiteral> versions;
    std::vector<std::string> os_list;
    std::vector<std::string> arch_list;
    std::vector<EnvEntry> global_env;
    std::optional<std::string> env_matrix_raw;  // unhandled env.matrix subtree, re-emitted YAML
    std::vector<std::pair<std::string, std::vector<Command>>> phases;  // document order
    std::vector<StageDef> stages;
    std::optional<CacheSpec> cache;
    std::optional<std::string> notifications;  // opaque subtree, re-emitted YAML
    std::optional<BranchFilter> branch_filter;
    MatrixExtras matrix_extras;
    std::vector<std::pair<std::string, std::string>> raw_extras;  // key -> re-emitted YAML
    std::vector<std::string> source_keys;  // every top-level key, document order

    const std::vector<Command>* phase(std::string_view name) const;
    std::vector<Command> all_commands() const;  // every phase + stage script command
};

// ---------------------------------------------------------------------------
// GitHub Actions workflow model
// ---------------------------------------------------------------------------

struct EventFilter {
    std::vector<std::string> branches;
    std::vector<std::string> branches_ignore;
    std::vector<std::string> tags;
    std::vector<std::string> paths;

    bool empty() const {
        return branches.empty() && branches_ignore.empty() && tags.empty() && paths.empty();
    }
    bool operator==(const EventFilter&) const = default;
};

struct Trigger {
    std::string event;
    std::optional<EventFilter> filter;

    bool operator==(const Trigger&) const = default;
};

struct ActionRef {
    std::string owner_repo;  // "actions/checkout"
    std::string version;     // "v4"

    std::string spec() const { return owner_repo + "@" + version; }
    bool operator==(const ActionRef&) const = default;
};

ActionRef parse_action_ref(std::string_view spec);

enum class StepKind { Uses, Run };

struct Step {
    std::optional<std::string> name;
    StepKind kind = StepKind::Run;
    std::optional<ActionRef> uses_ref;   // set iff kind == Uses
    std::optional<Command> run_command;  // set iff kind == Run; multi-line blocks keep '\n'
    std::vector<std::pair<std::string, std::string>> with_args;
    std::vector<std::pair<std::string, std::string>> env;
    std::optional<std::string> condition;  // if: expression, kept verbatim

    bool operator==(const Step&) const = default;
};

struct Matrix {
    std::vector<std::pair<std::string, std::vector<VersionLiteral>>> axes;
    std::vector<MatrixEntry> include;
    std::vector<MatrixEntry> exclude;
    std::optional<bool> fail_fast;

    bool empty() const { return axes.empty() && include.empty() && exclude.empty() && !fail_fast; }
    const std::vector<VersionLiteral>* axis(std::string_view name) const;
    bool operator==(const Matrix&) const = default;
};

struct Job {
    std::string runs_on;
    std::vector<std::string> needs;
    std::optional<Matrix> strategy_matrix;
    std::vector<std::pair<std::string, std::string>> env;
    std::vector<Step> steps;  // non-empty for any valid job

    bool operator==(const Job&) const = default;
};

struct Workflow {
    std::optional<std::string> name;
    std::vector<Trigger> triggers;
    std::vector<std::pair<std::string, Job>> jobs;  // ordered, unique ids

    const Job* job(std::string_view id) const;
    bool operator==(const Workflow&) const = default;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Collapses internal whitespace runs and trims; idempotent.
/// Returns nullopt for input that is blank after trimming (caller drops it).
std::optional<Command> normalize_command(std::string_view raw);

/// Splits a multi-line run block into one Command per non-blank line.
std::vector<Command> split_run_commands(std::string_view block);

/// The version axis for config.language, in source order; empty when the
/// document declared no axis.
std::vector<VersionLiteral> version_axis_values(const TravisConfig& config);

/// Equality modulo renderer canonicalization: raw_text must match exactly,
/// quoting may differ only where the renderer forces quotes (trailing-zero
/// hazards). Used by the render/parse round-trip contract.
bool structurally_equal(const VersionLiteral& a, const VersionLiteral& b);
bool structurally_equal(const Matrix& a, const Matrix& b);
bool structurally_equal(const Job& a, const Job& b);
bool structurally_equal(const Workflow& a, const Workflow& b);

}  // namespace ciporter
