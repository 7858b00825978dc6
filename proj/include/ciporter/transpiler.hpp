#pragma once

#include "ciporter/model.hpp"
#include "ciporter/registry.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ciporter {

struct TranspileOptions {
    std::string default_runner = "ubuntu-latest";
    std::vector<std::string> default_triggers = {"push", "pull_request"};
    ActionRegistry action_registry = ActionRegistry::built_in();
    bool strict_arch = false;  // fail instead of warn on unsupported architectures
};

enum class WarningCode {
    DroppedNotifications,
    DroppedUnknownKey,
    SkippedArch,
    ImplicitDefaultAdded,
    PackageInjected,
};

std::string_view to_string_view(WarningCode code);

struct TranspileWarning {
    WarningCode code;
    std::string detail;
    std::string source_path;  // document path of the origin, e.g. "notifications"
};

class TranspileFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TranspileResult {
    Workflow workflow;
    std::vector<TranspileWarning> warnings;
};

/// Rule-based Travis -> GitHub Actions translation. The output always passes
/// check_syntax cleanly; every dropped or added element is justified by
/// exactly one warning.
TranspileResult transpile(const TravisConfig& config, const TranspileOptions& opts);

/// One entry per input name; assignment strings become key-value pairs.
/// Duplicate names resolve last-wins with a warning.
std::vector<std::pair<std::string, std::string>> map_env(
    const std::vector<EnvEntry>& entries, std::vector<TranspileWarning>* warnings = nullptr);

/// Axes: <language>-version, os (runner labels), arch (filtered to x64/arm64).
/// Travis fast_finish: true maps to fail-fast: false (opposite polarity: the
/// Travis flag lets remaining jobs keep running, which is what GHA expresses
/// as fail-fast: false).
Matrix map_matrix(const TravisConfig& config, const TranspileOptions& opts,
                  std::vector<TranspileWarning>* warnings = nullptr);

/// Stage order S1..Sk yields one job per stage where each job in S(i+1)
/// needs every job id of S(i); no stages yields [("build", [])].
/// Throws on duplicate stage names.
std::vector<std::pair<std::string, std::vector<std::string>>> map_stages(
    const TravisConfig& config);

/// Ensures each job starts with checkout, then the language setup bound to
/// the matrix axis, and carries a cache step before install commands when the
/// source declared one. Idempotent.
Workflow materialize_defaults(Workflow wf, const TravisConfig& config,
                              const TranspileOptions& opts,
                              std::vector<TranspileWarning>* warnings = nullptr);

/// Inserts an install step before the first use of any table tool that no
/// earlier step installs.
TranspileResult inject_known_packages(Workflow wf, const TravisConfig& config,
                                      const PackageTable& table);

}  // namespace ciporter
