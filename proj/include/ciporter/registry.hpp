#pragma once

#include "ciporter/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ciporter {

struct RegistryEntry {
    std::string purpose;  // "checkout", "setup-python", "cache", ...
    ActionRef action;     // current version to emit
    std::string minimum;  // obsolescence floor: references below it are stale
};

/// Purpose -> action mapping with version floors. Read-only after load.
class ActionRegistry {
public:
    static ActionRegistry built_in();

    /// Loads a registry file (purpose -> {action, version, minimum}).
    /// Throws when an entry's version sits below its own minimum.
    static ActionRegistry load_file(const std::string& path);

    const RegistryEntry* find_purpose(std::string_view purpose) const;
    const RegistryEntry* find_action(std::string_view owner_repo) const;

    /// The setup entry for a Travis language ("python" -> setup-python),
    /// or nullptr when the language has no registered setup action.
    const RegistryEntry* setup_for_language(std::string_view language) const;

    const std::vector<RegistryEntry>& entries() const { return entries_; }

private:
    std::vector<RegistryEntry> entries_;
};

/// "node_js" -> "node"; used for axis names and setup purposes.
std::string language_slug(std::string_view language);

/// Tool name -> install command, ordered. Tool matching is prefix-based on
/// the command's first token ("nose" matches "nosetests").
using PackageTable = std::vector<std::pair<std::string, std::string>>;

PackageTable built_in_package_table();
PackageTable load_package_table(const std::string& path);

/// A tool that needs credentials; satisfied by any listed env name or by
/// any secrets-context reference on the invoking step.
struct CredentialRule {
    std::string tool;
    std::vector<std::string> env_names;
};

using CredentialsTable = std::vector<CredentialRule>;

CredentialsTable built_in_credentials();
CredentialsTable load_credentials(const std::string& path);

/// Leading "v" plus dotted numbers -> components; nullopt for shas/branches.
std::optional<std::vector<int>> parse_version_numbers(std::string_view version);

/// True when both sides parse numerically and version < minimum.
bool version_below(std::string_view version, std::string_view minimum);

}  // namespace ciporter
