#include "ciporter/registry.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <stdexcept>

namespace ciporter {

ActionRegistry ActionRegistry::built_in() {
    ActionRegistry registry;
    registry.entries_ = {
        {"checkout", {"actions/checkout", "v4"}, "v3"},
        {"setup-python", {"actions/setup-python", "v5"}, "v4"},
        {"setup-node", {"actions/setup-node", "v4"}, "v3"},
        {"setup-java", {"actions/setup-java", "v4"}, "v3"},
        {"setup-go", {"actions/setup-go", "v5"}, "v4"},
        {"setup-ruby", {"ruby/setup-ruby", "v1"}, "v1"},
        {"cache", {"actions/cache", "v4"}, "v3"},
    };
    return registry;
}

ActionRegistry ActionRegistry::load_file(const std::string& path) {
    YAML::Node doc = YAML::LoadFile(path);
    if (!doc.IsMap())
        throw std::runtime_error("registry file must be a mapping: " + path);
    ActionRegistry registry;
    for (const auto& kv : doc) {
        RegistryEntry entry;
        entry.purpose = kv.first.Scalar();
        const auto& body = kv.second;
        if (!body.IsMap() || !body["action"] || !body["version"])
            throw std::runtime_error("registry entry '" + entry.purpose +
                                     "' needs action and version");
        entry.action.owner_repo = body["action"].Scalar();
        entry.action.version = body["version"].Scalar();
        entry.minimum = body["minimum"] ? body["minimum"].Scalar() : entry.action.version;
        if (version_below(entry.action.version, entry.minimum))
            throw std::runtime_error("registry entry '" + entry.purpose + "' version " +
                                     entry.action.version + " is below its minimum " +
                                     entry.minimum);
        registry.entries_.push_back(std::move(entry));
    }
    return registry;
}

const RegistryEntry* ActionRegistry::find_purpose(std::string_view purpose) const {
    for (const auto& entry : entries_) {
        if (entry.purpose == purpose)
            return &entry;
    }
    return nullptr;
}

const RegistryEntry* ActionRegistry::find_action(std::string_view owner_repo) const {
    for (const auto& entry : entries_) {
        if (entry.action.owner_repo == owner_repo)
            return &entry;
    }
    return nullptr;
}

const RegistryEntry* ActionRegistry::setup_for_language(std::string_view language) const {
    return find_purpose("setup-" + language_slug(language));
}

std::string language_slug(std::string_view language) {
    if (language == "node_js" || language == "nodejs")
        return "node";
    std::string slug;
    for (char c : language)
        slug.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(
                                            static_cast<unsigned char>(c))));
    return slug;
}

PackageTable built_in_package_table() {
    return {
        {"nose", "pip install nose"},
    };
}

PackageTable load_package_table(const std::string& path) {
    YAML::Node doc = YAML::LoadFile(path);
    if (!doc.IsMap())
        throw std::runtime_error("package table must be a mapping: " + path);
    PackageTable table;
    for (const auto& kv : doc)
        table.emplace_back(kv.first.Scalar(), kv.second.Scalar());
    return table;
}

CredentialsTable built_in_credentials() {
    return {
        {"coveralls", {"COVERALLS_REPO_TOKEN", "GITHUB_TOKEN"}},
        {"codecov", {"CODECOV_TOKEN"}},
    };
}

CredentialsTable load_credentials(const std::string& path) {
    YAML::Node doc = YAML::LoadFile(path);
    if (!doc.IsMap())
        throw std::runtime_error("credentials table must be a mapping: " + path);
    CredentialsTable table;
    for (const auto& kv : doc) {
        CredentialRule rule;
        rule.tool = kv.first.Scalar();
        if (kv.second.IsMap() && kv.second["env"]) {
            for (const auto& name : kv.second["env"])
                rule.env_names.push_back(name.Scalar());
        } else if (kv.second.IsSequence()) {
            for (const auto& name : kv.second)
                rule.env_names.push_back(name.Scalar());
        } else if (kv.second.IsScalar()) {
            rule.env_names.push_back(kv.second.Scalar());
        }
        table.push_back(std::move(rule));
    }
    return table;
}

std::optional<std::vector<int>> parse_version_numbers(std::string_view version) {
    std::string_view rest = version;
    if (!rest.empty() && (rest.front() == 'v' || rest.front() == 'V'))
        rest.remove_prefix(1);
    if (rest.empty() || !std::isdigit(static_cast<unsigned char>(rest.front())))
        return std::nullopt;
    std::vector<int> numbers;
    int current = 0;
    bool in_number = false;
    for (char c : rest) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            current = current * 10 + (c - '0');
            in_number = true;
        } else if (c == '.' && in_number) {
            numbers.push_back(current);
            current = 0;
            in_number = false;
        } else {
            return std::nullopt;  // sha, branch name, or range
        }
    }
    if (in_number)
        numbers.push_back(current);
    return numbers;
}

bool version_below(std::string_view version, std::string_view minimum) {
    auto lhs = parse_version_numbers(version);
    auto rhs = parse_version_numbers(minimum);
    if (!lhs || !rhs)
        return false;
    return std::lexicographical_compare(lhs->begin(), lhs->end(), rhs->begin(), rhs->end());
}

}  // namespace ciporter
