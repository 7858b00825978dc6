#include "ciporter/model.hpp"

#include <algorithm>
#include <cctype>

namespace ciporter {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

bool VersionLiteral::trailing_zero_hazard() const {
    // /^\d+\.\d*0$/ and unquoted
    if (quoted || raw_text.size() < 3)
        return false;
    std::size_t i = 0;
    while (i < raw_text.size() && std::isdigit(static_cast<unsigned char>(raw_text[i])))
        ++i;
    if (i == 0 || i >= raw_text.size() || raw_text[i] != '.')
        return false;
    for (std::size_t j = i + 1; j < raw_text.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(raw_text[j])))
            return false;
    }
    return raw_text.back() == '0';
}

bool is_phase_name(std::string_view key) {
    return std::ranges::find(kPhaseNames, key) != std::end(kPhaseNames);
}

const std::vector<Command>* TravisConfig::phase(std::string_view name) const {
    for (const auto& [phase_name, commands] : phases) {
        if (phase_name == name)
            return &commands;
    }
    return nullptr;
}

std::vector<Command> TravisConfig::all_commands() const {
    std::vector<Command> out;
    for (const auto& [_, commands] : phases)
        out.insert(out.end(), commands.begin(), commands.end());
    for (const auto& stage : stages) {
        for (const auto& job : stage.jobs)
            out.insert(out.end(), job.script.begin(), job.script.end());
    }
    return out;
}

ActionRef parse_action_ref(std::string_view spec) {
    ActionRef ref;
    auto at = spec.rfind('@');
    if (at == std::string_view::npos) {
        ref.owner_repo = std::string(spec);
    } else {
        ref.owner_repo = std::string(spec.substr(0, at));
        ref.version = std::string(spec.substr(at + 1));
    }
    return ref;
}

const std::vector<VersionLiteral>* Matrix::axis(std::string_view name) const {
    for (const auto& [axis_name, values] : axes) {
        if (axis_name == name)
            return &values;
    }
    return nullptr;
}

const Job* Workflow::job(std::string_view id) const {
    for (const auto& [job_id, j] : jobs) {
        if (job_id == id)
            return &j;
    }
    return nullptr;
}

std::optional<Command> normalize_command(std::string_view raw) {
    std::string normalized;
    normalized.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_space(c)) {
            pending_space = !normalized.empty();
            continue;
        }
        if (pending_space) {
            normalized.push_back(' ');
            pending_space = false;
        }
        normalized.push_back(c);
    }
    if (normalized.empty())
        return std::nullopt;  // blank command
    return Command{std::string(raw), std::move(normalized)};
}

std::vector<Command> split_run_commands(std::string_view block) {
    std::vector<Command> out;
    std::size_t start = 0;
    while (start <= block.size()) {
        auto end = block.find('\n', start);
        auto line = block.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                      : end - start);
        if (auto cmd = normalize_command(line))
            out.push_back(std::move(*cmd));
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    return out;
}

std::vector<VersionLiteral> version_axis_values(const TravisConfig& config) {
    return config.versions;
}

bool structurally_equal(const VersionLiteral& a, const VersionLiteral& b) {
    if (a.raw_text != b.raw_text)
        return false;
    auto canonical_quoted = [](const VersionLiteral& v) {
        return v.quoted || VersionLiteral{v.raw_text, false}.trailing_zero_hazard();
    };
    return canonical_quoted(a) == canonical_quoted(b);
}

namespace {

bool axes_equal(const std::vector<std::pair<std::string, std::vector<VersionLiteral>>>& a,
                const std::vector<std::pair<std::string, std::vector<VersionLiteral>>>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].first != b[i].first || a[i].second.size() != b[i].second.size())
            return false;
        for (std::size_t j = 0; j < a[i].second.size(); ++j) {
            if (!structurally_equal(a[i].second[j], b[i].second[j]))
                return false;
        }
    }
    return true;
}

bool entries_equal(const std::vector<MatrixEntry>& a, const std::vector<MatrixEntry>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size())
            return false;
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            if (a[i][j].first != b[i][j].first ||
                !structurally_equal(a[i][j].second, b[i][j].second))
                return false;
        }
    }
    return true;
}

}  // namespace

bool structurally_equal(const Matrix& a, const Matrix& b) {
    return axes_equal(a.axes, b.axes) && entries_equal(a.include, b.include) &&
           entries_equal(a.exclude, b.exclude) && a.fail_fast == b.fail_fast;
}

bool structurally_equal(const Job& a, const Job& b) {
    if (a.runs_on != b.runs_on || a.needs != b.needs || a.env != b.env || a.steps != b.steps)
        return false;
    if (a.strategy_matrix.has_value() != b.strategy_matrix.has_value())
        return false;
    return !a.strategy_matrix || structurally_equal(*a.strategy_matrix, *b.strategy_matrix);
}

bool structurally_equal(const Workflow& a, const Workflow& b) {
    if (a.name != b.name || a.triggers != b.triggers || a.jobs.size() != b.jobs.size())
        return false;
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        if (a.jobs[i].first != b.jobs[i].first ||
            !structurally_equal(a.jobs[i].second, b.jobs[i].second))
            return false;
    }
    return true;
}

}  // namespace ciporter
