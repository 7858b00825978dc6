#pragma once

#include "ciporter/model.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ciporter {

struct ParseError {
    int line = 1;  // 1-based
    int column = 0;
    std::string message;
};

class ParseFailure : public std::runtime_error {
public:
    explicit ParseFailure(ParseError err)
        : std::runtime_error(err.message), err_(std::move(err)) {}

    const ParseError& error() const { return err_; }

private:
    ParseError err_;
};

class RenderFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The four syntax issue types.
enum class SyntaxType {
    MissingSymbol,
    IndentationError,
    MissingOrMisplacedDefinition,
    InvalidValue,
};

std::string_view to_string_view(SyntaxType type);

struct SyntaxFinding {
    SyntaxType subtype = SyntaxType::MissingSymbol;
    int line = 1;  // 1-based, always inside the input text
    std::optional<int> column;
    std::string message;
};

/// Parses a .travis.yml document. Version spellings are preserved verbatim.
/// Throws ParseFailure on malformed YAML or an empty document.
TravisConfig parse_travis(std::string_view text);

/// Parses a GitHub Actions workflow leniently: `${{ }}` expressions stay
/// verbatim and semantic defects are left for check_syntax/lint to report.
/// Throws ParseFailure on malformed YAML or when the document has no `jobs`.
Workflow parse_workflow(std::string_view text);

/// Deterministic rendering: 2-space indent, fixed key order (name, on, jobs;
/// runs-on, needs, strategy, env, steps within a job). Trailing-zero version
/// literals are always emitted quoted. Throws RenderFailure when wf violates
/// the workflow invariants.
std::string render_workflow(const Workflow& wf);

/// Classifies syntactic defects in a candidate workflow text. Unparseable
/// input yields at least one finding; output of render_workflow yields none.
std::vector<SyntaxFinding> check_syntax(std::string_view text);

/// 1-based line of the first occurrence of needle, or 0 when absent.
int find_line(std::string_view text, std::string_view needle);

/// The content of the given 1-based line, trimmed.
std::string line_at(std::string_view text, int line);

}  // namespace ciporter
