#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ciporter {

enum class BuildStatus { Success, Failure };

struct BuildOutcome {
    std::string case_id;
    BuildStatus status = BuildStatus::Failure;
    std::vector<std::string> messages;  // non-empty on failure
};

class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Term-frequency vector; zero-count entries are never stored.
struct TokenVector {
    std::map<std::string, int> counts;

    bool empty() const { return counts.empty(); }
};

using Tokens = std::vector<std::string>;
using Ngram = std::vector<std::string>;

/// The k most frequent n-grams per order 1..n_max across a corpus, unioned.
/// These are the boilerplate excluded from CrystalBLEU scoring.
struct SharedNgramSet {
    int n_max = 4;
    int k = 500;
    std::set<Ngram> ngrams;
};

/// successes / total. Throws MetricError on empty input.
double build_success_rate(const std::vector<BuildOutcome>& outcomes);

/// Rounds to 3 decimals, the precision BSR is reported at.
double round3(double value);

/// Whitespace split, then strip leading/trailing characters from
/// {: , " ' [ ] { } -} — except a leading '-', so command-line flags keep
/// their dashes. Purely-punctuation tokens are kept verbatim.
Tokens tokenize(std::string_view text);

TokenVector term_frequencies(const Tokens& tokens);

/// (a . b) / (|a| |b|). Throws MetricError when either vector is empty.
double cosine_similarity(const TokenVector& a, const TokenVector& b);

/// Ties between equally frequent n-grams break lexicographically.
SharedNgramSet trivially_shared_ngrams(const std::vector<Tokens>& corpus, int n_max = 4,
                                       int k = 500);

/// BLEU over orders 1..shared.n_max with uniform weights and the standard
/// brevity penalty, with every shared n-gram removed from both sides before
/// the clipped-precision counts. Zero-match and zero-survivor orders use the
/// 1e-9 precision floor.
double crystal_bleu(const Tokens& candidate, const Tokens& reference,
                    const SharedNgramSet& shared);

/// Median of the values (mean of the middle two for even sizes).
/// Throws MetricError on empty input.
double median(std::vector<double> values);

}  // namespace ciporter
