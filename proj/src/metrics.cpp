#include "ciporter/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>

namespace ciporter {

double build_success_rate(const std::vector<BuildOutcome>& outcomes) {
    if (outcomes.empty())
        throw MetricError("build success rate is undefined for an empty outcome set");
    const auto successes = std::ranges::count_if(outcomes, [](const BuildOutcome& o) {
        return o.status == BuildStatus::Success;
    });
    return static_cast<double>(successes) / static_cast<double>(outcomes.size());
}

double round3(double value) {
    return std::round(value * 1000.0) / 1000.0;
}

namespace {

bool strippable(char c) {
    return std::strchr(":,\"'[]{}-", c) != nullptr;
}

bool purely_punctuation(std::string_view token) {
    return std::ranges::all_of(token, strippable);
}

}  // namespace

Tokens tokenize(std::string_view text) {
    Tokens tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        auto end = pos;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])))
            ++end;
        if (end == pos)
            break;
        std::string_view token = text.substr(pos, end - pos);
        pos = end;
        if (!purely_punctuation(token)) {
            // Leading '-' survives so flags like -m keep their spelling.
            while (!token.empty() && strippable(token.front()) && token.front() != '-')
                token.remove_prefix(1);
            while (!token.empty() && strippable(token.back()))
                token.remove_suffix(1);
        }
        if (!token.empty())
            tokens.emplace_back(token);
    }
    return tokens;
}

TokenVector term_frequencies(const Tokens& tokens) {
    TokenVector vec;
    for (const auto& token : tokens)
        ++vec.counts[token];
    return vec;
}

double cosine_similarity(const TokenVector& a, const TokenVector& b) {
    if (a.empty() || b.empty())
        throw MetricError("cosine similarity is undefined for a zero vector");
    double dot = 0.0;
    for (const auto& [token, count] : a.counts) {
        auto it = b.counts.find(token);
        if (it != b.counts.end())
            dot += static_cast<double>(count) * static_cast<double>(it->second);
    }
    auto norm = [](const TokenVector& v) {
        double sum = 0.0;
        for (const auto& [_, count] : v.counts)
            sum += static_cast<double>(count) * static_cast<double>(count);
        return std::sqrt(sum);
    };
    return dot / (norm(a) * norm(b));
}

namespace {

std::map<Ngram, long> count_ngrams(const Tokens& tokens, int n) {
    std::map<Ngram, long> counts;
    if (n <= 0 || tokens.size() < static_cast<std::size_t>(n))
        return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

}  // namespace

SharedNgramSet trivially_shared_ngrams(const std::vector<Tokens>& corpus, int n_max, int k) {
    if (corpus.empty())
        throw MetricError("shared n-grams need a non-empty corpus");
    SharedNgramSet shared;
    shared.n_max = n_max;
    shared.k = k;
    if (k <= 0)
        return shared;
    for (int n = 1; n <= n_max; ++n) {
        std::map<Ngram, long> totals;
        for (const auto& tokens : corpus) {
            for (const auto& [ngram, count] : count_ngrams(tokens, n))
                totals[ngram] += count;
        }
        std::vector<std::pair<Ngram, long>> ranked(totals.begin(), totals.end());
        std::ranges::stable_sort(ranked, [](const auto& a, const auto& b) {
            if (a.second != b.second)
                return a.second > b.second;
            return a.first < b.first;  // lexicographic tie-break
        });
        const auto take = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < take; ++i)
            shared.ngrams.insert(ranked[i].first);
    }
    return shared;
}

double crystal_bleu(const Tokens& candidate, const Tokens& reference,
                    const SharedNgramSet& shared) {
    if (candidate.empty() || reference.empty())
        throw MetricError("crystal_bleu needs non-empty token sequences");

    constexpr double kFloor = 1e-9;
    const int n_max = shared.n_max;
    double log_sum = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        auto cand_counts = count_ngrams(candidate, n);
        auto ref_counts = count_ngrams(reference, n);
        for (const auto& ngram : shared.ngrams) {
            if (static_cast<int>(ngram.size()) != n)
                continue;
            cand_counts.erase(ngram);
            ref_counts.erase(ngram);
        }
        long total = 0;
        long clipped = 0;
        for (const auto& [ngram, count] : cand_counts) {
            total += count;
            auto it = ref_counts.find(ngram);
            if (it != ref_counts.end())
                clipped += std::min(count, it->second);
        }
        const double precision =
            total > 0 ? std::max(static_cast<double>(clipped) / static_cast<double>(total),
                                 kFloor)
                      : kFloor;
        log_sum += std::log(precision) / n_max;
    }

    const auto c = static_cast<double>(candidate.size());
    const auto r = static_cast<double>(reference.size());
    const double brevity = c >= r ? 1.0 : std::exp(1.0 - r / c);
    return brevity * std::exp(log_sum);
}

double median(std::vector<double> values) {
    if (values.empty())
        throw MetricError("median of an empty set is undefined");
    std::ranges::sort(values);
    const auto mid = values.size() / 2;
    if (values.size() % 2 == 1)
        return values[mid];
    return (values[mid - 1] + values[mid]) / 2.0;
}

}  // namespace ciporter
