#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ciporter/metrics.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>

using namespace ciporter;

namespace {

// ---------------------------------------------------------------------------
// Brute-force oracles, written independently of the library implementation:
// direct enumeration and clipped-count arithmetic, nothing shared.
// ---------------------------------------------------------------------------

std::vector<Ngram> enumerate_ngrams(const Tokens& tokens, int n) {
    std::vector<Ngram> grams;
    for (int i = 0; i + n <= static_cast<int>(tokens.size()); ++i)
        grams.emplace_back(tokens.begin() + i, tokens.begin() + i + n);
    return grams;
}

double oracle_crystal_bleu(const Tokens& candidate, const Tokens& reference,
                           const std::set<Ngram>& excluded, int n_max) {
    double log_sum = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        std::map<Ngram, long> cand_counts;
        for (const auto& gram : enumerate_ngrams(candidate, n)) {
            if (!excluded.count(gram))
                ++cand_counts[gram];
        }
        std::map<Ngram, long> ref_counts;
        for (const auto& gram : enumerate_ngrams(reference, n)) {
            if (!excluded.count(gram))
                ++ref_counts[gram];
        }
        long total = 0;
        long clipped = 0;
        for (const auto& [gram, count] : cand_counts) {
            total += count;
            const auto it = ref_counts.find(gram);
            if (it != ref_counts.end())
                clipped += count < it->second ? count : it->second;
        }
        double precision = 1e-9;
        if (total > 0 && clipped > 0)
            precision = static_cast<double>(clipped) / static_cast<double>(total);
        if (precision < 1e-9)
            precision = 1e-9;
        log_sum += std::log(precision) / n_max;
    }
    double brevity = 1.0;
    if (candidate.size() < reference.size())
        brevity = std::exp(1.0 - static_cast<double>(reference.size()) /
                                     static_cast<double>(candidate.size()));
    return brevity * std::exp(log_sum);
}

std::set<Ngram> oracle_shared_ngrams(const std::vector<Tokens>& corpus, int n_max, int k) {
    std::set<Ngram> shared;
    for (int n = 1; n <= n_max; ++n) {
        std::map<Ngram, long> tally;
        for (const auto& doc : corpus) {
            for (const auto& gram : enumerate_ngrams(doc, n))
                ++tally[gram];
        }
        // selection by repeated max scan, ties to the lexicographically least
        std::set<Ngram> taken;
        for (int round = 0; round < k && taken.size() < tally.size(); ++round) {
            const Ngram* best = nullptr;
            long best_count = -1;
            for (const auto& [gram, count] : tally) {
                if (taken.count(gram))
                    continue;
                if (count > best_count) {
                    best = &gram;
                    best_count = count;
                }
            }
            if (best)
                taken.insert(*best);
        }
        shared.insert(taken.begin(), taken.end());
    }
    return shared;
}

Tokens random_tokens(std::mt19937& rng, int max_len) {
    static const char* vocab[] = {"on", "push", "jobs", "runs-on", "steps", "uses",
                                  "run", "pytest", "3.8", "matrix", "python", "checkout"};
    const int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_len));
    Tokens tokens;
    for (int i = 0; i < len; ++i)
        tokens.push_back(vocab[rng() % 12]);
    return tokens;
}

}  // namespace

TEST_CASE("build_success_rate matches the reported ratios") {
    auto outcomes = [](int successes, int total) {
        std::vector<BuildOutcome> out;
        for (int i = 0; i < total; ++i) {
            BuildOutcome outcome;
            outcome.case_id = std::to_string(i);
            outcome.status = i < successes ? BuildStatus::Success : BuildStatus::Failure;
            if (outcome.status == BuildStatus::Failure)
                outcome.messages = {"failed"};
            out.push_back(std::move(outcome));
        }
        return out;
    };
    CHECK(round3(build_success_rate(outcomes(59, 229))) == doctest::Approx(0.258).epsilon(1e-12));
    CHECK(round3(build_success_rate(outcomes(173, 229))) == doctest::Approx(0.755).epsilon(1e-12));
    CHECK(build_success_rate(outcomes(0, 5)) == 0.0);
    CHECK_THROWS_AS((void)build_success_rate({}), MetricError);
}

TEST_CASE("BSR linearity over concatenated outcome sets") {
    std::vector<BuildOutcome> a(8), b(12);
    for (int i = 0; i < 8; ++i)
        a[static_cast<std::size_t>(i)].status = i < 3 ? BuildStatus::Success : BuildStatus::Failure;
    for (int i = 0; i < 12; ++i)
        b[static_cast<std::size_t>(i)].status = i < 9 ? BuildStatus::Success : BuildStatus::Failure;
    for (auto* set : {&a, &b}) {
        for (auto& o : *set) {
            if (o.status == BuildStatus::Failure)
                o.messages = {"failed"};
        }
    }
    auto both = a;
    both.insert(both.end(), b.begin(), b.end());
    const double expected =
        (build_success_rate(a) * 8 + build_success_rate(b) * 12) / 20.0;
    CHECK(build_success_rate(both) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("tokenize strips punctuation but keeps flag dashes") {
    CHECK(tokenize("python-version: [3.8, 3.9]") ==
          Tokens{"python-version", "3.8", "3.9"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("run: python -m pytest") == Tokens{"run", "python", "-m", "pytest"});
    CHECK(tokenize("Case SENSITIVE case") == Tokens{"Case", "SENSITIVE", "case"});
    // purely punctuation tokens survive verbatim
    CHECK(tokenize("- 3.8") == Tokens{"-", "3.8"});
    CHECK(tokenize("'quoted'") == Tokens{"quoted"});
}

TEST_CASE("cosine similarity identities and the hand-computed case") {
    TokenVector x = term_frequencies({"a", "b", "a"});
    CHECK(cosine_similarity(x, x) == doctest::Approx(1.0).epsilon(1e-12));

    TokenVector disjoint_a = term_frequencies({"a", "b"});
    TokenVector disjoint_b = term_frequencies({"c", "d"});
    CHECK(cosine_similarity(disjoint_a, disjoint_b) == 0.0);

    // a={x:1,y:1}, b={x:1} -> 1/sqrt(2)
    TokenVector a = term_frequencies({"x", "y"});
    TokenVector b = term_frequencies({"x"});
    CHECK(cosine_similarity(a, b) == doctest::Approx(0.7071).epsilon(1e-4));
    CHECK(cosine_similarity(a, b) == doctest::Approx(cosine_similarity(b, a)).epsilon(1e-15));

    CHECK_THROWS_AS((void)cosine_similarity(TokenVector{}, a), MetricError);
}

TEST_CASE("trivially shared n-grams: pinned examples and oracle agreement") {
    SUBCASE("single most frequent unigram") {
        const auto shared = trivially_shared_ngrams({{"a", "a", "b"}}, 1, 1);
        REQUIRE(shared.ngrams.size() == 1);
        CHECK(shared.ngrams.count({"a"}) == 1);
    }
    SUBCASE("k=0 selects nothing") {
        CHECK(trivially_shared_ngrams({{"a", "b"}}, 4, 0).ngrams.empty());
    }
    SUBCASE("three-document fixture against the exhaustive tally") {
        const std::vector<Tokens> corpus = {
            {"on", "push", "jobs", "build", "steps", "run", "pytest"},
            {"on", "push", "on", "push", "jobs", "deploy", "steps"},
            {"name", "ci", "on", "push", "jobs", "build", "steps", "run"},
        };
        for (int k : {1, 2, 3, 5}) {
            const auto shared = trivially_shared_ngrams(corpus, 3, k);
            const auto expected = oracle_shared_ngrams(corpus, 3, k);
            CAPTURE(k);
            CHECK(shared.ngrams == expected);
        }
    }
    SUBCASE("ties break lexicographically") {
        // b and a tie at count 1 for bigrams; (a x) sorts before (b x)
        const auto shared = trivially_shared_ngrams({{"a", "x"}, {"b", "x"}}, 2, 1);
        CHECK(shared.ngrams.count({"a", "x"}) == 1);
        CHECK(shared.ngrams.count({"b", "x"}) == 0);
    }
    CHECK_THROWS_AS((void)trivially_shared_ngrams({}, 4, 500), MetricError);
}

TEST_CASE("crystal_bleu identity, floor, and exclusion invariance") {
    const Tokens doc = {"on", "push", "jobs", "build", "runs-on", "steps", "run", "pytest"};
    SharedNgramSet empty_shared;

    CHECK(crystal_bleu(doc, doc, empty_shared) == doctest::Approx(1.0).epsilon(1e-12));

    const Tokens other = {"name", "ci", "env", "global", "cache", "pip", "deploy", "stage"};
    CHECK(crystal_bleu(doc, other, empty_shared) <= 1e-2);

    // excluding n-grams absent from both sides changes nothing
    SharedNgramSet disjoint;
    disjoint.ngrams = {{"zzz"}, {"zzz", "qqq"}};
    CHECK(crystal_bleu(doc, other, disjoint) ==
          doctest::Approx(crystal_bleu(doc, other, empty_shared)).epsilon(1e-15));
    CHECK(crystal_bleu(doc, doc, disjoint) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)crystal_bleu({}, doc, empty_shared), MetricError);
}

TEST_CASE("crystal_bleu degrades monotonically as matching tail n-grams go") {
    const Tokens reference = {"on", "push", "jobs", "build", "steps", "run", "pytest", "done"};
    SharedNgramSet shared;
    double previous = 2.0;
    for (std::size_t keep = reference.size(); keep >= 4; --keep) {
        const Tokens candidate(reference.begin(), reference.begin() + static_cast<long>(keep));
        const double score = crystal_bleu(candidate, reference, shared);
        const double expected = oracle_crystal_bleu(candidate, reference, {}, 4);
        CHECK(score == doctest::Approx(expected).epsilon(1e-9));
        CHECK(score <= previous + 1e-12);
        previous = score;
    }
}

TEST_CASE("crystal_bleu agrees with the brute-force oracle on random pairs") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const auto candidate = random_tokens(rng, 20);
        const auto reference = random_tokens(rng, 20);

        SharedNgramSet shared;
        std::set<Ngram> excluded;
        if (trial % 3 == 1) {
            shared = trivially_shared_ngrams({candidate, reference}, 4, 2);
            excluded = shared.ngrams;
        } else if (trial % 3 == 2) {
            shared.ngrams = {{"on"}, {"on", "push"}};
            excluded = shared.ngrams;
        }

        const double actual = crystal_bleu(candidate, reference, shared);
        const double expected = oracle_crystal_bleu(candidate, reference, excluded, 4);
        CAPTURE(trial);
        CHECK(actual == doctest::Approx(expected).epsilon(1e-9));
        CHECK(actual >= 0.0);
        CHECK(actual <= 1.0);
    }
}

TEST_CASE("median handles odd, even, and empty inputs") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(median({7.5}) == 7.5);
    CHECK_THROWS_AS((void)median({}), MetricError);
}

TEST_CASE("round3 is exact at the reporting precision") {
    CHECK(round3(59.0 / 229.0) == doctest::Approx(0.258).epsilon(1e-15));
    CHECK(round3(173.0 / 229.0) == doctest::Approx(0.755).epsilon(1e-15));
    CHECK(round3(92.0 / 229.0) == doctest::Approx(0.402).epsilon(1e-15));
}
