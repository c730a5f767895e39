#include "kgrag/eval/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "kgrag/text.hpp"

namespace kgrag {

std::vector<std::string> normalize_answer(std::string_view answer) {
    std::string cleaned;
    cleaned.reserve(answer.size());
    for (char c : answer) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::ispunct(uc)) continue;
        cleaned.push_back(static_cast<char>(std::tolower(uc)));
    }
    std::vector<std::string> tokens;
    std::istringstream in(cleaned);
    std::string token;
    while (in >> token) {
        if (token == "a" || token == "an" || token == "the") continue;
        tokens.push_back(token);
    }
    return tokens;
}

int exact_match(std::string_view answer, std::string_view gold) {
    return normalize_answer(answer) == normalize_answer(gold) ? 1 : 0;
}

double token_f1(std::string_view answer, std::string_view gold) {
    const std::vector<std::string> a = normalize_answer(answer);
    const std::vector<std::string> g = normalize_answer(gold);
    if (a.empty() && g.empty()) return 1.0;
    if (a.empty() || g.empty()) return 0.0;

    std::map<std::string, std::size_t> gold_counts;
    for (const std::string& t : g) ++gold_counts[t];
    std::size_t overlap = 0;
    for (const std::string& t : a) {
        const auto it = gold_counts.find(t);
        if (it != gold_counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    if (overlap == 0) return 0.0;
    const double precision = static_cast<double>(overlap) / static_cast<double>(a.size());
    const double recall = static_cast<double>(overlap) / static_cast<double>(g.size());
    return 2.0 * precision * recall / (precision + recall);
}

double pr_at_k(const std::vector<std::string>& retrieved,
               const std::vector<std::string>& supporting, std::size_t k) {
    if (supporting.empty()) throw InvalidArgument("pr_at_k: empty supporting set");
    const std::set<std::string> support(supporting.begin(), supporting.end());
    // D_k is the set of documents in the first k ranked positions.
    std::set<std::string> top;
    for (std::size_t i = 0; i < retrieved.size() && i < k; ++i) {
        top.insert(retrieved[i]);
    }
    std::size_t hits = 0;
    for (const std::string& id : support) {
        if (top.contains(id)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(support.size());
}

namespace {

double mean_max_similarity(const std::vector<EmbeddingVector>& from,
                           const std::vector<EmbeddingVector>& against) {
    double total = 0.0;
    for (const EmbeddingVector& x : from) {
        double best = -1.0;
        for (const EmbeddingVector& y : against) {
            double dot = 0.0;
            for (std::size_t d = 0; d < x.size(); ++d) dot += x[d] * y[d];
            best = std::max(best, dot);
        }
        total += best;
    }
    return total / static_cast<double>(from.size());
}

std::vector<std::string> whitespace_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

}  // namespace

double bertscore(const std::vector<std::string>& truth_tokens,
                 const std::vector<std::string>& induced_tokens, Gateway& embedder) {
    if (truth_tokens.empty() || induced_tokens.empty()) {
        throw InvalidArgument("bertscore: empty token sequence");
    }
    const auto truth_vectors = embedder.embed(truth_tokens);
    const auto induced_vectors = embedder.embed(induced_tokens);
    const double recall = mean_max_similarity(truth_vectors, induced_vectors);
    const double precision = mean_max_similarity(induced_vectors, truth_vectors);
    if (recall + precision <= 0.0) return 0.0;
    return 2.0 * recall * precision / (recall + precision);
}

namespace {

double mean_over_induced(const std::vector<std::string>& truth_types,
                         const std::vector<std::string>& induced_types,
                         Gateway& embedder) {
    if (truth_types.empty() || induced_types.empty()) {
        throw InvalidArgument("bs metric: empty type set");
    }
    std::vector<std::vector<std::string>> truth_tokens;
    truth_tokens.reserve(truth_types.size());
    for (const std::string& t : truth_types) {
        auto tokens = whitespace_tokens(t);
        if (tokens.empty()) throw InvalidArgument("bs metric: blank type string");
        truth_tokens.push_back(std::move(tokens));
    }
    double total = 0.0;
    for (const std::string& induced : induced_types) {
        const auto induced_tokens = whitespace_tokens(induced);
        if (induced_tokens.empty()) throw InvalidArgument("bs metric: blank type string");
        double best = -1.0;
        for (const auto& truth : truth_tokens) {
            best = std::max(best, bertscore(truth, induced_tokens, embedder));
        }
        total += best;
    }
    return total / static_cast<double>(induced_types.size());
}

}  // namespace

double bs_recall(const std::vector<std::string>& truth_types,
                 const std::vector<std::string>& induced_types, Gateway& embedder) {
    return mean_over_induced(truth_types, induced_types, embedder);
}

double bs_coverage(const std::vector<std::string>& truth_union,
                   const std::vector<std::string>& induced_union, Gateway& embedder) {
    return mean_over_induced(truth_union, induced_union, embedder);
}

double balanced_accuracy(const ConfusionCounts& counts, bool paper_formula,
                         bool* degenerate) {
    if (counts.tp + counts.fp + counts.tn + counts.fn == 0) {
        throw InvalidArgument("undefined-metric: all confusion counts are zero");
    }
    bool flagged = false;
    auto recall = [&flagged](std::uint64_t hit, std::uint64_t miss) {
        if (hit + miss == 0) {
            flagged = true;
            return 0.0;
        }
        return static_cast<double>(hit) / static_cast<double>(hit + miss);
    };
    const double positive_recall = recall(counts.tp, counts.fn);
    const double negative_recall = recall(counts.tn, counts.fp);
    if (degenerate) *degenerate = flagged;
    const double sum = positive_recall + negative_recall;
    return paper_formula ? sum : 0.5 * sum;
}

double felm_f1(const ConfusionCounts& counts, bool* degenerate) {
    if (counts.tp + counts.fp + counts.tn + counts.fn == 0) {
        throw InvalidArgument("undefined-metric: all confusion counts are zero");
    }
    bool flagged = false;
    auto ratio = [&flagged](std::uint64_t num, std::uint64_t denom) {
        if (denom == 0) {
            flagged = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(denom);
    };
    const double precision = ratio(counts.tn, counts.tn + counts.fn);
    const double recall = ratio(counts.tn, counts.tn + counts.fp);
    if (degenerate) *degenerate = flagged;
    if (precision + recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace kgrag
