#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kgrag/error.hpp"
#include "kgrag/gateway/gateway.hpp"

namespace kgrag {

// QA answer normalization: lowercase, strip punctuation, drop the articles
// {a, an, the}, collapse whitespace, tokenize. Idempotent.
std::vector<std::string> normalize_answer(std::string_view answer);

// 1 when the normalized token sequences match exactly.
int exact_match(std::string_view answer, std::string_view gold);

// Token-level F1 with multiset intersection. Both empty -> 1, one empty -> 0.
double token_f1(std::string_view answer, std::string_view gold);

// PR@k = |top-k retrieved  ∩  supporting| / |supporting|.
// Throws InvalidArgument when the supporting set is empty.
double pr_at_k(const std::vector<std::string>& retrieved,
               const std::vector<std::string>& supporting, std::size_t k);

// Greedy token-matching similarity of two token lists under the given
// embedder: harmonic mean of mean-max dot-product precision and recall.
// Throws InvalidArgument when either token list is empty.
double bertscore(const std::vector<std::string>& truth_tokens,
                 const std::vector<std::string>& induced_tokens, Gateway& embedder);

// Mean over induced elements of their best bertscore against any ground
// truth element; tokens are whitespace-split. bs_coverage is the same
// formula applied to whole-test-set unions.
double bs_recall(const std::vector<std::string>& truth_types,
                 const std::vector<std::string>& induced_types, Gateway& embedder);
double bs_coverage(const std::vector<std::string>& truth_union,
                   const std::vector<std::string>& induced_union, Gateway& embedder);

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;
};

// Mean of the two class recalls; with `paper_formula` their plain sum (the
// printed form, maximum 2). A zero denominator contributes 0 and sets
// *degenerate when provided. Throws InvalidArgument on all-zero counts.
double balanced_accuracy(const ConfusionCounts& counts, bool paper_formula = false,
                         bool* degenerate = nullptr);

// F1 for detecting the negative class: precision TN/(TN+FN), recall
// TN/(TN+FP). Zero denominators contribute 0 and set *degenerate.
double felm_f1(const ConfusionCounts& counts, bool* degenerate = nullptr);

}  // namespace kgrag
