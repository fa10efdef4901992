// Brute-force references for checking the heuristic engine on small inputs.
#pragma once

#include <span>

#include "sp/alignment.hpp"
#include "sp/learner.hpp"

namespace sp {

struct Bounds {
  std::size_t max_new_len = 12;
  std::size_t max_pattern_len = 8;
  std::size_t max_patterns = 6;
  std::size_t max_candidates = 12;
};

/// Length of a longest common subsequence of tokens, by full dynamic programming.
std::size_t lcs_score(std::span<const Symbol> a, std::span<const Symbol> b);
inline std::size_t lcs_score(const Pattern& a, const Pattern& b) { return lcs_score(a.view(), b.view()); }

/// The CD-maximal alignment of `new_symbols` against `grammar`, each pattern
/// used at most once, found by trying every subset of patterns and every
/// column order. Ties go to fewer rows, then smaller pattern ids. Returns the
/// unmatched alignment (CD 0) when nothing compresses. Throws
/// std::invalid_argument when the input exceeds `bounds`.
MultipleAlignment exhaustive_alignments(std::span<const Symbol> new_symbols, const Grammar& grammar,
                                        const Bounds& bounds, const CostModel& model);

/// The best grammar over every subset of the compile candidates (pool plus
/// verbatim baseline patterns), under the same objective compile_grammars
/// uses. Throws std::invalid_argument when there are more than
/// `bounds.max_candidates` candidates.
GrammarCandidate exhaustive_grammar(const CandidatePool& pool, std::span<const Pattern> corpus,
                                    const Bounds& bounds, const AlignParams& params = {});

}  // namespace sp
