// Unsupervised learning: candidate patterns from alignments, then grammars
// chosen by minimum (G + E).
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sp/alignment.hpp"

namespace sp {

struct PoolEntry {
  Pattern pattern;
  std::uint64_t derivations = 1;
};

/// Patterns derived so far, with counters for fresh code symbols. Learned
/// patterns all look like `< %k d ... >`: a class symbol and a discriminator
/// between ID brackets.
class CandidatePool {
 public:
  CandidatePool() = default;

  std::span<const PoolEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const PoolEntry* find(PatternId id) const;

  /// The pool as a grammar, each pattern's frequency set to its derivation count.
  Grammar grammar() const;

  /// Tokens that fresh code symbols must avoid (typically the corpus alphabet).
  void reserve(std::span<const TokenId> tokens);

  Symbol fresh_class();
  Symbol fresh_discriminator();

  /// Stores `< cls d body... >` under a new id, or bumps the derivation count
  /// of an entry with identical content. Returns the id and whether it is new.
  std::pair<PatternId, bool> add(std::vector<Symbol> symbols);
  void bump(PatternId id, std::uint64_t by = 1);

  /// Ids handed out after the pool's own, for patterns that live outside it.
  PatternId next_id() const { return next_id_; }

 private:
  std::vector<PoolEntry> entries_;
  std::vector<TokenId> reserved_;  // sorted
  std::uint64_t class_counter_ = 0;
  std::uint64_t discriminator_counter_ = 0;
  PatternId next_id_ = 1;

  Symbol fresh(char prefix, std::uint64_t& counter);
};

/// Wraps `body` as `< cls d body... >` with ID brackets and codes.
std::vector<Symbol> wrap(Symbol cls, Symbol discriminator, std::span<const Symbol> body);

/// The terminal contents of a learned pattern, or empty if it is not one.
std::span<const Symbol> body_of(const Pattern& p);

/// Phase one. Turns the best alignment of one New pattern against the pool
/// into new pool patterns: one chunk per maximal run of matched surface
/// columns, one alternative per unmatched stretch on either side of a locus
/// (alternatives at a locus share a class), and one abstract pattern of
/// references in order. A full match only bumps derivation counts; an
/// alignment with nothing matched stores New verbatim. Returns the patterns
/// created by this call.
std::vector<Pattern> derive_candidates(const MultipleAlignment& a, CandidatePool& pool);

struct LearnParams {
  AlignParams align{};
  std::size_t grammar_beam = 10;
  std::size_t max_rounds = 0;  // 0: as many as there are candidate patterns
};

struct GrammarCandidate {
  std::vector<PatternId> pattern_ids;  // sorted
  Grammar grammar;
  double g = 0.0;
  double e = 0.0;
  double total = 0.0;
};

/// Distinct corpus sentences with their multiplicities, in first-seen order.
struct CorpusSummary {
  std::vector<std::vector<Symbol>> sentences;
  std::vector<std::uint64_t> counts;
  std::vector<TokenId> alphabet;
};
CorpusSummary summarize(std::span<const Pattern> corpus);

/// E under `model`: per sentence, B_E of its best alignment plus the raw
/// cost of any unmatched New symbols; with no alignment, the sentence's raw cost.
double encoding_cost_E(const Grammar& grammar, std::span<const Pattern> corpus, const AlignParams& params,
                       const CostModel& model);
double encoding_cost_E(const Grammar& grammar, const CorpusSummary& corpus, const AlignParams& params,
                       const CostModel& model);

/// G and E of `grammar` under a model built from the grammar itself plus the
/// corpus alphabet.
GrammarCandidate evaluate_grammar(const Grammar& grammar, const CorpusSummary& corpus, const AlignParams& params);

/// Every distinct sentence wrapped in code symbols, frequency = multiplicity.
/// Sentences already stored verbatim in the pool keep that pattern; the rest
/// get fresh codes and ids from `pool` (which is why it is taken by value).
std::vector<Pattern> verbatim_baseline(CandidatePool pool, const CorpusSummary& corpus);

/// Patterns a compiled grammar may draw on: the pool (frequency =
/// derivations) and the baseline patterns not already in it.
std::vector<Pattern> compile_candidates(const CandidatePool& pool, const CorpusSummary& corpus);

/// The compile objective for a set of candidate patterns: frequencies are
/// recounted from usage (dropping unused patterns) and the result evaluated.
GrammarCandidate evaluate_candidate(std::vector<Pattern> patterns, const CorpusSummary& corpus,
                                    const AlignParams& params);

/// Phase two. Beam search over grammars seeded with the empty grammar and
/// the verbatim baseline; each round adds one candidate pattern to every
/// survivor, best-covering patterns first, and stops when a round fails to
/// improve the best G + E. Returns the distinct grammars of the final beam
/// sorted by ascending G + E.
std::vector<GrammarCandidate> compile_grammars(const CandidatePool& pool, std::span<const Pattern> corpus,
                                               const LearnParams& params);

/// Frequencies replaced by the number of corpus sentences whose best
/// alignment uses each pattern. Patterns nobody uses are dropped.
Grammar recount_frequencies(const Grammar& grammar, const CorpusSummary& corpus, const AlignParams& params);

struct LearnResult {
  CandidatePool pool;
  std::vector<GrammarCandidate> grammars;  // best first
};

/// Both phases over `corpus`, one sentence at a time. Throws
/// std::invalid_argument on an empty corpus pattern.
LearnResult learn(std::span<const Pattern> corpus, const LearnParams& params = {});

/// Same patterns and roles up to a one-to-one renaming of code tokens
/// (tokens used in the ID role); ids and frequencies are ignored.
bool isomorphic(const Grammar& a, const Grammar& b);

/// Ranking for grammar candidates: lower total, then fewer patterns, then ids.
bool candidate_before(const GrammarCandidate& a, const GrammarCandidate& b);

}  // namespace sp
