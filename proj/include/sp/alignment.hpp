// Multiple alignments of New material against a grammar of Old patterns,
// scored by compression, and the encodings and probabilities derived from them.
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sp/cost_model.hpp"
#include "sp/matcher.hpp"
#include "sp/pattern.hpp"

namespace sp {

struct Cell {
  std::uint32_t row = 0;
  std::uint32_t pos = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct AlignmentRow {
  std::optional<PatternId> pattern;  // empty for row 0, the New row
  std::vector<Symbol> symbols;
};

/// The ID symbols that describe New material in terms of a grammar.
using Encoding = std::vector<Symbol>;

/// Row 0 holds the New sequence; every other row is one instance of an Old
/// pattern. Occurrences stacked in one column carry the same token, and
/// every row's occurrences run left to right through the columns. A column
/// shared by several rows holds a New or contents occurrence: ID symbols
/// link to references, never to other ID symbols alone.
///
/// The constructor canonicalizes: Old rows are ordered by pattern id and
/// columns by a fixed topological order, so two alignments with the same
/// structure compare equal through key() however they were built. It throws
/// std::logic_error when the requested columns violate those invariants.
class MultipleAlignment {
 public:
  /// `labels[r][p]` names the column of occurrence p of row r; equal labels
  /// share a column.
  MultipleAlignment(std::vector<AlignmentRow> rows,
                    const std::vector<std::vector<std::uint32_t>>& labels, const CostModel& model);

  /// Row 0 alone: nothing matched, score 0.
  static MultipleAlignment unmatched(std::vector<Symbol> new_symbols, const CostModel& model);

  std::span<const AlignmentRow> rows() const { return rows_; }
  std::size_t old_row_count() const { return rows_.size() - 1; }
  std::span<const std::vector<Cell>> columns() const { return columns_; }
  std::uint32_t column_of(std::size_t row, std::size_t pos) const { return column_of_[row][pos]; }
  Symbol symbol(Cell c) const { return rows_[c.row].symbols[c.pos]; }
  bool is_matched_column(std::uint32_t column) const { return columns_[column].size() > 1; }

  /// Compression difference B_N - B_E under the construction-time model.
  double score() const { return new_bits_ - encoding_bits_; }
  double new_bits() const { return new_bits_; }
  double encoding_bits() const { return encoding_bits_; }

  /// Row-0 positions that share a column with some Old row.
  const std::vector<std::uint32_t>& encoded_new() const { return encoded_new_; }
  /// Row-0 positions left unmatched.
  std::vector<std::uint32_t> residue() const;
  const std::vector<PatternId>& pattern_ids() const { return pattern_ids_; }  // sorted, with repeats
  /// Maximal stretches of consecutive matched row-0 positions.
  std::size_t matched_runs() const { return matched_runs_; }
  /// Occurrences that share their column with another row.
  std::size_t matched_cells() const { return matched_cells_; }
  /// Contents occurrences of Old rows that nothing else matches.
  std::size_t unmatched_contents() const { return unmatched_contents_; }
  std::size_t instances_of(PatternId id) const;

  const std::vector<std::uint32_t>& key() const { return key_; }

 private:
  std::vector<AlignmentRow> rows_;
  std::vector<std::vector<Cell>> columns_;
  std::vector<std::vector<std::uint32_t>> column_of_;
  double new_bits_ = 0.0;
  double encoding_bits_ = 0.0;
  std::vector<std::uint32_t> key_;
  std::vector<std::uint32_t> encoded_new_;
  std::vector<PatternId> pattern_ids_;
  std::size_t matched_cells_ = 0;
  std::size_t matched_runs_ = 0;
  std::size_t unmatched_contents_ = 0;
};

/// Ranking: higher CD, then fewer Old rows, then fewer gaps in the matched
/// New material, then fewer unmatched Old contents symbols, then leftmost
/// matched New positions, then lexicographically smaller pattern ids, then
/// more matched occurrences.
bool alignment_before(const MultipleAlignment& a, const MultipleAlignment& b);

/// B_N: cost of row-0 occurrences in multi-row columns.
double new_bits(const MultipleAlignment& a, const CostModel& model);
/// B_E: cost of the derived encoding.
double encoding_bits(const MultipleAlignment& a, const CostModel& model);
/// CD = B_N - B_E, recomputed from scratch under `model`.
double compression_difference(const MultipleAlignment& a, const CostModel& model);

/// ID occurrences of Old rows that are matched to nothing, in column order.
Encoding derive_encoding(const MultipleAlignment& a);

/// Surface material of an alignment: in column order, one token for each
/// column holding a contents occurrence of an Old row whose token never
/// serves as an ID symbol in `grammar`.
std::vector<Symbol> surface(const MultipleAlignment& a, const Grammar& grammar);

struct AlignParams {
  std::size_t align_beam = 200;
  std::size_t max_alignments = 10;
  std::size_t max_stages = 12;
  std::size_t max_pattern_instances = 1;
  std::size_t max_variants = 8;  // per stage, alignments with one row set and one score
  MatchParams match{};
};

/// Staged beam search for the best multiple alignments of `new_patterns`
/// (concatenated into row 0 in the given order) against `grammar`.
///
/// Stage one matches row 0 against every Old pattern. Each later stage
/// matches every surviving alignment against every Old pattern, adding the
/// pattern as a new row joined to existing columns by the hit, and keeps
/// the `align_beam` best new alignments. Among joins of equal score, those
/// leaving fewer Old contents cells unmatched come first. Returns up to
/// `max_alignments` alignments with positive CD, best first.
std::vector<MultipleAlignment> build_alignments(std::span<const Pattern> new_patterns,
                                                const Grammar& grammar, const AlignParams& params,
                                                const CostModel& model);

/// Same, with a single New sequence.
std::vector<MultipleAlignment> build_alignments(std::span<const Symbol> new_symbols,
                                                const Grammar& grammar, const AlignParams& params,
                                                const CostModel& model);

/// Probability of each alignment relative to the others that encode exactly
/// the same row-0 occurrences: p_i = 2^-B_E,i / sum_j 2^-B_E,j. The result is
/// parallel to `alignments`.
std::vector<double> relative_probabilities(std::span<const MultipleAlignment> alignments,
                                           const CostModel& model);

/// Production: aligns `encoding` as New against the grammar and reads the
/// surface of each resulting alignment, best first, without repeats.
std::vector<std::vector<Symbol>> generate(std::span<const Symbol> encoding, const Grammar& grammar,
                                          const AlignParams& params, const CostModel& model);

}  // namespace sp
