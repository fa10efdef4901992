#include "sp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace sp {

std::size_t lcs_score(std::span<const Symbol> a, std::span<const Symbol> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

// Best total column weight over all ways of threading the rows through a
// common sequence of columns. A column takes one occurrence from each of a
// nonempty set of rows sharing a token; multi-row columns earn the cost of
// their New occurrence and of their Old ID occurrences.
class ColumnSearch {
 public:
  ColumnSearch(std::vector<std::vector<Symbol>> rows, const CostModel& model) : rows_(std::move(rows)) {
    stride_.resize(rows_.size());
    std::size_t states = 1;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      stride_[r] = states;
      states *= rows_[r].size() + 1;
    }
    memo_.assign(states, std::numeric_limits<double>::quiet_NaN());
    gain_.resize(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (const auto& s : rows_[r]) gain_[r].push_back(r == 0 || s.is_id() ? model.cost(s) : 0.0);
    }
  }

  double best() {
    std::vector<std::size_t> at(rows_.size(), 0);
    return solve(at);
  }

  // Column sequence of one optimal threading: each column is a row bitmask.
  std::vector<unsigned> columns() {
    std::vector<std::size_t> at(rows_.size(), 0);
    std::vector<unsigned> out;
    for (;;) {
      const double target = solve(at);
      auto moves = transitions(at);
      if (moves.empty()) break;
      bool advanced = false;
      for (const auto& [mask, w] : moves) {
        advance(at, mask, +1);
        if (std::abs(w + solve(at) - target) < 1e-9) {
          out.push_back(mask);
          advanced = true;
          break;
        }
        advance(at, mask, -1);
      }
      if (!advanced) throw std::logic_error("column search reconstruction failed");
    }
    return out;
  }

 private:
  std::vector<std::vector<Symbol>> rows_;
  std::vector<std::vector<double>> gain_;
  std::vector<std::size_t> stride_;
  std::vector<double> memo_;

  std::size_t index(const std::vector<std::size_t>& at) const {
    std::size_t i = 0;
    for (std::size_t r = 0; r < at.size(); ++r) i += at[r] * stride_[r];
    return i;
  }

  void advance(std::vector<std::size_t>& at, unsigned mask, int by) const {
    for (std::size_t r = 0; r < at.size(); ++r) {
      if (mask >> r & 1U) at[r] = static_cast<std::size_t>(static_cast<long>(at[r]) + by);
    }
  }

  // A multi-row column needs a New or contents occurrence.
  bool has_contents(unsigned mask, const std::vector<std::size_t>& at) const {
    if (mask & 1U) return true;
    for (std::size_t r = 1; r < rows_.size(); ++r) {
      if ((mask >> r & 1U) && !rows_[r][at[r]].is_id()) return true;
    }
    return false;
  }

  // Moves from `at`, multi-row columns first, then by mask.
  std::vector<std::pair<unsigned, double>> transitions(const std::vector<std::size_t>& at) const {
    std::map<TokenId, unsigned> groups;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (at[r] < rows_[r].size()) groups[rows_[r][at[r]].token()] |= 1U << r;
    }
    std::vector<std::pair<unsigned, double>> out;
    for (const auto& [token, group] : groups) {
      for (unsigned sub = group; sub; sub = (sub - 1) & group) {
        double w = 0.0;
        if (std::popcount(sub) > 1 && !has_contents(sub, at)) continue;
        if (std::popcount(sub) > 1) {
          for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (sub >> r & 1U) w += gain_[r][at[r]];
          }
        }
        out.emplace_back(sub, w);
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
      const int px = std::popcount(x.first);
      const int py = std::popcount(y.first);
      if ((px > 1) != (py > 1)) return px > 1;
      return x.first < y.first;
    });
    return out;
  }

  double solve(std::vector<std::size_t>& at) {
    const std::size_t i = index(at);
    if (!std::isnan(memo_[i])) return memo_[i];
    double best = 0.0;
    bool any = false;
    for (const auto& [mask, w] : transitions(at)) {
      advance(at, mask, +1);
      const double v = w + solve(at);
      advance(at, mask, -1);
      if (!any || v > best) best = v;
      any = true;
    }
    memo_[i] = any ? best : 0.0;
    return memo_[i];
  }
};

long long quantize(double bits) { return std::llround(bits * 1e6); }

}  // namespace

MultipleAlignment exhaustive_alignments(std::span<const Symbol> new_symbols, const Grammar& grammar,
                                        const Bounds& bounds, const CostModel& model) {
  if (new_symbols.size() > bounds.max_new_len) throw std::invalid_argument("New pattern longer than the oracle bound");
  if (grammar.size() > bounds.max_patterns) throw std::invalid_argument("grammar larger than the oracle bound");
  for (const auto& p : grammar.patterns()) {
    if (p.size() > bounds.max_pattern_len) throw std::invalid_argument("pattern longer than the oracle bound");
  }

  const std::vector<Symbol> new_row(new_symbols.begin(), new_symbols.end());
  MultipleAlignment best = MultipleAlignment::unmatched(new_row, model);
  if (new_row.empty()) return best;

  const auto patterns = grammar.patterns();
  const std::size_t n = patterns.size();
  for (std::uint32_t subset = 1; subset < (1U << n); ++subset) {
    std::vector<std::vector<Symbol>> rows{new_row};
    std::vector<const Pattern*> used;
    for (std::size_t k = 0; k < n; ++k) {
      if (subset >> k & 1U) {
        rows.push_back(patterns[k].symbols);
        used.push_back(&patterns[k]);
      }
    }
    ColumnSearch search(rows, model);
    search.best();
    const auto columns = search.columns();

    // Label cells by column; rows left entirely in singleton columns are dropped.
    std::vector<std::vector<std::uint32_t>> labels(rows.size());
    std::vector<bool> touched(rows.size(), false);
    for (std::uint32_t c = 0; c < columns.size(); ++c) {
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (columns[c] >> r & 1U) {
          labels[r].push_back(c);
          if (std::popcount(columns[c]) > 1) touched[r] = true;
        }
      }
    }
    std::vector<AlignmentRow> kept_rows{AlignmentRow{std::nullopt, new_row}};
    std::vector<std::vector<std::uint32_t>> kept_labels{labels[0]};
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (!touched[r]) continue;
      kept_rows.push_back(AlignmentRow{used[r - 1]->id, rows[r]});
      kept_labels.push_back(labels[r]);
    }
    if (kept_rows.size() == 1) continue;
    MultipleAlignment candidate(std::move(kept_rows), kept_labels, model);

    const auto qc = quantize(candidate.score());
    const auto qb = quantize(best.score());
    bool better = qc > qb;
    if (qc == qb && qb > 0) {
      if (candidate.old_row_count() != best.old_row_count()) {
        better = candidate.old_row_count() < best.old_row_count();
      } else {
        better = candidate.pattern_ids() < best.pattern_ids();
      }
    }
    if (better) best = std::move(candidate);
  }
  return best;
}

GrammarCandidate exhaustive_grammar(const CandidatePool& pool, std::span<const Pattern> corpus,
                                    const Bounds& bounds, const AlignParams& params) {
  const CorpusSummary summary = summarize(corpus);
  const auto candidates = compile_candidates(pool, summary);
  if (candidates.size() > bounds.max_candidates) {
    throw std::invalid_argument("candidate set larger than the oracle bound (" + std::to_string(candidates.size()) +
                                ")");
  }
  std::optional<GrammarCandidate> best;
  const std::size_t n = candidates.size();
  for (std::uint32_t subset = 0; subset < (1U << n); ++subset) {
    std::vector<Pattern> chosen;
    for (std::size_t k = 0; k < n; ++k) {
      if (subset >> k & 1U) chosen.push_back(candidates[k]);
    }
    auto c = evaluate_candidate(std::move(chosen), summary, params);
    if (!best || candidate_before(c, *best)) best = std::move(c);
  }
  return *best;
}

}  // namespace sp
