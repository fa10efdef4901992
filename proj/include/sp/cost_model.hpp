// Information costs in bits, derived from symbol frequencies.
#pragma once

#include <span>
#include <vector>

#include "sp/pattern.hpp"

namespace sp {

/// Smoothed Shannon cost per token:
///
///   c(s) = -log2((f(s) + alpha) / (F + alpha * |S|))
///
/// where f(s) is the frequency-weighted count of s in the grammar, F the
/// total count and |S| the alphabet size (grammar tokens plus any extra
/// tokens registered at construction). A token outside the alphabet is
/// charged as a zero-count member of an alphabet one larger (never smaller
/// than two). Each pattern also pays one terminator cost
///
///   c_term = -log2(P / (F + P))
///
/// for P patterns in the grammar.
///
/// Immutable after construction.
class CostModel {
 public:
  static constexpr double default_alpha = 1.0;

  CostModel() : CostModel(Grammar{}) {}
  explicit CostModel(const Grammar& grammar, std::span<const TokenId> extra_alphabet = {},
                     double alpha = default_alpha);

  double cost(TokenId token) const {
    return token < costs_.size() && costs_[token] >= 0.0 ? costs_[token] : unseen_cost_;
  }
  double cost(Symbol s) const { return cost(s.token()); }
  double unseen_cost() const { return unseen_cost_; }
  double terminator_cost() const { return terminator_cost_; }

  double alpha() const { return alpha_; }
  double total() const { return total_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  std::size_t pattern_count() const { return pattern_count_; }
  bool in_alphabet(TokenId token) const { return token < costs_.size() && costs_[token] >= 0.0; }

 private:
  std::vector<double> costs_;  // indexed by token id; negative = not in the alphabet
  double alpha_ = default_alpha;
  double total_ = 0.0;
  std::size_t alphabet_size_ = 0;
  std::size_t pattern_count_ = 0;
  double unseen_cost_ = 1.0;
  double terminator_cost_ = 1.0;
};

CostModel build_cost_model(const Grammar& grammar, std::span<const TokenId> extra_alphabet = {});

/// Tokens of a corpus, for registering in a model's alphabet.
std::vector<TokenId> alphabet_of(std::span<const Pattern> patterns);

/// Sum of symbol costs plus one terminator.
double raw_cost(std::span<const Symbol> symbols, const CostModel& model);
inline double raw_cost(const Pattern& p, const CostModel& model) { return raw_cost(p.view(), model); }

/// G: the size of a grammar, the sum of its patterns' raw costs.
double grammar_cost(const Grammar& grammar, const CostModel& model);

}  // namespace sp
