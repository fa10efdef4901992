#include "sp/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sp {

CostModel::CostModel(const Grammar& grammar, std::span<const TokenId> extra_alphabet, double alpha)
    : alpha_(alpha), pattern_count_(grammar.size()) {
  if (!(alpha > 0.0)) throw std::invalid_argument("smoothing constant must be positive");

  std::size_t limit = 0;
  for (const auto& [token, n] : grammar.symbol_counts()) limit = std::max<std::size_t>(limit, token + 1);
  for (TokenId t : extra_alphabet) limit = std::max<std::size_t>(limit, t + 1);

  std::vector<double> counts(limit, -1.0);
  for (const auto& [token, n] : grammar.symbol_counts()) counts[token] = static_cast<double>(n);
  for (TokenId t : extra_alphabet) {
    if (counts[t] < 0.0) counts[t] = 0.0;
  }
  alphabet_size_ = static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](double c) { return c >= 0.0; }));
  total_ = static_cast<double>(grammar.total_count());

  const double denom = total_ + alpha_ * static_cast<double>(alphabet_size_);
  costs_.assign(limit, -1.0);
  for (std::size_t t = 0; t < limit; ++t) {
    if (counts[t] >= 0.0) costs_[t] = -std::log2((counts[t] + alpha_) / denom);
  }
  const double widened = static_cast<double>(std::max<std::size_t>(alphabet_size_ + 1, 2));
  unseen_cost_ = -std::log2(alpha_ / (total_ + alpha_ * widened));

  const auto patterns = static_cast<double>(pattern_count_);
  terminator_cost_ = pattern_count_ > 0 ? -std::log2(patterns / (total_ + patterns))
                                        : -std::log2(alpha_ / (total_ + 2.0 * alpha_));
}

CostModel build_cost_model(const Grammar& grammar, std::span<const TokenId> extra_alphabet) {
  return CostModel(grammar, extra_alphabet);
}

std::vector<TokenId> alphabet_of(std::span<const Pattern> patterns) {
  std::vector<TokenId> out;
  for (const auto& p : patterns) {
    for (const auto& s : p.symbols) out.push_back(s.token());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double raw_cost(std::span<const Symbol> symbols, const CostModel& model) {
  double bits = model.terminator_cost();
  for (const auto& s : symbols) bits += model.cost(s);
  return bits;
}

double grammar_cost(const Grammar& grammar, const CostModel& model) {
  double bits = 0.0;
  for (const auto& p : grammar.patterns()) bits += raw_cost(p, model);
  return bits;
}

}  // namespace sp
