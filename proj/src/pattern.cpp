#include "sp/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace sp {

Pattern::Pattern(PatternId id_, std::vector<Symbol> symbols_, std::uint64_t frequency_, Origin origin_)
    : id(id_), symbols(std::move(symbols_)), frequency(frequency_), origin(origin_) {
  if (symbols.empty()) throw std::invalid_argument("pattern must have at least one symbol");
  if (frequency == 0) throw std::invalid_argument("pattern frequency must be at least 1");
}

std::vector<Symbol> tokenize(std::string_view text, Role role) {
  std::vector<Symbol> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.push_back(Symbol::intern(text.substr(i, j - i), role));
    i = j;
  }
  return out;
}

Pattern make_pattern(PatternId id, std::string_view tokens, std::string_view mask,
                     std::uint64_t frequency, Origin origin) {
  auto symbols = tokenize(tokens);
  if (!mask.empty()) {
    if (mask.size() != symbols.size()) {
      throw FormatError("rolemask length " + std::to_string(mask.size()) + " does not match " +
                        std::to_string(symbols.size()) + " tokens");
    }
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      symbols[i] = symbols[i].with_role(role_from_char(mask[i]));
    }
  }
  return Pattern(id, std::move(symbols), frequency, origin);
}

std::string to_string(std::span<const Symbol> symbols) {
  std::string out;
  for (const auto& s : symbols) {
    if (!out.empty()) out += ' ';
    out += s.text();
  }
  return out;
}

std::string rolemask(std::span<const Symbol> symbols) {
  std::string out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) out += role_char(s.role());
  return out;
}

bool same_content(std::span<const Symbol> a, std::span<const Symbol> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](Symbol x, Symbol y) {
    return x.token() == y.token() && x.role() == y.role();
  });
}

Grammar::Grammar(std::vector<Pattern> patterns) : patterns_(std::move(patterns)) {
  std::sort(patterns_.begin(), patterns_.end(),
            [](const Pattern& a, const Pattern& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < patterns_.size(); ++i) {
    if (patterns_[i].id == patterns_[i - 1].id) {
      throw std::invalid_argument("duplicate pattern id " + std::to_string(patterns_[i].id));
    }
  }
  for (const auto& p : patterns_) {
    for (const auto& s : p.symbols) {
      counts_[s.token()] += p.frequency;
      total_ += p.frequency;
      if (s.is_id()) id_tokens_.insert(s.token());
    }
  }
}

const Pattern* Grammar::find(PatternId id) const {
  auto it = std::lower_bound(patterns_.begin(), patterns_.end(), id,
                             [](const Pattern& p, PatternId v) { return p.id < v; });
  return it != patterns_.end() && it->id == id ? &*it : nullptr;
}

Grammar Grammar::with(Pattern p) const {
  auto copy = patterns_;
  copy.push_back(std::move(p));
  return Grammar(std::move(copy));
}

Grammar Grammar::without(PatternId id) const {
  auto copy = patterns_;
  std::erase_if(copy, [id](const Pattern& p) { return p.id == id; });
  return Grammar(std::move(copy));
}

}  // namespace sp
