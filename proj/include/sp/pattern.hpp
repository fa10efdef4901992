// Patterns and grammars: the only knowledge structures in the system.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sp/symbol.hpp"

namespace sp {

using PatternId = std::uint32_t;

enum class Origin : std::uint8_t { fresh, old, derived };

/// An ordered, nonempty array of symbol occurrences with a frequency of
/// occurrence. New data, stored knowledge, encodings and learned patterns
/// all use this one type.
struct Pattern {
  PatternId id = 0;
  std::vector<Symbol> symbols;
  std::uint64_t frequency = 1;
  Origin origin = Origin::old;

  Pattern() = default;
  /// Throws std::invalid_argument on an empty symbol list or zero frequency.
  Pattern(PatternId id, std::vector<Symbol> symbols, std::uint64_t frequency = 1,
          Origin origin = Origin::old);

  std::size_t size() const { return symbols.size(); }
  std::span<const Symbol> view() const { return symbols; }
};

/// Builds a pattern from whitespace-separated tokens. `rolemask` is a string
/// over {I, C} of the same length as the token list; empty means all contents.
Pattern make_pattern(PatternId id, std::string_view tokens, std::string_view rolemask = {},
                     std::uint64_t frequency = 1, Origin origin = Origin::old);

/// Splits on whitespace and interns each token with `role`.
std::vector<Symbol> tokenize(std::string_view text, Role role = Role::content);

std::string to_string(std::span<const Symbol> symbols);
inline std::string to_string(const Pattern& p) { return to_string(p.view()); }
std::string rolemask(std::span<const Symbol> symbols);

/// Same tokens and roles, position by position.
bool same_content(std::span<const Symbol> a, std::span<const Symbol> b);

/// An immutable collection of Old patterns keyed by id, together with
/// frequency-weighted symbol counts. Mutation means building a new Grammar.
class Grammar {
 public:
  Grammar() = default;
  /// Throws std::invalid_argument on duplicate pattern ids.
  explicit Grammar(std::vector<Pattern> patterns);

  std::span<const Pattern> patterns() const { return patterns_; }
  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  const Pattern* find(PatternId id) const;

  const std::unordered_map<TokenId, std::uint64_t>& symbol_counts() const { return counts_; }
  std::uint64_t total_count() const { return total_; }

  /// True when `token` never occurs in the ID role anywhere in the grammar,
  /// i.e. it is surface material rather than a code or reference.
  bool is_terminal(TokenId token) const { return !id_tokens_.contains(token); }

  Grammar with(Pattern p) const;
  Grammar without(PatternId id) const;

 private:
  std::vector<Pattern> patterns_;  // sorted by id
  std::unordered_map<TokenId, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::unordered_set<TokenId> id_tokens_;
};

}  // namespace sp
