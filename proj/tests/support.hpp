// Shared fixtures and generators for the test programs.
#pragma once

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sp/io.hpp"
#include "sp/learner.hpp"

namespace sp::testing {

inline std::string fixture(const std::string& name) { return std::string(SP_FIXTURES) + "/" + name; }

/// (pattern id, position); id 0 is the New row.
using Occurrence = std::pair<PatternId, std::uint32_t>;
using ColumnSet = std::set<std::set<Occurrence>>;

/// The multi-row columns of an alignment, by pattern id rather than row
/// index (valid while each pattern appears at most once).
inline ColumnSet matched_columns(const MultipleAlignment& a) {
  ColumnSet out;
  for (const auto& col : a.columns()) {
    if (col.size() < 2) continue;
    std::set<Occurrence> cells;
    for (const auto& c : col) cells.insert({c.row == 0 ? 0 : *a.rows()[c.row].pattern, c.pos});
    out.insert(cells);
  }
  return out;
}

/// Connector structure of the parsing fixture: pattern ids 1..8 in the
/// order of fig2.sp, New = `t h e a p p l e s a r e s w e e t`.
inline ColumnSet fig2_columns() {
  const std::vector<std::vector<Occurrence>> groups = {
      {{0, 0}, {3, 2}},  {{0, 1}, {3, 3}},  {{0, 2}, {3, 4}},  {{3, 0}, {4, 2}},  {{3, 5}, {4, 3}},
      {{4, 0}, {6, 3}},  {{4, 6}, {6, 4}},  {{4, 4}, {2, 0}},  {{4, 5}, {2, 6}},  {{2, 1}, {8, 3}},
      {{2, 2}, {1, 0}},  {{2, 3}, {1, 1}},  {{2, 4}, {1, 8}},  {{0, 3}, {1, 3}},  {{0, 4}, {1, 4}},
      {{0, 5}, {1, 5}},  {{0, 6}, {1, 6}},  {{0, 7}, {1, 7}},  {{0, 8}, {2, 5}},  {{6, 1}, {8, 0}},
      {{6, 2}, {8, 2}},  {{6, 5}, {5, 0}},  {{6, 6}, {5, 6}},  {{5, 1}, {8, 4}},  {{0, 9}, {5, 3}},
      {{0, 10}, {5, 4}}, {{0, 11}, {5, 5}}, {{6, 7}, {7, 0}},  {{6, 8}, {7, 7}},  {{0, 12}, {7, 2}},
      {{0, 13}, {7, 3}}, {{0, 14}, {7, 4}}, {{0, 15}, {7, 5}}, {{0, 16}, {7, 6}}};
  ColumnSet out;
  for (const auto& g : groups) out.insert(std::set<Occurrence>(g.begin(), g.end()));
  return out;
}

inline std::vector<Symbol> fig2_new() { return tokenize("t h e a p p l e s a r e s w e e t"); }

inline std::vector<Pattern> fig45_corpus(int repetitions = 1) {
  std::vector<Pattern> out;
  PatternId id = 1;
  for (int r = 0; r < repetitions; ++r) {
    out.emplace_back(id++, tokenize("t h a t b o y r u n s"), 1, Origin::fresh);
    out.emplace_back(id++, tokenize("t h a t g i r l r u n s"), 1, Origin::fresh);
  }
  return out;
}

/// A machine-made phrase grammar in the learned style: `slots` word classes
/// of `words` alternatives each, every word `< %c d letters... >`, and one
/// sentence pattern `< S 0 < %1 > < %2 > ... >` referring to each class.
/// Word spellings are random, so classes may share letters unless
/// `distinct` asks for letters of each word that no other word uses. Word
/// frequencies are `frequency`, the sentence pattern's `words` times that.
struct PhraseGrammar {
  Grammar grammar;
  std::vector<std::vector<std::vector<Symbol>>> spellings;  // [slot][word]
};

inline PhraseGrammar make_phrase_grammar(std::mt19937& rng, std::size_t slots, std::size_t words,
                                         const std::string& letters = "abcdefghijklmnop", bool distinct = false,
                                         std::uint64_t frequency = 1) {
  PhraseGrammar out;
  std::vector<Pattern> patterns;
  PatternId id = 1;
  int discriminator = 1;
  std::uniform_int_distribution<std::size_t> letter(0, letters.size() - 1);
  std::uniform_int_distribution<std::size_t> length(2, 4);
  std::set<std::vector<TokenId>> used;
  std::vector<Symbol> sentence{Symbol::intern("<", Role::id), Symbol::intern("S", Role::id),
                               Symbol::intern("0", Role::id)};
  for (std::size_t s = 0; s < slots; ++s) {
    const auto cls = Symbol::intern("%" + std::to_string(s + 1), Role::id);
    out.spellings.emplace_back();
    while (out.spellings.back().size() < words) {
      std::vector<Symbol> body;
      std::vector<TokenId> key;
      const auto n = length(rng);
      for (std::size_t k = 0; k < n; ++k) {
        const std::string text = distinct ? "w" + std::to_string(id) + letters[letter(rng)] : std::string(1, letters[letter(rng)]);
        body.push_back(Symbol::intern(text, Role::content));
        key.push_back(body.back().token());
      }
      if (!used.insert(key).second) continue;
      const auto d = Symbol::intern(std::to_string(100 + discriminator++), Role::id);
      patterns.emplace_back(id++, wrap(cls, d, body), frequency);
      out.spellings.back().push_back(body);
    }
    sentence.push_back(Symbol::intern("<", Role::content));
    sentence.push_back(cls.with_role(Role::content));
    sentence.push_back(Symbol::intern(">", Role::content));
  }
  sentence.push_back(Symbol::intern(">", Role::id));
  patterns.emplace_back(id++, sentence, frequency * words);
  out.grammar = Grammar(std::move(patterns));
  return out;
}

inline std::vector<Symbol> sample_sentence(const PhraseGrammar& g, std::mt19937& rng) {
  std::vector<Symbol> out;
  for (const auto& slot : g.spellings) {
    const auto& w = slot[std::uniform_int_distribution<std::size_t>(0, slot.size() - 1)(rng)];
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

inline std::vector<TokenId> token_ids(std::span<const Symbol> s) {
  std::vector<TokenId> out;
  for (const auto& x : s) out.push_back(x.token());
  return out;
}

}  // namespace sp::testing
