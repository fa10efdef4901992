#include <cmath>

#include "doctest.h"
#include "sp/cost_model.hpp"
#include "sp/pattern.hpp"

using namespace sp;

namespace {

// Hand-written reference for the smoothed cost.
double expected_cost(double f, double total, double alphabet, double alpha = 1.0) {
  return -std::log2((f + alpha) / (total + alpha * alphabet));
}

}  // namespace

TEST_CASE("interning is stable and equality ignores role") {
  const auto a = intern_token("apple");
  CHECK(intern_token("apple") == a);
  CHECK(token_text(a) == "apple");
  CHECK(Symbol(a, Role::id) == Symbol(a, Role::content));
  CHECK_FALSE(Symbol::intern("x", Role::content) == Symbol::intern("y", Role::content));
  CHECK_THROWS_AS(intern_token(""), FormatError);
  CHECK_THROWS_AS(intern_token("a b"), FormatError);
  CHECK_THROWS_AS(role_from_char('X'), FormatError);
}

TEST_CASE("make_pattern applies the role mask") {
  const auto p = make_pattern(3, "< %7 12 t h a t >", "IIICCCCI");
  REQUIRE(p.size() == 8);
  CHECK(p.symbols[0].is_id());
  CHECK(p.symbols[2].is_id());
  CHECK_FALSE(p.symbols[3].is_id());
  CHECK(p.symbols[7].is_id());
  CHECK(rolemask(p.view()) == "IIICCCCI");
  CHECK(to_string(p) == "< %7 12 t h a t >");
  CHECK_THROWS(make_pattern(1, "a b", "I"));
  CHECK_THROWS_AS(Pattern(1, {}), std::invalid_argument);
  CHECK_THROWS_AS(Pattern(1, tokenize("a"), 0), std::invalid_argument);
}

TEST_CASE("grammar keeps patterns by id and counts symbols by frequency") {
  const Grammar g({make_pattern(2, "b c", "", 3), make_pattern(1, "a b")});
  REQUIRE(g.size() == 2);
  CHECK(g.patterns()[0].id == 1);
  CHECK(g.find(2)->frequency == 3);
  CHECK(g.find(9) == nullptr);
  CHECK(g.total_count() == 1 + 1 + 3 + 3);
  CHECK(g.symbol_counts().at(intern_token("b")) == 4);
  CHECK_THROWS_AS(Grammar({make_pattern(1, "a"), make_pattern(1, "b")}), std::invalid_argument);

  const auto smaller = g.without(1);
  CHECK(smaller.size() == 1);
  CHECK(g.size() == 2);
  CHECK(smaller.with(make_pattern(5, "z")).size() == 2);
}

TEST_CASE("terminal tokens never occur as ID symbols") {
  const Grammar g({make_pattern(1, "N 6 a p p l e #N", "IICCCCCI"), make_pattern(2, "NP N #N #NP", "ICCI")});
  CHECK(g.is_terminal(intern_token("a")));
  CHECK_FALSE(g.is_terminal(intern_token("N")));
  CHECK_FALSE(g.is_terminal(intern_token("#N")));
}

TEST_CASE("cost model matches the smoothed frequency formula") {
  const Grammar g({make_pattern(1, "a b a", "", 2), make_pattern(2, "b c")});
  const CostModel m(g);
  // Counts: a 4, b 3, c 1; F = 8; alphabet 3; two patterns.
  CHECK(m.alphabet_size() == 3);
  CHECK(m.cost(intern_token("a")) == doctest::Approx(expected_cost(4, 8, 3)));
  CHECK(m.cost(intern_token("b")) == doctest::Approx(expected_cost(3, 8, 3)));
  CHECK(m.cost(intern_token("c")) == doctest::Approx(expected_cost(1, 8, 3)));
  CHECK(m.unseen_cost() == doctest::Approx(expected_cost(0, 8, 4)));
  CHECK(m.terminator_cost() == doctest::Approx(-std::log2(2.0 / 10.0)));
  CHECK(m.cost(intern_token("never-seen-token")) == doctest::Approx(m.unseen_cost()));

  // Rarer symbols cost more.
  CHECK(m.cost(intern_token("c")) > m.cost(intern_token("a")));
}

TEST_CASE("extra alphabet tokens are zero-count members") {
  const Grammar g({make_pattern(1, "a b")});
  const std::vector<TokenId> extra{intern_token("q"), intern_token("a")};
  const CostModel m(g, extra);
  CHECK(m.alphabet_size() == 3);
  CHECK(m.in_alphabet(intern_token("q")));
  CHECK(m.cost(intern_token("q")) == doctest::Approx(expected_cost(0, 2, 3)));
  CHECK(m.cost(intern_token("a")) == doctest::Approx(expected_cost(1, 2, 3)));
  CHECK(m.unseen_cost() == doctest::Approx(expected_cost(0, 2, 4)));
}

TEST_CASE("empty model stays finite") {
  const CostModel m;
  CHECK(m.alphabet_size() == 0);
  CHECK(std::isfinite(m.unseen_cost()));
  CHECK(m.unseen_cost() == doctest::Approx(1.0));  // 1 of 2 equally likely symbols
  CHECK(std::isfinite(m.terminator_cost()));
  CHECK(m.terminator_cost() > 0.0);
}

TEST_CASE("raw and grammar costs add up symbol costs and terminators") {
  const Grammar g({make_pattern(1, "a b", "", 1), make_pattern(2, "b", "", 1)});
  const CostModel m(g);
  const double ca = m.cost(intern_token("a"));
  const double cb = m.cost(intern_token("b"));
  const double t = m.terminator_cost();
  CHECK(raw_cost(g.patterns()[0], m) == doctest::Approx(ca + cb + t));
  CHECK(grammar_cost(g, m) == doctest::Approx(ca + 2 * cb + 2 * t));
  CHECK(grammar_cost(Grammar{}, CostModel{}) == 0.0);
}
