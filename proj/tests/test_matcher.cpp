#include <algorithm>
#include <random>

#include "doctest.h"
#include "sp/matcher.hpp"
#include "sp/oracle.hpp"

using namespace sp;

namespace {

std::vector<Symbol> random_sequence(std::mt19937& rng, std::size_t len, int alphabet) {
  std::uniform_int_distribution<int> pick(0, alphabet - 1);
  std::vector<Symbol> out;
  for (std::size_t k = 0; k < len; ++k) out.push_back(Symbol::intern(std::string(1, char('a' + pick(rng))), Role::content));
  return out;
}

bool valid_hit(const Hit& h, std::span<const Symbol> d, std::span<const Symbol> t) {
  for (std::size_t k = 0; k < h.pairs.size(); ++k) {
    const auto [i, j] = h.pairs[k];
    if (i >= d.size() || j >= t.size() || !(d[i] == t[j])) return false;
    if (k > 0 && (i <= h.pairs[k - 1].first || j <= h.pairs[k - 1].second)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("identical sequences match in full") {
  const auto a = tokenize("a b c");
  const CostModel m;
  const auto hits = find_hits(a, a, MatchParams{}, m);
  REQUIRE_FALSE(hits.empty());
  CHECK(hits[0].pairs.size() == 3);
  CHECK(hits[0].score == doctest::Approx(3 * m.unseen_cost()));
  CHECK(lcs_score(a, a) == 3);
}

TEST_CASE("disjoint alphabets give nothing") {
  const auto a = tokenize("a b c");
  const auto b = tokenize("x y z");
  CHECK(find_hits(a, b, MatchParams{}, CostModel{}).empty());
  CHECK(lcs_score(a, b) == 0);
}

TEST_CASE("noisy match pairs every symbol of the driver") {
  const auto target = tokenize("X 1 n o p I N q r F O R M s A T t u v I w x O N y z #X");
  const auto driver = tokenize("I N F O R M A T I O N");
  const auto hits = find_hits(driver, target, MatchParams{}, CostModel{});
  REQUIRE_FALSE(hits.empty());
  CHECK(hits[0].pairs.size() == 11);
  CHECK(valid_hit(hits[0], driver, target));
  CHECK(lcs_score(driver, target) == 11);
}

TEST_CASE("alternatives are ranked and not subsets of better hits") {
  const auto target = tokenize("a b c a b c");
  const auto driver = tokenize("a b c");
  MatchParams p;
  p.max_hits = 10;
  const auto hits = find_hits(driver, target, p, CostModel{});
  REQUIRE(hits.size() >= 2);
  for (std::size_t k = 1; k < hits.size(); ++k) CHECK_FALSE(hit_before(hits[k], hits[k - 1]));
  CHECK(hits[0].pairs == std::vector<IndexPair>{{0, 0}, {1, 1}, {2, 2}});
  CHECK(hits[1].pairs == std::vector<IndexPair>{{0, 0}, {1, 1}, {2, 5}});
  for (std::size_t k = 0; k < hits.size(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      CHECK_FALSE(std::includes(hits[l].pairs.begin(), hits[l].pairs.end(), hits[k].pairs.begin(), hits[k].pairs.end()));
    }
  }
  CHECK(hits.size() <= p.max_hits);
}

TEST_CASE("uniform costs: best hit length equals the LCS") {
  std::mt19937 rng(7);
  const CostModel m;  // every token unseen, so every pair is worth the same
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_sequence(rng, 1 + rng() % 12, 4);
    const auto b = random_sequence(rng, 1 + rng() % 12, 4);
    const auto hits = find_hits(a, b, MatchParams{}, m);
    const auto lcs = lcs_score(a, b);
    if (lcs == 0) {
      CHECK(hits.empty());
      continue;
    }
    REQUIRE_FALSE(hits.empty());
    CHECK(valid_hit(hits[0], a, b));
    CHECK(hits[0].pairs.size() == lcs);
  }
}

TEST_CASE("a narrow beam still returns valid hits") {
  std::mt19937 rng(11);
  MatchParams p;
  p.beam_width = 2;
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_sequence(rng, 10, 3);
    const auto b = random_sequence(rng, 20, 3);
    for (const auto& h : find_hits(a, b, p, CostModel{})) CHECK(valid_hit(h, a, b));
  }
}
