#include "sp/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace sp {
namespace {

long long quantize(double bits) { return std::llround(bits * 1e6); }

struct Partial {
  std::vector<IndexPair> pairs;
  double score = 0.0;
  double bound = 0.0;
  int frontier() const { return pairs.empty() ? -1 : static_cast<int>(pairs.back().second); }
};

bool better_at_same_frontier(const Partial& a, const Partial& b) {
  if (quantize(a.score) != quantize(b.score)) return a.score > b.score;
  if (a.pairs.size() != b.pairs.size()) return a.pairs.size() > b.pairs.size();
  return a.pairs < b.pairs;
}

}  // namespace

bool hit_before(const Hit& a, const Hit& b) {
  if (quantize(a.score) != quantize(b.score)) return a.score > b.score;
  if (a.pairs.size() != b.pairs.size()) return a.pairs.size() > b.pairs.size();
  return a.pairs < b.pairs;
}

std::vector<Hit> find_hits(std::span<const Symbol> driver, std::span<const Symbol> target,
                           const MatchParams& params, const CostModel& model) {
  if (driver.empty() || target.empty()) return {};
  const std::size_t beam = std::max<std::size_t>(1, params.beam_width);

  std::unordered_map<TokenId, std::vector<std::uint32_t>> positions;
  for (std::uint32_t j = 0; j < target.size(); ++j) positions[target[j].token()].push_back(j);
  std::unordered_map<TokenId, int> in_driver;
  for (const auto& s : driver) in_driver[s.token()] = 1;

  // Optimistic remaining gain from either side.
  std::vector<double> driver_rest(driver.size() + 1, 0.0);
  for (std::size_t i = driver.size(); i-- > 0;) {
    const bool usable = positions.contains(driver[i].token());
    driver_rest[i] = driver_rest[i + 1] + (usable ? model.cost(driver[i]) : 0.0);
  }
  std::vector<double> target_rest(target.size() + 1, 0.0);
  for (std::size_t j = target.size(); j-- > 0;) {
    const bool usable = in_driver.contains(target[j].token());
    target_rest[j] = target_rest[j + 1] + (usable ? model.cost(target[j]) : 0.0);
  }

  std::vector<Partial> beam_states{Partial{}};
  for (std::size_t i = 0; i < driver.size(); ++i) {
    auto found = positions.find(driver[i].token());
    if (found == positions.end()) continue;
    const double w = model.cost(driver[i]);

    // Best partial per frontier; skipping keeps the state as it is.
    std::unordered_map<int, Partial> by_frontier;
    auto offer = [&](Partial p) {
      auto [it, inserted] = by_frontier.try_emplace(p.frontier(), p);
      if (!inserted && better_at_same_frontier(p, it->second)) it->second = std::move(p);
    };
    for (const auto& s : beam_states) {
      offer(s);
      for (std::uint32_t j : found->second) {
        if (static_cast<int>(j) <= s.frontier()) continue;
        Partial ext = s;
        ext.pairs.emplace_back(static_cast<std::uint32_t>(i), j);
        ext.score += w;
        offer(std::move(ext));
      }
    }

    beam_states.clear();
    for (auto& [f, p] : by_frontier) {
      p.bound = p.score + std::min(driver_rest[i + 1], target_rest[static_cast<std::size_t>(f + 1)]);
      beam_states.push_back(std::move(p));
    }
    std::sort(beam_states.begin(), beam_states.end(), [](const Partial& a, const Partial& b) {
      if (quantize(a.bound) != quantize(b.bound)) return a.bound > b.bound;
      if (a.frontier() != b.frontier()) return a.frontier() < b.frontier();
      return better_at_same_frontier(a, b);
    });
    if (beam_states.size() > beam) beam_states.resize(beam);
  }

  std::vector<Hit> hits;
  for (auto& s : beam_states) {
    if (s.pairs.size() >= std::max<std::size_t>(1, params.min_pairs)) {
      hits.push_back(Hit{std::move(s.pairs), s.score});
    }
  }
  std::sort(hits.begin(), hits.end(), hit_before);

  std::vector<Hit> kept;
  for (auto& h : hits) {
    if (kept.size() >= params.max_hits) break;
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Hit& k) {
      return std::includes(k.pairs.begin(), k.pairs.end(), h.pairs.begin(), h.pairs.end());
    });
    if (!dominated) kept.push_back(std::move(h));
  }
  return kept;
}

}  // namespace sp
