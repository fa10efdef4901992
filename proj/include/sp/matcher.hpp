// Flexible full and partial matching between two symbol sequences.
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sp/cost_model.hpp"
#include "sp/pattern.hpp"

namespace sp {

struct MatchParams {
  std::size_t beam_width = 200;  // partial hit-sets kept per stage
  std::size_t max_hits = 20;
  std::size_t min_pairs = 1;
};

using IndexPair = std::pair<std::uint32_t, std::uint32_t>;  // (driver index, target index)

/// One alignment of two sequences: order-preserving pairs of equal tokens.
struct Hit {
  std::vector<IndexPair> pairs;  // strictly increasing in both coordinates
  double score = 0.0;            // sum of c(s) over matched pairs
};

/// Finds good full and partial matches of `driver` against `target`.
///
/// The search walks the driver left to right. At each stage every partial
/// hit either skips the current driver symbol or pairs it with a later
/// equal target symbol. Only the best partial hit per target frontier
/// survives, and at most `beam_width` frontiers are kept, ranked by an
/// optimistic bound on their final score. Resident state is therefore
/// O(beam_width * (|driver| + |target|)).
///
/// Returns at most `max_hits` alternatives, best first (score, then pair
/// count, then lexicographically smaller pair list). Hits whose pairs are a
/// subset of a better returned hit are dropped.
std::vector<Hit> find_hits(std::span<const Symbol> driver, std::span<const Symbol> target,
                           const MatchParams& params, const CostModel& model);

inline std::vector<Hit> find_hits(const Pattern& driver, const Pattern& target,
                                  const MatchParams& params, const CostModel& model) {
  return find_hits(driver.view(), target.view(), params, model);
}

/// Ranking used for hits: true if `a` should be listed before `b`.
bool hit_before(const Hit& a, const Hit& b);

}  // namespace sp
