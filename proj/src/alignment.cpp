#include "sp/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace sp {
namespace {

long long quantize(double bits) { return std::llround(bits * 1e6); }

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : v) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Occurrence identity that survives row reordering: pattern, instance, position.
std::uint64_t cell_hash(std::uint64_t pattern, std::uint64_t instance, std::uint64_t pos) {
  return mix((pattern << 40) ^ (instance << 24) ^ pos ^ 0x9e3779b97f4a7c15ULL);
}

constexpr std::uint64_t new_row_tag = 0xffffff;

}  // namespace

// ---------------------------------------------------------------------------
// MultipleAlignment

MultipleAlignment::MultipleAlignment(std::vector<AlignmentRow> rows,
                                     const std::vector<std::vector<std::uint32_t>>& labels,
                                     const CostModel& model) {
  if (rows.empty() || rows.front().pattern.has_value()) {
    throw std::logic_error("alignment row 0 must be the New row");
  }
  if (labels.size() != rows.size()) throw std::logic_error("label rows do not match alignment rows");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r > 0 && !rows[r].pattern) throw std::logic_error("Old rows must name their pattern");
    if (labels[r].size() != rows[r].symbols.size()) throw std::logic_error("label count mismatch");
  }

  // Old rows by pattern id; instances of one pattern keep their given order.
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin() + 1, order.end(),
                   [&](std::size_t a, std::size_t b) { return *rows[a].pattern < *rows[b].pattern; });

  rows_.reserve(rows.size());
  std::vector<const std::vector<std::uint32_t>*> row_labels;
  for (auto r : order) {
    rows_.push_back(std::move(rows[r]));
    row_labels.push_back(&labels[r]);
  }

  // Group occurrences by label.
  std::unordered_map<std::uint32_t, std::uint32_t> group_of_label;
  std::vector<std::vector<Cell>> groups;
  std::vector<std::vector<std::uint32_t>> group_of(rows_.size());
  for (std::uint32_t r = 0; r < rows_.size(); ++r) {
    group_of[r].resize(rows_[r].symbols.size());
    for (std::uint32_t p = 0; p < rows_[r].symbols.size(); ++p) {
      auto [it, inserted] = group_of_label.try_emplace((*row_labels[r])[p], static_cast<std::uint32_t>(groups.size()));
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(Cell{r, p});
      group_of[r][p] = it->second;
    }
  }

  for (auto& g : groups) {
    std::sort(g.begin(), g.end());
    if (g.size() > 1 && g.front().row != 0 &&
        std::all_of(g.begin(), g.end(), [&](Cell c) { return symbol(c).is_id(); })) {
      throw std::logic_error("column matches ID symbols with nothing but ID symbols");
    }
    const TokenId token = symbol(g.front()).token();
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (symbol(g[k]).token() != token) throw std::logic_error("column mixes different tokens");
      if (k > 0 && g[k].row == g[k - 1].row) throw std::logic_error("column holds two occurrences of one row");
      for (std::size_t l = 0; l < k; ++l) {
        if (g[l].row > 0 && g[l].pos == g[k].pos && rows_[g[l].row].pattern == rows_[g[k].row].pattern) {
          throw std::logic_error("column stacks one pattern position on itself");
        }
      }
    }
  }

  // Topological order of groups along every row; ties go to the group whose
  // first cell has the smallest (row, position).
  const auto n = groups.size();
  std::vector<std::vector<std::uint32_t>> succ(n);
  std::vector<std::uint32_t> indegree(n, 0);
  for (std::uint32_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t p = 1; p < group_of[r].size(); ++p) {
      succ[group_of[r][p - 1]].push_back(group_of[r][p]);
      ++indegree[group_of[r][p]];
    }
  }
  auto first_cell = [&](std::uint32_t g) { return groups[g].front(); };
  auto later = [&](std::uint32_t a, std::uint32_t b) { return first_cell(b) < first_cell(a); };
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, decltype(later)> ready(later);
  for (std::uint32_t g = 0; g < n; ++g) {
    if (indegree[g] == 0) ready.push(g);
  }
  std::vector<std::uint32_t> position_of_group(n);
  columns_.reserve(n);
  while (!ready.empty()) {
    auto g = ready.top();
    ready.pop();
    position_of_group[g] = static_cast<std::uint32_t>(columns_.size());
    columns_.push_back(std::move(groups[g]));
    for (auto s : succ[g]) {
      if (--indegree[s] == 0) ready.push(s);
    }
  }
  if (columns_.size() != n) throw std::logic_error("matches cross: rows cannot share one column order");

  column_of_.resize(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    column_of_[r].resize(group_of[r].size());
    for (std::size_t p = 0; p < group_of[r].size(); ++p) column_of_[r][p] = position_of_group[group_of[r][p]];
  }

  new_bits_ = sp::new_bits(*this, model);
  encoding_bits_ = sp::encoding_bits(*this, model);

  for (std::uint32_t p = 0; p < column_of_[0].size(); ++p) {
    if (is_matched_column(column_of_[0][p])) encoded_new_.push_back(p);
  }
  for (std::size_t r = 1; r < rows_.size(); ++r) pattern_ids_.push_back(*rows_[r].pattern);
  for (const auto& col : columns_) {
    matched_cells_ += col.size() > 1 ? col.size() : 0;
    if (col.size() == 1 && col.front().row > 0 && !symbol(col.front()).is_id()) ++unmatched_contents_;
  }
  for (std::size_t k = 0; k < encoded_new_.size(); ++k) {
    if (k == 0 || encoded_new_[k] != encoded_new_[k - 1] + 1) ++matched_runs_;
  }

  std::size_t cells = rows_.size();
  for (const auto& row : rows_) cells += row.symbols.size();
  key_.reserve(cells);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    key_.push_back(r == 0 ? 0xffffffffU : *rows_[r].pattern);
    key_.insert(key_.end(), column_of_[r].begin(), column_of_[r].end());
  }
}

MultipleAlignment MultipleAlignment::unmatched(std::vector<Symbol> new_symbols, const CostModel& model) {
  std::vector<std::uint32_t> labels(new_symbols.size());
  std::iota(labels.begin(), labels.end(), 0);
  std::vector<AlignmentRow> rows{AlignmentRow{std::nullopt, std::move(new_symbols)}};
  return MultipleAlignment(std::move(rows), {labels}, model);
}

std::vector<std::uint32_t> MultipleAlignment::residue() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < column_of_[0].size(); ++p) {
    if (!is_matched_column(column_of_[0][p])) out.push_back(p);
  }
  return out;
}

std::size_t MultipleAlignment::instances_of(PatternId id) const {
  return static_cast<std::size_t>(std::count_if(rows_.begin() + 1, rows_.end(),
                                                [id](const AlignmentRow& r) { return *r.pattern == id; }));
}

bool alignment_before(const MultipleAlignment& a, const MultipleAlignment& b) {
  if (quantize(a.score()) != quantize(b.score())) return a.score() > b.score();
  if (a.old_row_count() != b.old_row_count()) return a.old_row_count() < b.old_row_count();
  if (a.matched_runs() != b.matched_runs()) return a.matched_runs() < b.matched_runs();
  if (a.unmatched_contents() != b.unmatched_contents()) return a.unmatched_contents() < b.unmatched_contents();
  if (a.encoded_new() != b.encoded_new()) return a.encoded_new() < b.encoded_new();
  if (a.pattern_ids() != b.pattern_ids()) return a.pattern_ids() < b.pattern_ids();
  if (a.matched_cells() != b.matched_cells()) return a.matched_cells() > b.matched_cells();
  return a.key() < b.key();
}

double new_bits(const MultipleAlignment& a, const CostModel& model) {
  double bits = 0.0;
  const auto& new_row = a.rows()[0].symbols;
  for (std::uint32_t p = 0; p < new_row.size(); ++p) {
    if (a.is_matched_column(a.column_of(0, p))) bits += model.cost(new_row[p]);
  }
  return bits;
}

double encoding_bits(const MultipleAlignment& a, const CostModel& model) {
  double bits = 0.0;
  for (std::uint32_t r = 1; r < a.rows().size(); ++r) {
    const auto& row = a.rows()[r].symbols;
    for (std::uint32_t p = 0; p < row.size(); ++p) {
      if (row[p].is_id() && !a.is_matched_column(a.column_of(r, p))) bits += model.cost(row[p]);
    }
  }
  return bits;
}

double compression_difference(const MultipleAlignment& a, const CostModel& model) {
  return new_bits(a, model) - encoding_bits(a, model);
}

Encoding derive_encoding(const MultipleAlignment& a) {
  Encoding out;
  for (const auto& column : a.columns()) {
    if (column.size() != 1) continue;
    const Cell c = column.front();
    if (c.row == 0) continue;
    const Symbol s = a.symbol(c);
    if (s.is_id()) out.push_back(s);
  }
  return out;
}

std::vector<Symbol> surface(const MultipleAlignment& a, const Grammar& grammar) {
  std::vector<Symbol> out;
  for (const auto& column : a.columns()) {
    for (const Cell c : column) {
      if (c.row == 0) continue;
      const Symbol s = a.symbol(c);
      if (!s.is_id() && grammar.is_terminal(s.token())) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Search

namespace {

// What a new row can join in an existing alignment.
class JoinContext {
 public:
  JoinContext(const MultipleAlignment& a, const CostModel& model) : a_(a), model_(model) {
    const auto cols = a.columns();
    const std::size_t n = cols.size();
    words_ = (n + 63) / 64;
    reach_.assign(n * words_, 0);
    gainful_single_.resize(n);
    lone_content_.resize(n);
    contents_.resize(n);
    for (std::uint32_t c = 0; c < n; ++c) {
      by_token_[a.symbol(cols[c].front()).token()].push_back(c);
      const Cell only = cols[c].front();
      gainful_single_[c] = cols[c].size() == 1 && (only.row == 0 || a.symbol(only).is_id());
      lone_content_[c] = cols[c].size() == 1 && only.row > 0 && !a.symbol(only).is_id();
      contents_[c] = std::any_of(cols[c].begin(), cols[c].end(),
                                 [&](Cell cell) { return cell.row == 0 || !a.symbol(cell).is_id(); });
    }
    // Columns are in topological order, so successors always have larger
    // indices and a reverse sweep closes reachability.
    std::vector<std::vector<std::uint32_t>> succ(n);
    for (std::size_t r = 0; r < a.rows().size(); ++r) {
      const auto len = a.rows()[r].symbols.size();
      for (std::size_t p = 1; p < len; ++p) succ[a.column_of(r, p - 1)].push_back(a.column_of(r, p));
    }
    for (std::size_t c = n; c-- > 0;) {
      for (auto s : succ[c]) {
        reach_[c * words_ + s / 64] |= std::uint64_t{1} << (s % 64);
        for (std::size_t w = 0; w < words_; ++w) reach_[c * words_ + w] |= reach_[s * words_ + w];
      }
    }

    cell_sum_.assign(n, 0);
    std::vector<std::uint64_t> instance(a.rows().size(), 0);
    for (std::size_t r = 2; r < a.rows().size(); ++r) {
      if (a.rows()[r].pattern == a.rows()[r - 1].pattern) instance[r] = instance[r - 1] + 1;
    }
    for (std::uint32_t r = 0; r < a.rows().size(); ++r) {
      const std::uint64_t tag = r == 0 ? new_row_tag : *a.rows()[r].pattern;
      for (std::uint32_t p = 0; p < a.rows()[r].symbols.size(); ++p) {
        cell_sum_[a.column_of(r, p)] += cell_hash(tag, instance[r], p);
      }
    }
    for (auto h : cell_sum_) signature_ += mix(h);
  }

  // Structural signature of the alignment that adding `p` along `pairs` would
  // produce; equal signatures mean equal canonical structure.
  std::uint64_t signature_with(const Pattern& p, const std::vector<IndexPair>& pairs) const {
    const std::uint64_t instance = a_.instances_of(p.id);
    std::uint64_t sig = signature_;
    std::vector<bool> paired(p.size(), false);
    for (const auto& [pos, col] : pairs) {
      paired[pos] = true;
      sig += mix(cell_sum_[col] + cell_hash(p.id, instance, pos)) - mix(cell_sum_[col]);
    }
    for (std::uint32_t pos = 0; pos < p.size(); ++pos) {
      if (!paired[pos]) sig += mix(cell_hash(p.id, instance, pos));
    }
    return sig;
  }

  // Old contents cells left alone once `p` joins along `pairs`.
  std::size_t loose_after(const Pattern& p, const std::vector<IndexPair>& pairs) const {
    std::size_t loose = a_.unmatched_contents();
    std::vector<bool> paired(p.size(), false);
    for (const auto& [pos, col] : pairs) {
      paired[pos] = true;
      if (lone_content_[col]) --loose;
    }
    for (std::uint32_t pos = 0; pos < p.size(); ++pos) {
      if (!paired[pos] && !p.symbols[pos].is_id()) ++loose;
    }
    return loose;
  }

  // True if column `from` must precede column `to`.
  bool reaches(std::uint32_t from, std::uint32_t to) const {
    return (reach_[from * words_ + to / 64] >> (to % 64)) & 1U;
  }

  struct Option {
    std::uint32_t column;
    double gain;
    bool fills;  // joins an Old contents cell that is still alone
  };

  // Columns that occurrence `pos` of `p` may join with a positive change in CD.
  std::vector<Option> options(const Pattern& p, std::uint32_t pos) const {
    std::vector<Option> out;
    const Symbol s = p.symbols[pos];
    auto it = by_token_.find(s.token());
    if (it == by_token_.end()) return out;
    const double c = model_.cost(s);
    for (auto col : it->second) {
      double gain = (s.is_id() ? c : 0.0) + (gainful_single_[col] ? c : 0.0);
      if (gain <= 0.0 || (s.is_id() && !contents_[col])) continue;
      const auto& cells = a_.columns()[col];
      const bool self_stack = std::any_of(cells.begin(), cells.end(), [&](Cell cell) {
        return cell.row > 0 && cell.pos == pos && *a_.rows()[cell.row].pattern == p.id;
      });
      if (!self_stack) out.push_back(Option{col, gain, lone_content_[col]});
    }
    return out;
  }

 private:
  const MultipleAlignment& a_;
  const CostModel& model_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> reach_;
  std::vector<bool> gainful_single_;
  std::vector<bool> lone_content_;
  std::vector<bool> contents_;  // column holds a New or contents occurrence
  std::unordered_map<TokenId, std::vector<std::uint32_t>> by_token_;
  std::vector<std::uint64_t> cell_sum_;
  std::uint64_t signature_ = 0;
};

struct PartialJoin {
  std::vector<IndexPair> pairs;  // (pattern position, column)
  double score = 0.0;
  double bound = 0.0;
  std::size_t fills = 0;
};

// Equal gains: prefer joins that leave fewer Old contents cells alone.
bool join_before(const PartialJoin& a, const PartialJoin& b) {
  if (quantize(a.bound) != quantize(b.bound)) return a.bound > b.bound;
  if (quantize(a.score) != quantize(b.score)) return a.score > b.score;
  if (a.fills != b.fills) return a.fills > b.fills;
  if (a.pairs.size() != b.pairs.size()) return a.pairs.size() > b.pairs.size();
  return a.pairs < b.pairs;
}

// Matches pattern `p` against the column partial order of an alignment.
// Pairs must be orderable: a later pattern position may not join a column
// that is forced to precede an earlier pair's column.
std::vector<Hit> join_hits(const JoinContext& ctx, const Pattern& p, const MatchParams& params) {
  const auto m = static_cast<std::uint32_t>(p.size());
  std::vector<std::vector<JoinContext::Option>> options(m);
  std::vector<double> rest(m + 1, 0.0);
  bool any = false;
  for (std::uint32_t i = 0; i < m; ++i) {
    options[i] = ctx.options(p, i);
    any = any || !options[i].empty();
  }
  if (!any) return {};
  for (std::uint32_t i = m; i-- > 0;) {
    double best = 0.0;
    for (const auto& o : options[i]) best = std::max(best, o.gain);
    rest[i] = rest[i + 1] + best;
  }

  const std::size_t beam = std::max<std::size_t>(1, params.beam_width);
  std::vector<PartialJoin> states{PartialJoin{}};
  for (std::uint32_t i = 0; i < m; ++i) {
    if (options[i].empty()) continue;
    std::vector<PartialJoin> next;
    next.reserve(states.size() * (1 + options[i].size()));
    for (const auto& s : states) {
      next.push_back(s);
      for (const auto& o : options[i]) {
        const bool ok = std::none_of(s.pairs.begin(), s.pairs.end(), [&](const IndexPair& q) {
          return q.second == o.column || ctx.reaches(o.column, q.second);
        });
        if (!ok) continue;
        PartialJoin ext = s;
        ext.pairs.emplace_back(i, o.column);
        ext.score += o.gain;
        ext.fills += o.fills ? 1 : 0;
        next.push_back(std::move(ext));
      }
    }
    for (auto& s : next) s.bound = s.score + rest[i + 1];
    std::sort(next.begin(), next.end(), join_before);
    if (next.size() > beam) next.erase(next.begin() + static_cast<std::ptrdiff_t>(beam), next.end());
    states = std::move(next);
  }

  for (auto& s : states) s.bound = s.score;
  std::sort(states.begin(), states.end(), join_before);
  std::vector<Hit> hits;
  for (auto& s : states) {
    if (s.pairs.size() >= std::max<std::size_t>(1, params.min_pairs)) hits.push_back(Hit{std::move(s.pairs), s.score});
  }
  std::vector<Hit> kept;
  for (auto& h : hits) {
    if (kept.size() >= params.max_hits) break;
    auto sorted = h.pairs;
    std::sort(sorted.begin(), sorted.end());
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Hit& k) {
      auto ks = k.pairs;
      std::sort(ks.begin(), ks.end());
      return std::includes(ks.begin(), ks.end(), sorted.begin(), sorted.end());
    });
    if (!dominated) kept.push_back(std::move(h));
  }
  return kept;
}

double id_cost(const Pattern& p, const CostModel& model) {
  double bits = 0.0;
  for (const auto& s : p.symbols) {
    if (s.is_id()) bits += model.cost(s);
  }
  return bits;
}

MultipleAlignment add_row(const MultipleAlignment& a, const Pattern& p, const Hit& hit, const CostModel& model) {
  std::vector<AlignmentRow> rows(a.rows().begin(), a.rows().end());
  std::vector<std::vector<std::uint32_t>> labels(rows.size() + 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    labels[r].resize(rows[r].symbols.size());
    for (std::size_t q = 0; q < rows[r].symbols.size(); ++q) labels[r][q] = a.column_of(r, q);
  }
  auto fresh = static_cast<std::uint32_t>(a.columns().size());
  auto& mine = labels.back();
  mine.assign(p.size(), 0);
  std::vector<bool> paired(p.size(), false);
  for (const auto& [pos, column] : hit.pairs) {
    mine[pos] = column;
    paired[pos] = true;
  }
  for (std::size_t q = 0; q < p.size(); ++q) {
    if (!paired[q]) mine[q] = fresh++;
  }
  rows.push_back(AlignmentRow{p.id, p.symbols});
  return MultipleAlignment(std::move(rows), labels, model);
}

struct Proposal {
  std::size_t parent;
  const Pattern* pattern;
  Hit hit;
  double score;
  std::size_t hit_rank;
  std::uint64_t signature;
  std::size_t loose;
};

}  // namespace

std::vector<MultipleAlignment> build_alignments(std::span<const Symbol> new_symbols, const Grammar& grammar,
                                                const AlignParams& params, const CostModel& model) {
  if (new_symbols.empty()) return {};
  const std::size_t beam = std::max<std::size_t>(1, params.align_beam);

  std::vector<MultipleAlignment> frontier{
      MultipleAlignment::unmatched(std::vector<Symbol>(new_symbols.begin(), new_symbols.end()), model)};
  std::unordered_set<std::vector<std::uint32_t>, KeyHash> seen{frontier.front().key()};
  std::vector<MultipleAlignment> found;
  std::unordered_set<std::uint64_t> signatures;

  for (std::size_t stage = 0; stage < params.max_stages; ++stage) {
    std::vector<Proposal> proposals;
    for (std::size_t ai = 0; ai < frontier.size(); ++ai) {
      const auto& a = frontier[ai];
      const JoinContext ctx(a, model);
      for (const auto& p : grammar.patterns()) {
        if (a.instances_of(p.id) >= params.max_pattern_instances) continue;
        const double overhead = id_cost(p, model);
        auto hits = join_hits(ctx, p, params.match);
        for (std::size_t h = 0; h < hits.size(); ++h) {
          const double score = a.score() + hits[h].score - overhead;
          const auto sig = ctx.signature_with(p, hits[h].pairs);
          const auto loose = ctx.loose_after(p, hits[h].pairs);
          proposals.push_back(Proposal{ai, &p, std::move(hits[h]), score, h, sig, loose});
        }
      }
    }
    if (proposals.empty()) break;
    std::sort(proposals.begin(), proposals.end(), [](const Proposal& x, const Proposal& y) {
      if (quantize(x.score) != quantize(y.score)) return x.score > y.score;
      if (x.loose != y.loose) return x.loose < y.loose;
      if (x.parent != y.parent) return x.parent < y.parent;
      if (x.pattern->id != y.pattern->id) return x.pattern->id < y.pattern->id;
      return x.hit_rank < y.hit_rank;
    });

    // Build in rank order until the beam is full. Proposals tied with the
    // last admitted one are built too, up to a second beam's worth, so the
    // final ranking can break the tie.
    std::vector<MultipleAlignment> next;
    long long cut = 0;
    std::map<std::pair<std::vector<PatternId>, long long>, std::size_t> variants;
    for (const auto& prop : proposals) {
      if (next.size() >= beam && (quantize(prop.score) != cut || next.size() >= 2 * beam)) break;
      if (!signatures.insert(prop.signature).second) continue;
      // Cap the variants of one row set at one score so the beam keeps
      // room for structurally different alignments.
      auto rows = frontier[prop.parent].pattern_ids();
      rows.insert(std::upper_bound(rows.begin(), rows.end(), prop.pattern->id), prop.pattern->id);
      auto& count = variants[{std::move(rows), quantize(prop.score)}];
      if (count >= params.max_variants) continue;
      auto built = add_row(frontier[prop.parent], *prop.pattern, prop.hit, model);
      if (!seen.insert(built.key()).second) continue;
      ++count;
      next.push_back(std::move(built));
      if (next.size() <= beam) cut = quantize(prop.score);
    }
    if (next.empty()) break;
    std::sort(next.begin(), next.end(), alignment_before);
    if (next.size() > beam) next.erase(next.begin() + static_cast<std::ptrdiff_t>(beam), next.end());
    found.insert(found.end(), next.begin(), next.end());
    frontier = std::move(next);
  }

  std::erase_if(found, [](const MultipleAlignment& a) { return quantize(a.score()) <= 0; });
  std::sort(found.begin(), found.end(), alignment_before);
  // Variants that differ only in how unmatched material is interleaved
  // describe the same parse; the best-ranked one stands for them.
  {
    std::set<std::tuple<std::vector<PatternId>, std::vector<std::uint32_t>, std::vector<TokenId>>> parses;
    std::erase_if(found, [&](const MultipleAlignment& a) {
      std::vector<TokenId> code;
      for (const auto& s : derive_encoding(a)) code.push_back(s.token());
      return !parses.emplace(a.pattern_ids(), a.encoded_new(), std::move(code)).second;
    });
  }
  if (found.size() > params.max_alignments)
    found.erase(found.begin() + static_cast<std::ptrdiff_t>(params.max_alignments), found.end());
  return found;
}

std::vector<MultipleAlignment> build_alignments(std::span<const Pattern> new_patterns, const Grammar& grammar,
                                                const AlignParams& params, const CostModel& model) {
  std::vector<Symbol> row;
  for (const auto& p : new_patterns) row.insert(row.end(), p.symbols.begin(), p.symbols.end());
  return build_alignments(std::span<const Symbol>(row), grammar, params, model);
}

std::vector<double> relative_probabilities(std::span<const MultipleAlignment> alignments, const CostModel& model) {
  std::vector<double> out(alignments.size(), 0.0);
  std::vector<double> cost(alignments.size());
  std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < alignments.size(); ++i) {
    cost[i] = encoding_bits(alignments[i], model);
    groups[alignments[i].encoded_new()].push_back(i);
  }
  for (const auto& [encoded, members] : groups) {
    double least = cost[members.front()];
    for (auto i : members) least = std::min(least, cost[i]);
    double sum = 0.0;
    for (auto i : members) sum += std::exp2(least - cost[i]);
    for (auto i : members) out[i] = std::exp2(least - cost[i]) / sum;
  }
  return out;
}

std::vector<std::vector<Symbol>> generate(std::span<const Symbol> encoding, const Grammar& grammar,
                                          const AlignParams& params, const CostModel& model) {
  std::vector<std::vector<Symbol>> out;
  if (encoding.empty()) return out;
  for (const auto& a : build_alignments(encoding, grammar, params, model)) {
    auto s = surface(a, grammar);
    if (s.empty()) continue;
    const bool repeat = std::any_of(out.begin(), out.end(), [&](const std::vector<Symbol>& o) { return o == s; });
    if (!repeat) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sp
