#include "sp/learner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace sp {
namespace {

const Symbol& open_bracket() {
  static const Symbol s = Symbol::intern("<", Role::id);
  return s;
}
const Symbol& close_bracket() {
  static const Symbol s = Symbol::intern(">", Role::id);
  return s;
}

long long quantize(double bits) { return std::llround(bits * 1e6); }

// A reference `< cls >` to a class, all contents symbols.
void append_reference(std::vector<Symbol>& out, Symbol cls) {
  out.push_back(open_bracket().with_role(Role::content));
  out.push_back(cls.with_role(Role::content));
  out.push_back(close_bracket().with_role(Role::content));
}

}  // namespace

// ---------------------------------------------------------------------------
// CandidatePool

const PoolEntry* CandidatePool::find(PatternId id) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [id](const PoolEntry& e) { return e.pattern.id == id; });
  return it == entries_.end() ? nullptr : &*it;
}

Grammar CandidatePool::grammar() const {
  std::vector<Pattern> patterns;
  patterns.reserve(entries_.size());
  for (const auto& e : entries_) {
    Pattern p = e.pattern;
    p.frequency = e.derivations;
    patterns.push_back(std::move(p));
  }
  return Grammar(std::move(patterns));
}

void CandidatePool::reserve(std::span<const TokenId> tokens) {
  reserved_.insert(reserved_.end(), tokens.begin(), tokens.end());
  std::sort(reserved_.begin(), reserved_.end());
  reserved_.erase(std::unique(reserved_.begin(), reserved_.end()), reserved_.end());
}

Symbol CandidatePool::fresh(char prefix, std::uint64_t& counter) {
  for (;;) {
    ++counter;
    std::string text = prefix ? std::string(1, prefix) + std::to_string(counter) : std::to_string(counter);
    const TokenId t = intern_token(text);
    if (!std::binary_search(reserved_.begin(), reserved_.end(), t)) return Symbol(t, Role::id);
  }
}

Symbol CandidatePool::fresh_class() { return fresh('%', class_counter_); }
Symbol CandidatePool::fresh_discriminator() { return fresh('\0', discriminator_counter_); }

std::pair<PatternId, bool> CandidatePool::add(std::vector<Symbol> symbols) {
  for (auto& e : entries_) {
    if (same_content(e.pattern.symbols, symbols)) {
      ++e.derivations;
      return {e.pattern.id, false};
    }
  }
  const PatternId id = next_id_++;
  entries_.push_back(PoolEntry{Pattern(id, std::move(symbols), 1, Origin::derived), 1});
  return {id, true};
}

void CandidatePool::bump(PatternId id, std::uint64_t by) {
  for (auto& e : entries_) {
    if (e.pattern.id == id) {
      e.derivations += by;
      return;
    }
  }
  throw std::out_of_range("no pool pattern with id " + std::to_string(id));
}

std::vector<Symbol> wrap(Symbol cls, Symbol discriminator, std::span<const Symbol> body) {
  std::vector<Symbol> out{open_bracket(), cls.with_role(Role::id), discriminator.with_role(Role::id)};
  out.insert(out.end(), body.begin(), body.end());
  out.push_back(close_bracket());
  return out;
}

std::span<const Symbol> body_of(const Pattern& p) {
  const auto& s = p.symbols;
  if (s.size() < 5) return {};
  if (!(s[0] == open_bracket() && s[0].is_id() && s[1].is_id() && s[2].is_id())) return {};
  if (!(s.back() == close_bracket() && s.back().is_id())) return {};
  return std::span<const Symbol>(s).subspan(3, s.size() - 4);
}

// ---------------------------------------------------------------------------
// Phase one

namespace {

const PoolEntry* find_body(const CandidatePool& pool, std::span<const Symbol> body) {
  for (const auto& e : pool.entries()) {
    const auto b = body_of(e.pattern);
    if (!b.empty() && same_content(b, body)) return &e;
  }
  return nullptr;
}

Symbol class_of(const Pattern& p) { return p.symbols[1]; }

enum class Kind { matched, new_only, old_only, other };

struct Locus {
  std::vector<Symbol> fresh_side;  // unmatched New symbols
  std::vector<Symbol> old_side;    // unmatched surface symbols of Old rows
  std::set<std::uint32_t> old_rows;
  std::vector<Symbol> open_classes;  // classes referenced by unmatched Old references
};

struct Run {
  std::vector<Symbol> symbols;
  std::set<std::uint32_t> rows;
};

}  // namespace

std::vector<Pattern> derive_candidates(const MultipleAlignment& a, CandidatePool& pool) {
  const Grammar grammar = pool.grammar();
  const auto rows = a.rows();
  auto terminal_cell = [&](Cell c) {
    const Symbol s = a.symbol(c);
    return c.row > 0 && !s.is_id() && grammar.is_terminal(s.token());
  };
  std::vector<std::size_t> surface_size(rows.size(), 0);
  for (std::uint32_t r = 1; r < rows.size(); ++r) {
    for (std::uint32_t p = 0; p < rows[r].symbols.size(); ++p) surface_size[r] += terminal_cell(Cell{r, p}) ? 1 : 0;
  }

  // Alternate loci and runs: loci[i] precedes runs[i].
  std::vector<Locus> loci(1);
  std::vector<Run> runs;
  bool in_run = false;
  for (const auto& column : a.columns()) {
    std::optional<Symbol> fresh;
    std::set<std::uint32_t> old_rows;
    std::optional<Symbol> old_symbol;
    std::optional<Symbol> open_class;
    for (const Cell c : column) {
      if (c.row == 0) {
        fresh = a.symbol(c);
      } else if (terminal_cell(c)) {
        old_rows.insert(c.row);
        old_symbol = a.symbol(c).with_role(Role::content);
      } else {
        const auto& row = rows[c.row].symbols;
        if (column.size() == 1 && !row[c.pos].is_id() && c.pos > 0 && c.pos + 1 < row.size() && row[c.pos - 1] == open_bracket() &&
            row[c.pos + 1] == close_bracket()) {
          open_class = row[c.pos];
        }
      }
    }
    const Kind kind = fresh && !old_rows.empty() ? Kind::matched
                      : fresh                    ? Kind::new_only
                      : !old_rows.empty()        ? Kind::old_only
                                                 : Kind::other;
    if (kind == Kind::matched) {
      if (!in_run || runs.back().rows != old_rows) {
        if (in_run) loci.emplace_back();
        runs.push_back(Run{{}, old_rows});
        in_run = true;
      }
      runs.back().symbols.push_back(fresh->with_role(Role::content));
      continue;
    }
    if (kind == Kind::other && !open_class) continue;
    if (in_run) {
      loci.emplace_back();
      in_run = false;
    }
    auto& locus = loci.back();
    if (kind == Kind::new_only) locus.fresh_side.push_back(fresh->with_role(Role::content));
    if (kind == Kind::old_only) {
      locus.old_side.push_back(*old_symbol);
      locus.old_rows.insert(old_rows.begin(), old_rows.end());
    }
    if (open_class && (kind == Kind::other || kind == Kind::old_only)) locus.open_classes.push_back(*open_class);
  }
  if (in_run) loci.emplace_back();

  std::vector<Pattern> created;
  auto store = [&](std::vector<Symbol> symbols) {
    auto [id, is_new] = pool.add(std::move(symbols));
    if (is_new) created.push_back(pool.find(id)->pattern);
    return id;
  };

  const auto& new_row = rows[0].symbols;
  if (runs.empty()) {
    if (new_row.empty()) return created;
    std::vector<Symbol> body;
    for (const auto& s : new_row) body.push_back(s.with_role(Role::content));
    if (const auto* e = find_body(pool, body)) {
      pool.bump(e->pattern.id);
      return created;
    }
    store(wrap(pool.fresh_class(), pool.fresh_discriminator(), body));
    return created;
  }

  const bool full = std::all_of(loci.begin(), loci.end(), [](const Locus& l) {
    return l.fresh_side.empty() && l.old_side.empty();
  });
  if (full) {
    auto ids = a.pattern_ids();
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (auto id : ids) {
      if (pool.find(id)) pool.bump(id);
    }
    return created;
  }

  // Chunks first, then alternatives, then the abstract pattern.
  std::vector<Symbol> run_refs;
  for (const auto& run : runs) {
    const Pattern* whole = nullptr;
    if (run.rows.size() == 1) {
      const auto r = *run.rows.begin();
      const Pattern& p = *grammar.find(*rows[r].pattern);
      if (surface_size[r] == run.symbols.size() && !body_of(p).empty()) whole = &p;
    }
    if (whole) {
      pool.bump(whole->id);
      run_refs.push_back(class_of(*whole));
    } else if (const auto* e = find_body(pool, run.symbols)) {
      pool.bump(e->pattern.id);
      run_refs.push_back(class_of(e->pattern));
    } else {
      const Symbol cls = pool.fresh_class();
      store(wrap(cls, pool.fresh_discriminator(), run.symbols));
      run_refs.push_back(cls);
    }
  }

  std::vector<std::optional<Symbol>> locus_refs(loci.size());
  for (std::size_t i = 0; i < loci.size(); ++i) {
    const auto& locus = loci[i];
    if (locus.fresh_side.empty()) continue;
    std::optional<Symbol> cls;
    if (!locus.old_side.empty()) {
      if (locus.old_rows.size() == 1) {
        const auto r = *locus.old_rows.begin();
        const Pattern& p = *grammar.find(*rows[r].pattern);
        if (surface_size[r] == locus.old_side.size() && !body_of(p).empty()) cls = class_of(p);
      }
      if (!cls) {
        if (const auto* e = find_body(pool, locus.old_side)) cls = class_of(e->pattern);
      }
      if (!cls) {
        cls = pool.fresh_class();
        store(wrap(*cls, pool.fresh_discriminator(), locus.old_side));
      }
    } else if (locus.open_classes.size() == 1) {
      cls = locus.open_classes.front();
    }

    const auto* known = find_body(pool, locus.fresh_side);
    if (known && (!cls || class_of(known->pattern) == *cls)) {
      pool.bump(known->pattern.id);
      cls = class_of(known->pattern);
    } else {
      if (!cls) cls = pool.fresh_class();
      store(wrap(*cls, pool.fresh_discriminator(), locus.fresh_side));
    }
    locus_refs[i] = *cls;
  }

  std::vector<Symbol> abstract;
  std::size_t references = 0;
  for (std::size_t i = 0; i < loci.size(); ++i) {
    if (locus_refs[i]) {
      append_reference(abstract, *locus_refs[i]);
      ++references;
    }
    if (i < run_refs.size()) {
      append_reference(abstract, run_refs[i]);
      ++references;
    }
  }
  if (references >= 2) {
    if (const auto* e = find_body(pool, abstract)) {
      pool.bump(e->pattern.id);
    } else {
      store(wrap(pool.fresh_class(), pool.fresh_discriminator(), abstract));
    }
  }
  return created;
}

// ---------------------------------------------------------------------------
// Phase two

CorpusSummary summarize(std::span<const Pattern> corpus) {
  CorpusSummary out;
  std::map<std::vector<TokenId>, std::size_t> index;
  for (const auto& p : corpus) {
    std::vector<TokenId> key;
    for (const auto& s : p.symbols) key.push_back(s.token());
    auto [it, inserted] = index.try_emplace(key, out.sentences.size());
    if (inserted) {
      std::vector<Symbol> sentence;
      for (const auto& s : p.symbols) sentence.push_back(s.with_role(Role::content));
      out.sentences.push_back(std::move(sentence));
      out.counts.push_back(0);
    }
    out.counts[it->second] += 1;
  }
  out.alphabet = alphabet_of(corpus);
  return out;
}

namespace {

std::optional<MultipleAlignment> best_alignment(std::span<const Symbol> sentence, const Grammar& grammar,
                                                const AlignParams& params, const CostModel& model) {
  if (grammar.empty()) return std::nullopt;
  auto all = build_alignments(sentence, grammar, params, model);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

double sentence_cost(std::span<const Symbol> sentence, const Grammar& grammar, const AlignParams& params,
                     const CostModel& model) {
  auto best = best_alignment(sentence, grammar, params, model);
  if (!best) return raw_cost(sentence, model);
  double bits = best->encoding_bits();
  std::vector<Symbol> residue;
  for (auto p : best->residue()) residue.push_back(sentence[p]);
  if (!residue.empty()) bits += raw_cost(residue, model);
  return bits;
}

}  // namespace

double encoding_cost_E(const Grammar& grammar, const CorpusSummary& corpus, const AlignParams& params,
                       const CostModel& model) {
  double bits = 0.0;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    bits += static_cast<double>(corpus.counts[i]) * sentence_cost(corpus.sentences[i], grammar, params, model);
  }
  return bits;
}

double encoding_cost_E(const Grammar& grammar, std::span<const Pattern> corpus, const AlignParams& params,
                       const CostModel& model) {
  return encoding_cost_E(grammar, summarize(corpus), params, model);
}

GrammarCandidate evaluate_grammar(const Grammar& grammar, const CorpusSummary& corpus, const AlignParams& params) {
  const CostModel model(grammar, corpus.alphabet);
  GrammarCandidate out;
  for (const auto& p : grammar.patterns()) out.pattern_ids.push_back(p.id);
  out.grammar = grammar;
  out.g = grammar_cost(grammar, model);
  out.e = encoding_cost_E(grammar, corpus, params, model);
  out.total = out.g + out.e;
  return out;
}

Grammar recount_frequencies(const Grammar& grammar, const CorpusSummary& corpus, const AlignParams& params) {
  const CostModel model(grammar, corpus.alphabet);
  std::map<PatternId, std::uint64_t> usage;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    auto best = best_alignment(corpus.sentences[i], grammar, params, model);
    if (!best) continue;
    auto ids = best->pattern_ids();
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (auto id : ids) usage[id] += corpus.counts[i];
  }
  std::vector<Pattern> kept;
  for (const auto& p : grammar.patterns()) {
    auto it = usage.find(p.id);
    if (it == usage.end()) continue;
    Pattern q = p;
    q.frequency = it->second;
    kept.push_back(std::move(q));
  }
  return Grammar(std::move(kept));
}

GrammarCandidate evaluate_candidate(std::vector<Pattern> patterns, const CorpusSummary& corpus,
                                    const AlignParams& params) {
  return evaluate_grammar(recount_frequencies(Grammar(std::move(patterns)), corpus, params), corpus, params);
}

std::vector<Pattern> verbatim_baseline(CandidatePool pool, const CorpusSummary& corpus) {
  std::vector<Pattern> out;
  PatternId next = pool.next_id();
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& sentence = corpus.sentences[i];
    if (const auto* e = find_body(pool, sentence)) {
      Pattern p = e->pattern;
      p.frequency = corpus.counts[i];
      out.push_back(std::move(p));
      continue;
    }
    out.emplace_back(next++, wrap(pool.fresh_class(), pool.fresh_discriminator(), sentence), corpus.counts[i],
                     Origin::derived);
  }
  return out;
}

std::vector<Pattern> compile_candidates(const CandidatePool& pool, const CorpusSummary& corpus) {
  const Grammar stored = pool.grammar();
  std::vector<Pattern> out(stored.patterns().begin(), stored.patterns().end());
  for (auto& p : verbatim_baseline(pool, corpus)) {
    if (!pool.find(p.id)) out.push_back(std::move(p));
  }
  return out;
}

bool candidate_before(const GrammarCandidate& a, const GrammarCandidate& b) {
  if (quantize(a.total) != quantize(b.total)) return a.total < b.total;
  if (a.pattern_ids.size() != b.pattern_ids.size()) return a.pattern_ids.size() < b.pattern_ids.size();
  return a.pattern_ids < b.pattern_ids;
}

std::vector<GrammarCandidate> compile_grammars(const CandidatePool& pool, std::span<const Pattern> corpus,
                                               const LearnParams& params) {
  const CorpusSummary summary = summarize(corpus);
  if (summary.sentences.empty()) return {evaluate_grammar(Grammar{}, summary, params.align)};

  auto candidates = compile_candidates(pool, summary);
  {
    const CostModel model(Grammar(candidates), summary.alphabet);
    std::vector<std::pair<double, PatternId>> weight;
    for (const auto& p : candidates) weight.emplace_back(static_cast<double>(p.frequency) * raw_cost(p, model), p.id);
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (quantize(weight[x].first) != quantize(weight[y].first)) return weight[x].first > weight[y].first;
      return candidates[x].id < candidates[y].id;
    });
    std::vector<Pattern> sorted;
    for (auto i : order) sorted.push_back(candidates[i]);
    candidates = std::move(sorted);
  }
  auto pattern_by_id = [&](PatternId id) -> const Pattern& {
    return *std::find_if(candidates.begin(), candidates.end(), [id](const Pattern& p) { return p.id == id; });
  };

  // A search node is the set of candidate patterns offered; its grammar is
  // whatever of that set the corpus actually uses.
  struct Node {
    std::vector<PatternId> offered;
    GrammarCandidate result;
  };
  auto node_before = [](const Node& x, const Node& y) {
    if (quantize(x.result.total) != quantize(y.result.total)) return x.result.total < y.result.total;
    if (x.offered.size() != y.offered.size()) return x.offered.size() < y.offered.size();
    return x.offered < y.offered;
  };
  std::set<std::vector<PatternId>> seen;
  // Many offered sets recount to the same grammar; evaluate each once.
  std::map<std::vector<std::pair<PatternId, std::uint64_t>>, GrammarCandidate> evaluated;
  auto make_node = [&](std::vector<PatternId> offered) {
    std::sort(offered.begin(), offered.end());
    std::vector<Pattern> patterns;
    for (auto id : offered) patterns.push_back(pattern_by_id(id));
    Grammar used = recount_frequencies(Grammar(std::move(patterns)), summary, params.align);
    std::vector<std::pair<PatternId, std::uint64_t>> signature;
    for (const auto& p : used.patterns()) signature.emplace_back(p.id, p.frequency);
    auto it = evaluated.find(signature);
    if (it == evaluated.end()) it = evaluated.emplace(signature, evaluate_grammar(used, summary, params.align)).first;
    return Node{std::move(offered), it->second};
  };

  std::vector<Node> beam;
  seen.insert({});
  beam.push_back(make_node({}));
  std::vector<PatternId> baseline_ids;
  for (const auto& p : verbatim_baseline(pool, summary)) baseline_ids.push_back(p.id);
  std::sort(baseline_ids.begin(), baseline_ids.end());
  if (seen.insert(baseline_ids).second) beam.push_back(make_node(baseline_ids));
  std::sort(beam.begin(), beam.end(), node_before);

  const std::size_t width = std::max<std::size_t>(1, params.grammar_beam);
  const std::size_t rounds = params.max_rounds ? params.max_rounds : candidates.size();
  // Dropping a pattern takes one round to add its replacement and another
  // for the recount to discard it, so two idle rounds end the search.
  constexpr std::size_t patience = 2;
  std::size_t stale = 0;
  for (std::size_t round = 0; round < rounds; ++round) {
    std::vector<Node> grown;
    for (const auto& node : beam) {
      for (const auto& p : candidates) {
        if (std::binary_search(node.offered.begin(), node.offered.end(), p.id)) continue;
        auto offered = node.offered;
        offered.insert(std::upper_bound(offered.begin(), offered.end(), p.id), p.id);
        if (!seen.insert(offered).second) continue;
        grown.push_back(make_node(std::move(offered)));
      }
    }
    if (grown.empty()) break;
    std::vector<Node> merged = beam;
    merged.insert(merged.end(), std::make_move_iterator(grown.begin()), std::make_move_iterator(grown.end()));
    std::stable_sort(merged.begin(), merged.end(), node_before);
    // Offered sets that end up using the same patterns are one grammar.
    std::set<std::vector<PatternId>> grammars;
    std::erase_if(merged, [&](const Node& n) { return !grammars.insert(n.result.pattern_ids).second; });
    if (merged.size() > width) merged.resize(width);
    const bool entered = std::any_of(merged.begin(), merged.end(), [&](const Node& n) {
      return std::none_of(beam.begin(), beam.end(), [&](const Node& b) { return b.offered == n.offered; });
    });
    const bool improved = quantize(merged.front().result.total) < quantize(beam.front().result.total);
    stale = improved ? 0 : stale + 1;
    beam = std::move(merged);
    if (!entered || stale >= patience) break;
  }

  std::vector<GrammarCandidate> out;
  for (auto& node : beam) {
    const bool repeat = std::any_of(out.begin(), out.end(), [&](const GrammarCandidate& c) {
      return c.pattern_ids == node.result.pattern_ids;
    });
    if (!repeat) out.push_back(std::move(node.result));
  }
  std::stable_sort(out.begin(), out.end(), candidate_before);
  return out;
}

LearnResult learn(std::span<const Pattern> corpus, const LearnParams& params) {
  LearnResult out;
  const auto alphabet = alphabet_of(corpus);
  out.pool.reserve(alphabet);
  for (const auto& sentence : corpus) {
    if (sentence.symbols.empty()) throw std::invalid_argument("empty corpus pattern");
    std::vector<Symbol> row;
    for (const auto& s : sentence.symbols) row.push_back(s.with_role(Role::content));
    const Grammar grammar = out.pool.grammar();
    const CostModel model(grammar, alphabet);
    auto best = best_alignment(row, grammar, params.align, model);
    derive_candidates(best ? *best : MultipleAlignment::unmatched(row, model), out.pool);
  }
  out.grammars = compile_grammars(out.pool, corpus, params);
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism

bool isomorphic(const Grammar& a, const Grammar& b) {
  if (a.size() != b.size()) return false;
  auto codes = [](const Grammar& g) {
    std::set<TokenId> out;
    for (const auto& p : g.patterns()) {
      for (const auto& s : p.symbols) {
        if (s.is_id()) out.insert(s.token());
      }
    }
    return out;
  };
  const auto codes_a = codes(a);
  const auto codes_b = codes(b);
  if (codes_a.size() != codes_b.size()) return false;

  const auto pa = a.patterns();
  const auto pb = b.patterns();
  std::vector<std::size_t> order(pa.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pa[x].size() > pa[y].size(); });

  std::map<TokenId, TokenId> forward;
  std::map<TokenId, TokenId> backward;
  std::vector<bool> used(pb.size(), false);

  std::function<bool(std::size_t)> place = [&](std::size_t k) -> bool {
    if (k == order.size()) return true;
    const Pattern& p = pa[order[k]];
    for (std::size_t j = 0; j < pb.size(); ++j) {
      if (used[j] || pb[j].size() != p.size()) continue;
      const Pattern& q = pb[j];
      std::vector<TokenId> added;
      bool ok = true;
      for (std::size_t i = 0; i < p.size() && ok; ++i) {
        const Symbol x = p.symbols[i];
        const Symbol y = q.symbols[i];
        if (x.role() != y.role()) {
          ok = false;
          break;
        }
        const bool cx = codes_a.contains(x.token());
        const bool cy = codes_b.contains(y.token());
        if (cx != cy || (!cx && x.token() != y.token())) {
          ok = false;
          break;
        }
        if (!cx) continue;
        auto f = forward.find(x.token());
        auto r = backward.find(y.token());
        if (f == forward.end() && r == backward.end()) {
          forward.emplace(x.token(), y.token());
          backward.emplace(y.token(), x.token());
          added.push_back(x.token());
        } else if (f == forward.end() || r == backward.end() || f->second != y.token()) {
          ok = false;
        }
      }
      if (ok) {
        used[j] = true;
        if (place(k + 1)) return true;
        used[j] = false;
      }
      for (auto t : added) {
        backward.erase(forward[t]);
        forward.erase(t);
      }
    }
    return false;
  };
  return place(0);
}

}  // namespace sp
