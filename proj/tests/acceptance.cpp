// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "sp/oracle.hpp"
#include "support.hpp"

using namespace sp;
using namespace sp::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::optional<MultipleAlignment> best_parse(std::span<const Symbol> nw, const Grammar& g, const CostModel& m,
                                            AlignParams p = {}) {
  auto found = build_alignments(nw, g, p, m);
  if (found.empty()) return std::nullopt;
  return found.front();
}

bool full_match(const MultipleAlignment& a) { return a.residue().empty() && a.score() > 0.0; }

const GrammarCandidate* top_nonempty(const LearnResult& r) {
  for (const auto& c : r.grammars) {
    if (!c.grammar.empty()) return &c;
  }
  return nullptr;
}

Outcome parsing_fixture() {
  const auto g = load_grammar(fixture("fig2.sp"));
  const CostModel m(g);
  const auto nw = fig2_new();
  const auto t0 = std::chrono::steady_clock::now();
  const auto best = best_parse(nw, g, m);
  const double s = seconds_since(t0);
  if (!best) return {false, "no alignment"};
  const bool all = best->encoded_new().size() == nw.size();
  const bool rows = best->pattern_ids() == std::vector<PatternId>{1, 2, 3, 4, 5, 6, 7, 8};
  const bool connectors = matched_columns(*best) == fig2_columns();
  std::ostringstream d;
  d << best->encoded_new().size() << "/" << nw.size() << " New symbols matched, rows "
    << (rows ? "= fixture" : "differ") << ", connectors " << (connectors ? "= fixture" : "differ") << ", "
    << s << " s";
  return {all && rows && connectors && s < 5.0, d.str()};
}

Outcome recognition_fixture() {
  const auto g = load_grammar(fixture("fig1.sp"));
  const auto nw = load_corpus(fixture("fig1_new.txt"));
  const CostModel m(g, alphabet_of(nw));
  const auto t0 = std::chrono::steady_clock::now();
  const auto found = build_alignments(std::span<const Pattern>(nw), g, AlignParams{}, m);
  const double s = seconds_since(t0);
  if (found.empty()) return {false, "no alignment"};
  std::ostringstream d;
  d << found.front().old_row_count() << " taxa in the best alignment, " << s << " s";
  return {found.front().pattern_ids() == std::vector<PatternId>{1, 2, 3, 4, 5, 6} && s < 5.0, d.str()};
}

Outcome noisy_match() {
  const auto target = tokenize("X 1 n o p I N q r F O R M s A T t u v I w x O N y z #X");
  const auto driver = tokenize("I N F O R M A T I O N");
  const auto hits = find_hits(driver, target, MatchParams{}, CostModel{});
  const auto lcs = lcs_score(driver, target);
  const std::size_t best = hits.empty() ? 0 : hits.front().pairs.size();
  return {best == 11 && lcs == 11, "best hit pairs " + std::to_string(best) + ", lcs " + std::to_string(lcs)};
}

Outcome learning_fixture() {
  const auto corpus = fig45_corpus();
  const auto summary = summarize(corpus);
  const auto result = learn(corpus);
  const auto& top = result.grammars.front();
  const auto fig5 = load_grammar(fixture("fig5.sp"));
  const auto baseline = evaluate_grammar(Grammar(verbatim_baseline(CandidatePool{}, summary)), summary, {});
  const auto five = evaluate_grammar(fig5, summary, {});
  const bool iso = isomorphic(top.grammar, fig5);
  std::ostringstream d;
  d << "top grammar has " << top.grammar.size() << " patterns (G+E " << top.total << "), isomorphic "
    << (iso ? "yes" : "no") << "; verbatim " << baseline.total << "; five-pattern grammar " << five.total;
  return {iso && top.total < baseline.total, d.str()};
}

Outcome robustness() {
  const auto g = load_grammar(fixture("fig2.sp"));
  const auto clean = fig2_new();
  const CostModel probe(g, token_ids(clean));
  const auto reference = best_parse(clean, g, probe);
  if (!reference) return {false, "clean sentence has no alignment"};
  const auto noise = Symbol::intern("q", Role::content);
  int total = 0;
  int same = 0;
  std::string first_failure;
  auto check = [&](std::vector<Symbol> nw, const std::string& what) {
    ++total;
    std::vector<TokenId> alphabet = token_ids(nw);
    const CostModel m(g, alphabet);
    const auto best = best_parse(nw, g, m);
    if (best && best->pattern_ids() == reference->pattern_ids()) {
      ++same;
    } else if (first_failure.empty()) {
      first_failure = what;
    }
  };
  for (std::size_t i = 0; i < clean.size(); ++i) {
    auto del = clean;
    del.erase(del.begin() + static_cast<std::ptrdiff_t>(i));
    check(del, "delete " + std::to_string(i));
    auto sub = clean;
    sub[i] = noise;
    check(sub, "substitute " + std::to_string(i));
  }
  for (std::size_t i = 0; i <= clean.size(); ++i) {
    auto ins = clean;
    ins.insert(ins.begin() + static_cast<std::ptrdiff_t>(i), noise);
    check(ins, "insert " + std::to_string(i));
  }
  std::string d = std::to_string(same) + "/" + std::to_string(total) + " edits keep the pattern set";
  if (!first_failure.empty()) d += ", first miss: " + first_failure;
  return {same == total, d};
}

// Small word grammars in bounds: words `%c d l l [l] #c`, one sentence
// pattern `S %1 #1 %2 #2 #S` whose inner symbols are contents.
Grammar word_grammar(std::mt19937& rng) {
  std::vector<Pattern> patterns;
  PatternId id = 1;
  std::vector<Symbol> top{Symbol::intern("S", Role::id)};
  for (int c = 1; c <= 2; ++c) {
    const auto open = "%" + std::to_string(c);
    const auto close = "#" + std::to_string(c);
    for (int w = 0; w < 2; ++w) {
      std::vector<Symbol> s{Symbol::intern(open, Role::id), Symbol::intern(std::to_string(10 * c + w), Role::id)};
      const std::size_t n = 2 + rng() % 2;
      for (std::size_t k = 0; k < n; ++k) s.push_back(Symbol::intern(std::string(1, char('a' + rng() % 6)), Role::content));
      s.push_back(Symbol::intern(close, Role::id));
      patterns.emplace_back(id++, s, 1 + rng() % 3);
    }
    top.push_back(Symbol::intern(open, Role::content));
    top.push_back(Symbol::intern(close, Role::content));
  }
  top.push_back(Symbol::intern("#S", Role::id));
  patterns.emplace_back(id++, top);
  return Grammar(std::move(patterns));
}

std::vector<Symbol> word_sentence(const Grammar& g, std::mt19937& rng) {
  std::vector<Symbol> out;
  for (int c = 0; c < 2; ++c) {
    const auto& w = g.patterns()[static_cast<std::size_t>(2 * c) + rng() % 2];
    for (const auto& s : w.symbols) {
      if (!s.is_id()) out.push_back(s);
    }
  }
  return out;
}

Grammar letter_grammar(std::mt19937& rng) {
  std::vector<Pattern> out;
  const std::size_t n = 1 + rng() % 4;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Symbol> s{Symbol::intern("P" + std::to_string(k), Role::id)};
    const std::size_t len = 2 + rng() % 5;
    for (std::size_t j = 0; j < len; ++j) s.push_back(Symbol::intern(std::string(1, char('a' + rng() % 5)), Role::content));
    s.push_back(Symbol::intern("#P" + std::to_string(k), Role::id));
    out.emplace_back(static_cast<PatternId>(k + 1), s, 1 + rng() % 3);
  }
  return Grammar(std::move(out));
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(1234);
  int equal = 0;
  int above = 0;
  const int instances = 500;
  for (int t = 0; t < instances; ++t) {
    Grammar g;
    std::vector<Symbol> nw;
    if (t % 2 == 0) {
      g = letter_grammar(rng);
      const std::size_t len = 3 + rng() % 8;
      for (std::size_t k = 0; k < len; ++k) nw.push_back(Symbol::intern(std::string(1, char('a' + rng() % 5)), Role::content));
    } else {
      g = word_grammar(rng);
      nw = word_sentence(g, rng);
    }
    const CostModel m(g, token_ids(nw));
    const auto exact = exhaustive_alignments(nw, g, Bounds{}, m);
    const auto best = best_parse(nw, g, m);
    const double h = best ? best->score() : 0.0;
    if (std::abs(exact.score() - h) < 1e-6) ++equal;
    if (h > exact.score() + 1e-6) ++above;
  }

  // Compile versus exhaustive subsets on small learned pools.
  int compiled = 0;
  int within = 0;
  double worst = 0.0;
  for (int t = 0; t < 40 && compiled < 25; ++t) {
    const auto pg = make_phrase_grammar(rng, 2, 2, "abcdef");
    std::vector<Pattern> corpus;
    const std::size_t n = 2 + rng() % 2;
    for (std::size_t k = 0; k < n; ++k) {
      corpus.emplace_back(static_cast<PatternId>(k + 1), sample_sentence(pg, rng), 1, Origin::fresh);
    }
    const auto result = learn(corpus);
    if (compile_candidates(result.pool, summarize(corpus)).size() > Bounds{}.max_candidates) continue;
    const auto exact = exhaustive_grammar(result.pool, corpus, Bounds{});
    ++compiled;
    const double gap = (result.grammars.front().total - exact.total) / exact.total;
    worst = std::max(worst, gap);
    if (gap <= 0.05 + 1e-12) ++within;
  }
  const double s = seconds_since(t0);
  std::ostringstream d;
  d << "CD equal in " << equal << "/" << instances << " (heuristic above oracle: " << above << "); compile within 5% in "
    << within << "/" << compiled << " pools (worst gap " << 100.0 * worst << "%); " << s << " s";
  return {equal * 100 >= instances * 95 && above == 0 && compiled > 0 && within == compiled && s < 600.0, d.str()};
}

Outcome round_trip() {
  std::mt19937 rng(99);
  int ok = 0;
  const int sentences = 100;
  std::string first_failure;
  for (int t = 0; t < sentences; ++t) {
    // Every word spelled with letters of its own, so each sentence has one parse.
    const auto pg = make_phrase_grammar(rng, 3, 3, "abcdefghijklmnop", true, 3);
    const auto nw = sample_sentence(pg, rng);
    const CostModel m(pg.grammar, token_ids(nw));
    const auto best = best_parse(nw, pg.grammar, m);
    if (!best) continue;
    const auto code = derive_encoding(*best);
    const auto out = generate(code, pg.grammar, AlignParams{}, CostModel(pg.grammar, token_ids(code)));
    if (!out.empty() && token_ids(out.front()) == token_ids(nw)) {
      ++ok;
    } else if (first_failure.empty()) {
      first_failure = to_string(nw) + " -> " + to_string(code);
    }
  }
  std::string d = std::to_string(ok) + "/" + std::to_string(sentences) + " surfaces reproduced";
  if (!first_failure.empty()) d += ", first miss: " + first_failure;
  return {ok == sentences, d};
}

Outcome probability_suite() {
  std::mt19937 rng(7);
  int cases = 0;
  int groups = 0;
  int bad_sum = 0;
  int bad_order = 0;
  int bad_value = 0;
  for (int t = 0; t < 60; ++t) {
    const auto pg = make_phrase_grammar(rng, 2 + rng() % 2, 2 + rng() % 2, "abcdef");
    const auto nw = sample_sentence(pg, rng);
    const CostModel m(pg.grammar, token_ids(nw));
    AlignParams p;
    p.max_alignments = 25;
    const auto found = build_alignments(std::span<const Symbol>(nw), pg.grammar, p, m);
    if (found.empty()) continue;
    ++cases;
    const auto prob = relative_probabilities(found, m);
    std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> by_group;
    for (std::size_t k = 0; k < found.size(); ++k) by_group[found[k].encoded_new()].push_back(k);
    for (const auto& [key, members] : by_group) {
      ++groups;
      double sum = 0.0;
      double weight = 0.0;
      for (auto k : members) {
        sum += prob[k];
        weight += std::exp2(-found[k].encoding_bits());
      }
      if (std::abs(sum - 1.0) > 1e-9) ++bad_sum;
      for (auto k : members) {
        if (std::abs(prob[k] - std::exp2(-found[k].encoding_bits()) / weight) > 1e-9) ++bad_value;
        for (auto l : members) {
          if (found[k].encoding_bits() < found[l].encoding_bits() - 1e-9 && !(prob[k] > prob[l])) ++bad_order;
        }
      }
    }
  }
  std::ostringstream d;
  d << cases << " cases, " << groups << " groups; sum errors " << bad_sum << ", order errors " << bad_order
    << ", value errors " << bad_value;
  return {cases > 0 && bad_sum == 0 && bad_order == 0 && bad_value == 0, d.str()};
}

Outcome one_trial() {
  const std::vector<Pattern> corpus{Pattern(1, tokenize("t h a t b o y r u n s"), 1, Origin::fresh)};
  const auto result = learn(corpus);
  const auto* top = top_nonempty(result);
  if (!top) return {false, "nothing learned"};
  const CostModel m(top->grammar, alphabet_of(corpus));
  const auto best = best_parse(corpus[0].symbols, top->grammar, m);
  std::ostringstream d;
  d << "overall winner has " << result.grammars.front().grammar.size() << " patterns; best learned grammar "
    << to_string(top->grammar.patterns()[0]) << "; re-presentation CD " << (best ? best->score() : 0.0)
    << (best && full_match(*best) ? ", full match" : ", not a full match");
  return {best && full_match(*best), d.str()};
}

Outcome dirty_data() {
  const auto clean = fig45_corpus(10);
  auto dirty = clean;
  dirty.emplace_back(static_cast<PatternId>(dirty.size() + 1), tokenize("t h a t b o y r u x s"), 1, Origin::fresh);
  const auto a = learn(clean);
  const auto b = learn(dirty);
  const auto& wa = a.grammars.front().grammar;
  const auto& wb = b.grammars.front().grammar;
  std::ostringstream d;
  d << "clean winner " << wa.size() << " patterns, with corruption " << wb.size() << " patterns";
  return {isomorphic(wa, wb), d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"parsing fixture", parsing_fixture},    {"recognition fixture", recognition_fixture},
      {"noisy match", noisy_match},          {"learning fixture", learning_fixture},
      {"robustness", robustness},            {"oracle equivalence", oracle_equivalence},
      {"round trip", round_trip},            {"probabilities", probability_suite},
      {"one-trial learning", one_trial},     {"dirty data", dirty_data}};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s  %s: %s [%.1f s]\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
