// Command-line front end.
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sp/io.hpp"
#include "sp/learner.hpp"
#include "sp/matcher.hpp"
#include "sp/oracle.hpp"

namespace {

using namespace sp;

std::string fmt3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::vector<Symbol> first_line(const std::string& path) {
  auto patterns = load_corpus(path);
  if (patterns.empty()) throw FormatError(path + ": no symbols");
  return patterns.front().symbols;
}

std::vector<Symbol> concatenated(std::vector<Pattern> patterns, bool sort_new) {
  if (sort_new) {
    std::sort(patterns.begin(), patterns.end(),
              [](const Pattern& a, const Pattern& b) { return to_string(a) < to_string(b); });
  }
  std::vector<Symbol> row;
  for (const auto& p : patterns) row.insert(row.end(), p.symbols.begin(), p.symbols.end());
  return row;
}

std::vector<TokenId> tokens_of(std::span<const Symbol> symbols) {
  std::vector<TokenId> out;
  for (const auto& s : symbols) out.push_back(s.token());
  return out;
}

std::string encoding_text(const MultipleAlignment& a) { return to_string(derive_encoding(a)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pattern alignment, compression and learning"};
  app.require_subcommand(1);

  MatchParams match;
  AlignParams align;
  LearnParams learn_params;

  auto* cmd_match = app.add_subcommand("match", "best full and partial matches between two sequences");
  std::string driver_path, target_path;
  cmd_match->add_option("--driver", driver_path, "file whose first line is the driver")->required();
  cmd_match->add_option("--target", target_path, "file whose first line is the target")->required();
  cmd_match->add_option("--max-hits", match.max_hits)->check(CLI::PositiveNumber);
  cmd_match->add_option("--beam", match.beam_width)->check(CLI::PositiveNumber);

  auto* cmd_parse = app.add_subcommand("parse", "multiple alignments of New material against a grammar");
  std::string grammar_path, new_path, format = "text", orientation = "rows";
  bool sort_new = false;
  cmd_parse->add_option("--grammar", grammar_path)->required();
  cmd_parse->add_option("--new", new_path, "corpus-format file; lines are concatenated into row 0")->required();
  cmd_parse->add_option("--beam", align.align_beam)->check(CLI::PositiveNumber);
  cmd_parse->add_option("--alignments", align.max_alignments)->check(CLI::PositiveNumber);
  cmd_parse->add_option("--stages", align.max_stages)->check(CLI::PositiveNumber);
  cmd_parse->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  cmd_parse->add_option("--orientation", orientation)->check(CLI::IsMember({"rows", "columns"}));
  cmd_parse->add_flag("--sort-new", sort_new, "sort New lines before concatenating them");

  auto* cmd_generate = app.add_subcommand("generate", "surface forms for an encoding");
  std::string encoding_path;
  cmd_generate->add_option("--grammar", grammar_path)->required();
  cmd_generate->add_option("--encoding", encoding_path, "file whose first line is the encoding")->required();
  cmd_generate->add_option("--beam", align.align_beam)->check(CLI::PositiveNumber);

  auto* cmd_learn = app.add_subcommand("learn", "learn grammars from a corpus");
  std::string corpus_path, out_path;
  cmd_learn->add_option("--corpus", corpus_path)->required();
  cmd_learn->add_option("--out", out_path, "where to write the best grammar with at least one pattern")->required();
  cmd_learn->add_option("--grammar-beam", learn_params.grammar_beam)->check(CLI::PositiveNumber);
  cmd_learn->add_option("--align-beam", learn_params.align.align_beam)->check(CLI::PositiveNumber);
  cmd_learn->add_option("--rounds", learn_params.max_rounds)->check(CLI::PositiveNumber);

  auto* cmd_prob = app.add_subcommand("prob", "relative probabilities of alternative alignments");
  cmd_prob->add_option("--grammar", grammar_path)->required();
  cmd_prob->add_option("--new", new_path)->required();
  cmd_prob->add_option("--beam", align.align_beam)->check(CLI::PositiveNumber);
  cmd_prob->add_option("--alignments", align.max_alignments)->check(CLI::PositiveNumber);

  auto* cmd_cost = app.add_subcommand("cost", "grammar size G and corpus encoding size E in bits");
  cmd_cost->add_option("--grammar", grammar_path)->required();
  cmd_cost->add_option("--corpus", corpus_path);

  auto* cmd_verify = app.add_subcommand("verify", "compare heuristic results with brute force");
  cmd_verify->add_option("--grammar", grammar_path);
  cmd_verify->add_option("--new", new_path);
  cmd_verify->add_option("--corpus", corpus_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (cmd_match->parsed()) {
      const auto driver = first_line(driver_path);
      const auto target = first_line(target_path);
      std::vector<TokenId> alphabet = tokens_of(driver);
      const auto more = tokens_of(target);
      alphabet.insert(alphabet.end(), more.begin(), more.end());
      const CostModel model(Grammar{}, alphabet);
      const auto hits = find_hits(driver, target, match, model);
      for (std::size_t k = 0; k < hits.size(); ++k) {
        std::cout << "hit " << k + 1 << " score=" << fmt3(hits[k].score) << " pairs=" << hits[k].pairs.size() << ":";
        for (const auto& [i, j] : hits[k].pairs) std::cout << " " << i << ":" << j;
        std::cout << "\n";
      }
      return 0;
    }

    if (cmd_parse->parsed() || cmd_prob->parsed()) {
      const Grammar grammar = load_grammar(grammar_path);
      const auto row = concatenated(load_corpus(new_path), sort_new);
      const auto alphabet = tokens_of(row);
      const CostModel model(grammar, alphabet);
      const auto alignments = build_alignments(std::span<const Symbol>(row), grammar, align, model);
      if (cmd_prob->parsed()) {
        const auto p = relative_probabilities(alignments, model);
        for (std::size_t k = 0; k < alignments.size(); ++k) {
          std::cout << "alignment " << k + 1 << " CD=" << fmt3(alignments[k].score())
                    << " B_E=" << fmt3(alignments[k].encoding_bits()) << " p=" << fmt3(p[k])
                    << " encoding: " << encoding_text(alignments[k]) << "\n";
        }
        return 0;
      }
      if (format == "json") {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& a : alignments) out.push_back(to_json(a));
        std::cout << out.dump(2) << "\n";
        return 0;
      }
      const auto o = orientation == "rows" ? Orientation::rows : Orientation::columns;
      if (alignments.empty()) std::cout << "no alignment with positive compression\n";
      for (std::size_t k = 0; k < alignments.size(); ++k) {
        const auto& a = alignments[k];
        std::cout << "alignment " << k + 1 << " CD=" << fmt3(a.score()) << " B_N=" << fmt3(a.new_bits())
                  << " B_E=" << fmt3(a.encoding_bits()) << " encoding: " << encoding_text(a) << "\n\n"
                  << render_alignment(a, o) << "\n";
      }
      return 0;
    }

    if (cmd_generate->parsed()) {
      const Grammar grammar = load_grammar(grammar_path);
      const auto encoding = first_line(encoding_path);
      const CostModel model(grammar, tokens_of(encoding));
      const auto surfaces = generate(encoding, grammar, align, model);
      if (surfaces.empty()) std::cout << "no surface form\n";
      for (const auto& s : surfaces) std::cout << to_string(s) << "\n";
      return 0;
    }

    if (cmd_learn->parsed()) {
      const auto corpus = load_corpus(corpus_path);
      const auto result = learn(corpus, learn_params);
      const GrammarCandidate* chosen = nullptr;
      for (std::size_t k = 0; k < result.grammars.size(); ++k) {
        const auto& c = result.grammars[k];
        std::cout << "grammar " << k + 1 << " G=" << fmt3(c.g) << " E=" << fmt3(c.e) << " total=" << fmt3(c.total)
                  << " patterns=" << c.grammar.size() << "\n";
        for (const auto& p : c.grammar.patterns()) std::cout << "  " << p.frequency << " | " << to_string(p) << "\n";
        if (!chosen && !c.grammar.empty()) chosen = &c;
      }
      save_grammar(chosen ? chosen->grammar : Grammar{}, out_path);
      return 0;
    }

    if (cmd_cost->parsed()) {
      const Grammar grammar = load_grammar(grammar_path);
      if (corpus_path.empty()) {
        const double g = grammar_cost(grammar, CostModel(grammar));
        std::cout << "G=" << fmt3(g) << " E=n/a total=" << fmt3(g) << "\n";
        return 0;
      }
      const auto c = evaluate_grammar(grammar, summarize(load_corpus(corpus_path)), align);
      std::cout << "G=" << fmt3(c.g) << " E=" << fmt3(c.e) << " total=" << fmt3(c.total) << "\n";
      return 0;
    }

    if (cmd_verify->parsed()) {
      if (!grammar_path.empty() && !new_path.empty()) {
        const Grammar grammar = load_grammar(grammar_path);
        const auto row = concatenated(load_corpus(new_path), false);
        const CostModel model(grammar, tokens_of(row));
        const auto heuristic = build_alignments(std::span<const Symbol>(row), grammar, align, model);
        const auto exact = exhaustive_alignments(row, grammar, Bounds{}, model);
        const double h = heuristic.empty() ? 0.0 : heuristic.front().score();
        std::cout << "heuristic CD=" << fmt3(h) << " exhaustive CD=" << fmt3(exact.score())
                  << (std::abs(h - exact.score()) < 1e-6 ? " agree" : " differ") << "\n";
        return 0;
      }
      if (!corpus_path.empty()) {
        const auto corpus = load_corpus(corpus_path);
        const auto result = learn(corpus, learn_params);
        const auto exact = exhaustive_grammar(result.pool, corpus, Bounds{}, learn_params.align);
        const double h = result.grammars.front().total;
        std::cout << "compiled total=" << fmt3(h) << " exhaustive total=" << fmt3(exact.total)
                  << (std::abs(h - exact.total) < 1e-6 ? " agree" : " differ") << "\n";
        return 0;
      }
      std::cerr << "error: verify needs --grammar with --new, or --corpus\n\n" << cmd_verify->help();
      return 1;
    }
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
