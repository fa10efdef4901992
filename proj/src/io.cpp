#include "sp/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sp {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

[[noreturn]] void fail(std::size_t line, std::string_view field, const std::string& what) {
  throw FormatError("line " + std::to_string(line) + ": " + std::string(field) + ": " + what);
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grammar and corpus files

Grammar parse_grammar(std::string_view text) {
  bool header = false;
  std::vector<Pattern> patterns;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t number = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (words(line) != std::vector<std::string>{"SPGRAMMAR", "1"}) fail(number, "header", "expected 'SPGRAMMAR 1'");
      header = true;
      continue;
    }
    const auto bar1 = line.find('|');
    const auto bar2 = bar1 == std::string_view::npos ? bar1 : line.find('|', bar1 + 1);
    if (bar2 == std::string_view::npos || line.find('|', bar2 + 1) != std::string_view::npos) {
      fail(number, "layout", "expected '<freq> | <tokens> | <rolemask>'");
    }
    const auto freq_text = trim(line.substr(0, bar1));
    const auto tokens = trim(line.substr(bar1 + 1, bar2 - bar1 - 1));
    const auto mask = trim(line.substr(bar2 + 1));

    std::uint64_t freq = 0;
    auto [end, ec] = std::from_chars(freq_text.data(), freq_text.data() + freq_text.size(), freq);
    if (freq_text.empty() || ec != std::errc{} || end != freq_text.data() + freq_text.size()) {
      fail(number, "frequency", "not a decimal integer: '" + std::string(freq_text) + "'");
    }
    if (freq == 0) fail(number, "frequency", "must be at least 1");

    const auto toks = words(tokens);
    if (toks.empty()) fail(number, "tokens", "no tokens");
    if (mask.size() != toks.size()) {
      fail(number, "rolemask",
           "length " + std::to_string(mask.size()) + " does not match " + std::to_string(toks.size()) + " tokens");
    }
    std::vector<Symbol> symbols;
    for (std::size_t k = 0; k < toks.size(); ++k) {
      Role role;
      try {
        role = role_from_char(mask[k]);
      } catch (const FormatError&) {
        fail(number, "rolemask", std::string("bad role '") + mask[k] + "', expected I or C");
      }
      symbols.push_back(Symbol::intern(toks[k], role));
    }
    patterns.emplace_back(static_cast<PatternId>(patterns.size() + 1), std::move(symbols), freq);
  }
  if (!header) fail(lines.size() + 1, "header", "missing 'SPGRAMMAR 1'");
  return Grammar(std::move(patterns));
}

std::string write_grammar(const Grammar& grammar) {
  std::string out = "SPGRAMMAR 1\n";
  for (const auto& p : grammar.patterns()) {
    out += std::to_string(p.frequency) + " | " + to_string(p) + " | " + rolemask(p.view()) + "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Grammar load_grammar(const std::filesystem::path& path) {
  try {
    return parse_grammar(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_grammar(const Grammar& grammar, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << write_grammar(grammar);
  if (!out) throw FormatError("cannot write " + path.string());
}

std::vector<Pattern> parse_corpus(std::string_view text) {
  std::vector<Pattern> out;
  for (const auto line : lines_of(text)) {
    if (trim(line).empty()) continue;
    out.emplace_back(static_cast<PatternId>(out.size() + 1), tokenize(line, Role::content), 1, Origin::fresh);
  }
  return out;
}

std::vector<Pattern> load_corpus(const std::filesystem::path& path) { return parse_corpus(read_file(path)); }

// ---------------------------------------------------------------------------
// Renderings

namespace {

// Rows touched by each column, as [first, last].
std::vector<std::pair<std::uint32_t, std::uint32_t>> column_spans(const MultipleAlignment& a) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const auto& col : a.columns()) out.emplace_back(col.front().row, col.back().row);
  return out;
}

std::string render_rows(const MultipleAlignment& a) {
  const auto cols = a.columns();
  const auto spans = column_spans(a);
  const std::size_t nrows = a.rows().size();
  const std::size_t label_width = std::to_string(nrows - 1).size() + 2;

  std::vector<std::size_t> start(cols.size());
  std::size_t x = label_width;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    start[c] = x;
    std::size_t w = 1;
    for (const Cell cell : cols[c]) w = std::max(w, a.symbol(cell).text().size());
    x += w + 1;
  }

  auto trim_right = [](std::string s) {
    s.erase(s.find_last_not_of(' ') + 1);
    return s;
  };

  std::string out;
  for (std::uint32_t r = 0; r < nrows; ++r) {
    std::string line(x, ' ');
    const auto label = std::to_string(r);
    line.replace(0, label.size(), label);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (spans[c].first < r && r < spans[c].second) line[start[c]] = '|';
    }
    const auto& row = a.rows()[r].symbols;
    for (std::uint32_t p = 0; p < row.size(); ++p) {
      const auto c = a.column_of(r, p);
      line.replace(start[c], row[p].text().size(), row[p].text());
    }
    out += trim_right(line) + "\n";
    if (r + 1 == nrows) break;
    std::string link(x, ' ');
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (spans[c].first <= r && r + 1 <= spans[c].second) link[start[c]] = '|';
    }
    out += trim_right(link) + "\n";
  }
  return out;
}

std::string render_columns(const MultipleAlignment& a) {
  const auto cols = a.columns();
  const auto spans = column_spans(a);
  const std::size_t nrows = a.rows().size();
  std::size_t width = 2;
  for (const auto& row : a.rows()) {
    for (const auto& s : row.symbols) width = std::max(width, s.text().size() + 3);
  }
  width = std::max(width, std::to_string(nrows - 1).size() + 2);

  std::string out;
  std::string header;
  for (std::size_t r = 0; r < nrows; ++r) {
    auto label = std::to_string(r);
    label.resize(width, ' ');
    header += label;
  }
  header.erase(header.find_last_not_of(' ') + 1);
  out += header + "\n\n";

  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::vector<std::string> field(nrows);
    for (const Cell cell : cols[c]) field[cell.row] = a.symbol(cell).text();
    std::string line;
    for (std::uint32_t r = 0; r < nrows; ++r) {
      std::string f = field[r];
      const bool joined = spans[c].first <= r && r < spans[c].second;
      if (joined) {
        f += f.empty() ? "-" : " ";
        f.resize(width, '-');
      } else {
        f.resize(width, ' ');
      }
      line += f;
    }
    line.erase(line.find_last_not_of(' ') + 1);
    out += line + "\n";
  }
  return out;
}

RenderedAlignment reparse_rows(std::string_view text) {
  RenderedAlignment out;
  // Token lines alternate with link lines.
  std::vector<std::vector<std::pair<std::size_t, std::string>>> cells;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); i += 2) {
    const auto line = lines[i];
    std::vector<std::pair<std::size_t, std::string>> row;
    std::size_t k = line.find(' ');
    if (k == std::string_view::npos) throw FormatError("rendering line " + std::to_string(i + 1) + ": no symbols");
    while (k < line.size()) {
      k = line.find_first_not_of(' ', k);
      if (k == std::string_view::npos) break;
      auto e = line.find(' ', k);
      if (e == std::string_view::npos) e = line.size();
      const std::string word(line.substr(k, e - k));
      if (word != "|") row.emplace_back(k, word);
      k = e;
    }
    cells.push_back(std::move(row));
  }
  std::set<std::size_t> offsets;
  for (const auto& row : cells) {
    for (const auto& [x, w] : row) offsets.insert(x);
  }
  std::map<std::size_t, std::size_t> slot;
  for (auto x : offsets) slot.emplace(x, slot.size());
  out.columns.resize(slot.size());
  for (std::uint32_t r = 0; r < cells.size(); ++r) {
    std::vector<std::string> tokens;
    for (std::uint32_t p = 0; p < cells[r].size(); ++p) {
      tokens.push_back(cells[r][p].second);
      out.columns[slot[cells[r][p].first]].push_back(Cell{r, p});
    }
    out.rows.push_back(std::move(tokens));
  }
  return out;
}

RenderedAlignment reparse_columns(std::string_view text) {
  RenderedAlignment out;
  const auto lines = lines_of(text);
  if (lines.empty()) throw FormatError("rendering: empty");
  const auto header = words(lines[0]);
  std::size_t width = 0;
  if (header.size() > 1) {
    width = lines[0].find(header[1], header[0].size());
  } else {
    width = std::max<std::size_t>(lines[0].size(), 1);
    for (std::size_t i = 2; i < lines.size(); ++i) width = std::max(width, lines[i].size());
  }
  const std::size_t nrows = header.size();
  out.rows.resize(nrows);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto line = lines[i];
    std::vector<Cell> column;
    for (std::uint32_t r = 0; r < nrows; ++r) {
      const std::size_t at = r * width;
      if (at >= line.size()) break;
      const auto field = line.substr(at, std::min(width, line.size() - at));
      const auto w = words(field);
      if (w.empty() || w.front().find_first_not_of('-') == std::string::npos) continue;
      column.push_back(Cell{r, static_cast<std::uint32_t>(out.rows[r].size())});
      out.rows[r].push_back(w.front());
    }
    out.columns.push_back(std::move(column));
  }
  return out;
}

}  // namespace

std::string render_alignment(const MultipleAlignment& a, Orientation orientation) {
  return orientation == Orientation::rows ? render_rows(a) : render_columns(a);
}

RenderedAlignment reparse_rendering(std::string_view text, Orientation orientation) {
  return orientation == Orientation::rows ? reparse_rows(text) : reparse_columns(text);
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const Pattern& p) {
  std::vector<std::string> tokens;
  for (const auto& s : p.symbols) tokens.push_back(s.text());
  return {{"id", p.id}, {"frequency", p.frequency}, {"tokens", tokens}, {"roles", rolemask(p.view())}};
}

nlohmann::json to_json(const MultipleAlignment& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : a.rows()) {
    std::vector<std::string> tokens;
    for (const auto& s : row.symbols) tokens.push_back(s.text());
    nlohmann::json j = {{"tokens", tokens}, {"roles", rolemask(row.symbols)}};
    j["pattern"] = row.pattern ? nlohmann::json(*row.pattern) : nlohmann::json(nullptr);
    rows.push_back(std::move(j));
  }
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& col : a.columns()) {
    nlohmann::json c = nlohmann::json::array();
    for (const Cell cell : col) c.push_back({cell.row, cell.pos});
    columns.push_back(std::move(c));
  }
  std::vector<std::string> encoding;
  for (const auto& s : derive_encoding(a)) encoding.push_back(s.text());
  return {{"rows", rows},
          {"columns", columns},
          {"compression_difference", a.score()},
          {"new_bits", a.new_bits()},
          {"encoding_bits", a.encoding_bits()},
          {"encoding", encoding}};
}

MultipleAlignment alignment_from_json(const nlohmann::json& j, const CostModel& model) {
  try {
    std::vector<AlignmentRow> rows;
    for (const auto& row : j.at("rows")) {
      const auto tokens = row.at("tokens").get<std::vector<std::string>>();
      const auto roles = row.at("roles").get<std::string>();
      if (roles.size() != tokens.size()) throw FormatError("alignment json: role count mismatch");
      AlignmentRow out;
      if (!row.at("pattern").is_null()) out.pattern = row.at("pattern").get<PatternId>();
      for (std::size_t k = 0; k < tokens.size(); ++k) out.symbols.push_back(Symbol::intern(tokens[k], role_from_char(roles[k])));
      rows.push_back(std::move(out));
    }
    std::vector<std::vector<std::uint32_t>> labels(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) labels[r].assign(rows[r].symbols.size(), 0xffffffffU);
    const auto& columns = j.at("columns");
    for (std::uint32_t c = 0; c < columns.size(); ++c) {
      for (const auto& cell : columns[c]) {
        const auto r = cell.at(0).get<std::size_t>();
        const auto p = cell.at(1).get<std::size_t>();
        if (r >= rows.size() || p >= rows[r].symbols.size()) throw FormatError("alignment json: cell out of range");
        labels[r][p] = c;
      }
    }
    for (const auto& row : labels) {
      if (std::find(row.begin(), row.end(), 0xffffffffU) != row.end()) {
        throw FormatError("alignment json: occurrence without a column");
      }
    }
    return MultipleAlignment(std::move(rows), labels, model);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("alignment json: ") + e.what());
  }
}

}  // namespace sp
