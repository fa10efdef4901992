// Text formats: grammar files, corpus files, alignment renderings and JSON.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sp/alignment.hpp"

namespace sp {

/// Grammar file:
///
///   SPGRAMMAR 1
///   # comment
///   <freq> | <tok> <tok> ... | <rolemask>
///
/// Pattern ids are the ordinals of the pattern lines, from 1. Malformed
/// input throws FormatError naming the line and the field.
Grammar parse_grammar(std::string_view text);
std::string write_grammar(const Grammar& grammar);
Grammar load_grammar(const std::filesystem::path& path);
void save_grammar(const Grammar& grammar, const std::filesystem::path& path);

/// Corpus file: one New pattern per nonblank line, every symbol a contents
/// symbol. Ids are line ordinals among nonblank lines, from 1.
std::vector<Pattern> parse_corpus(std::string_view text);
std::vector<Pattern> load_corpus(const std::filesystem::path& path);

/// Whole file as text; throws FormatError when it cannot be read.
std::string read_file(const std::filesystem::path& path);

enum class Orientation { rows, columns };

/// Rows: one text line per alignment row, every alignment column in its own
/// slot, `|` joining the occurrences of a column down the page.
/// Columns: one text column per alignment row under a header of row
/// numbers, one line per alignment column, `-` joining its occurrences.
std::string render_alignment(const MultipleAlignment& a, Orientation orientation);

/// What a rendering says: the token rows and the cells of every column.
struct RenderedAlignment {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<Cell>> columns;  // in rendering order, cells sorted
};
RenderedAlignment reparse_rendering(std::string_view text, Orientation orientation);

nlohmann::json to_json(const Pattern& p);
nlohmann::json to_json(const MultipleAlignment& a);

/// Rebuilds an alignment from to_json output; scores are recomputed under `model`.
MultipleAlignment alignment_from_json(const nlohmann::json& j, const CostModel& model);

}  // namespace sp
