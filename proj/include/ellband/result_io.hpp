#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ellband {

// One value in a result row: a number, a string, or absent (e.g. no real
// crystal momentum inside a gap).
struct Cell {
  enum class Kind { number, text, null };
  Kind kind = Kind::null;
  double num = 0.0;
  std::string text;

  static Cell of(double v) { return Cell{Kind::number, v, {}}; }
  static Cell of(std::string s) { return Cell{Kind::text, 0.0, std::move(s)}; }
  static Cell none() { return Cell{}; }
};

// Tabular result plus metadata.  The CSV form is the header row followed by
// data rows (LF endings, no metadata); the JSON form is one object
// {"meta": {...}, "records": [...]}.  Numbers are serialized with 15
// significant digits in both encodings.
struct ResultDocument {
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(const std::string& key, double v) { meta.emplace_back(key, Cell::of(v)); }
  void add_meta(const std::string& key, const std::string& v) {
    meta.emplace_back(key, Cell::of(v));
  }
};

std::string format_number(double v);  // %.15g
std::string to_csv(const ResultDocument& doc);
std::string to_json(const ResultDocument& doc);

}  // namespace ellband
