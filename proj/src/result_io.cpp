#include "ellband/result_io.hpp"

#include <cstdio>

namespace ellband {

namespace {

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

void append_json_cell(std::string& out, const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::number: out += format_number(c.num); break;
    case Cell::Kind::text: append_json_string(out, c.text); break;
    case Cell::Kind::null: out += "null"; break;
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string to_csv(const ResultDocument& doc) {
  std::string out;
  for (std::size_t i = 0; i < doc.columns.size(); ++i) {
    if (i) out += ',';
    out += doc.columns[i];
  }
  out += '\n';
  for (const auto& row : doc.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      switch (row[i].kind) {
        case Cell::Kind::number: out += format_number(row[i].num); break;
        case Cell::Kind::text: out += row[i].text; break;
        case Cell::Kind::null: break;
      }
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultDocument& doc) {
  std::string out = "{\n  \"meta\": {";
  for (std::size_t i = 0; i < doc.meta.size(); ++i) {
    out += i ? ", " : "";
    append_json_string(out, doc.meta[i].first);
    out += ": ";
    append_json_cell(out, doc.meta[i].second);
  }
  out += "},\n  \"records\": [\n";
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    out += "    {";
    for (std::size_t i = 0; i < doc.rows[r].size(); ++i) {
      out += i ? ", " : "";
      append_json_string(out, doc.columns[i]);
      out += ": ";
      append_json_cell(out, doc.rows[r][i]);
    }
    out += r + 1 < doc.rows.size() ? "},\n" : "}\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace ellband
