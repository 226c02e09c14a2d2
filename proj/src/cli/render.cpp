#include "render.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <vector>

#include "tsq/correspondence_csv.hpp"
#include "tsq/errors.hpp"

namespace tsq::cli {

namespace {

using nlohmann::ordered_json;

std::string cell(const ordered_json& v, bool exact) {
  if (v.is_null()) return exact ? "" : "-";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) {
    if (exact) return format_number(v.get<double>());
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::vector<ordered_json> as_rows(const ordered_json& doc) {
  if (doc.is_array()) return {doc.begin(), doc.end()};
  return {doc};
}

void render_csv(std::ostream& out, const ordered_json& doc) {
  const auto rows = as_rows(doc);
  if (rows.empty()) return;
  bool first = true;
  for (const auto& [key, _] : rows.front().items()) {
    out << (first ? "" : ",") << key;
    first = false;
  }
  out << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& [_, value] : row.items()) {
      out << (first ? "" : ",") << cell(value, true);
      first = false;
    }
    out << '\n';
  }
}

void render_table(std::ostream& out, const ordered_json& doc) {
  if (doc.is_object()) {
    std::size_t width = 0;
    for (const auto& [key, _] : doc.items()) width = std::max(width, key.size());
    for (const auto& [key, value] : doc.items()) {
      out << key << std::string(width - key.size() + 2, ' ') << cell(value, false) << '\n';
    }
    return;
  }
  const auto rows = as_rows(doc);
  if (rows.empty()) return;
  std::vector<std::string> header;
  for (const auto& [key, _] : rows.front().items()) header.push_back(key);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> widths;
  for (const auto& h : header) widths.push_back(h.size());
  for (const auto& row : rows) {
    std::vector<std::string> line;
    std::size_t k = 0;
    for (const auto& [_, value] : row.items()) {
      line.push_back(cell(value, false));
      widths[k] = std::max(widths[k], line.back().size());
      ++k;
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t k = 0; k < line.size(); ++k) {
      out << std::string(widths[k] - line[k].size(), ' ') << line[k]
          << (k + 1 < line.size() ? "  " : "");
    }
    out << '\n';
  };
  emit(header);
  for (const auto& line : cells) emit(line);
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "table") return Format::Table;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw DomainError("format must be table, csv or json (got '" + text + "')");
}

void render(std::ostream& out, Format format, const ordered_json& doc) {
  switch (format) {
    case Format::Json:
      out << doc.dump(2) << '\n';
      break;
    case Format::Csv:
      render_csv(out, doc);
      break;
    case Format::Table:
      render_table(out, doc);
      break;
  }
}

}  // namespace tsq::cli
