#include "tsq/correspondence_csv.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "tsq/errors.hpp"

namespace tsq {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

double parse_field(std::string_view text, std::size_t line) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw MalformedInput(line, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", value);
  return buf.data();
}

void write_correspondence_csv(std::ostream& out, std::span<const CorrespondenceRecord> records) {
  out << kCorrespondenceHeader << '\n';
  for (const auto& r : records) {
    out << format_number(r.mean) << ',' << format_number(r.beta) << ',' << format_number(r.rho)
        << ',' << format_number(r.q) << '\n';
  }
}

std::vector<CorrespondenceRecord> read_correspondence_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<CorrespondenceRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (!header_seen) {
      if (view != kCorrespondenceHeader) {
        throw MalformedInput(line_no, std::string("expected header '") + kCorrespondenceHeader +
                                          "'");
      }
      header_seen = true;
      continue;
    }
    if (view.empty()) continue;

    std::array<double, 4> fields{};
    std::size_t start = 0;
    std::size_t count = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::string_view cell =
          view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (count == fields.size()) {
        throw MalformedInput(line_no, "too many columns (expected 4)");
      }
      fields[count++] = parse_field(cell, line_no);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != fields.size()) {
      throw MalformedInput(line_no, "expected 4 columns, found " + std::to_string(count));
    }
    out.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  if (!header_seen) {
    throw MalformedInput(0, "empty input: missing header");
  }
  if (out.empty()) {
    throw MalformedInput(line_no, "no data rows");
  }
  return out;
}

std::vector<CorrespondenceRecord> read_correspondence_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw MalformedInput(0, "cannot open '" + path + "'");
  }
  return read_correspondence_csv(in);
}

}  // namespace tsq
