#include "conefact/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "conefact/errors.hpp"

namespace conefact {

namespace {

constexpr const char* kMissing = "—";

std::string full_precision(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Display width counting the em dash as one column.
std::size_t display_width(const std::string& s) {
  std::size_t w = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++w;
  return w;
}

std::string pad(const std::string& s, std::size_t width) {
  return s + std::string(width > display_width(s) ? width - display_width(s) : 0, ' ');
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int parse_int(const std::string& s, std::size_t line) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("table csv line " + std::to_string(line) + ": bad integer '" + s + "'", line);
  return v;
}

}  // namespace

std::string format_two_significant(double v) {
  if (!std::isfinite(v)) return full_precision(v);
  if (v == 0.0) return "0";
  char buf[64];
  const double mag = std::abs(v);
  if (mag < 1e-4 || mag >= 1e6) {
    std::snprintf(buf, sizeof(buf), "%.1e", v);
    return buf;
  }
  const int exponent = static_cast<int>(std::floor(std::log10(mag)));
  const int decimals = std::max(0, 1 - exponent);
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

RenderedTable emit_table(const ResidualGrid& grid) {
  RenderedTable out;

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{""};
  for (int l : grid.ls) header.push_back("x^" + std::to_string(l));
  rows.push_back(header);
  for (int k : grid.ks) {
    std::vector<std::string> row{"soc_" + std::to_string(k)};
    for (int l : grid.ls) {
      auto it = grid.cells.find({k, l});
      row.push_back(it == grid.cells.end() ? kMissing : format_two_significant(it->second));
    }
    rows.push_back(row);
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], display_width(row[c]));
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += c + 1 == row.size() ? row[c] : pad(row[c], widths[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out.text += line + '\n';
  }

  out.csv = "k";
  for (int l : grid.ls) out.csv += ",l=" + std::to_string(l);
  out.csv += '\n';
  for (int k : grid.ks) {
    out.csv += std::to_string(k);
    for (int l : grid.ls) {
      out.csv += ',';
      auto it = grid.cells.find({k, l});
      if (it != grid.cells.end()) out.csv += full_precision(it->second);
    }
    out.csv += '\n';
  }
  return out;
}

ResidualGrid parse_table_csv(const std::string& csv) {
  ResidualGrid grid;
  std::istringstream in(csv);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (line_no == 1) {
      if (cells.empty() || cells[0] != "k") throw ParseError("table csv: header must start with 'k'", 0);
      for (std::size_t c = 1; c < cells.size(); ++c) {
        if (cells[c].rfind("l=", 0) != 0) throw ParseError("table csv: bad column header '" + cells[c] + "'", c);
        grid.ls.push_back(parse_int(cells[c].substr(2), line_no));
      }
      continue;
    }
    if (cells.size() != grid.ls.size() + 1)
      throw ParseError("table csv line " + std::to_string(line_no) + ": wrong column count", line_no);
    const int k = parse_int(cells[0], line_no);
    grid.ks.push_back(k);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) continue;
      double v = 0.0;
      auto res = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (res.ec != std::errc() || res.ptr != cells[c].data() + cells[c].size())
        throw ParseError("table csv line " + std::to_string(line_no) + ": bad number '" + cells[c] + "'", line_no);
      grid.cells[{k, grid.ls[c - 1]}] = v;
    }
  }
  if (line_no == 0) throw ParseError("table csv: empty input", 0);
  return grid;
}

}  // namespace conefact
