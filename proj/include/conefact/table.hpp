#pragma once

// Best-residual grids over (k, l) for "soc:k*l" experiments.

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace conefact {

struct ResidualGrid {
  std::vector<int> ks;  // rows: soc_k
  std::vector<int> ls;  // columns: l copies
  std::map<std::pair<int, int>, double> cells;  // (k, l) -> best residual
};

struct RenderedTable {
  std::string text;  // aligned, two significant figures, missing cells as an em dash
  std::string csv;   // header "k,l=1,...", full precision, missing cells empty
};

RenderedTable emit_table(const ResidualGrid& grid);
ResidualGrid parse_table_csv(const std::string& csv);

// Two significant figures, keeping trailing zeros (0.0020, 0.17, 0.50).
std::string format_two_significant(double v);

}  // namespace conefact
