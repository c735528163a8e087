#include "conefact/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "conefact/cone_spec.hpp"
#include "conefact/errors.hpp"

namespace conefact {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

json to_json(const Element& x) {
  json blocks = json::array();
  for (const auto& b : x.blocks()) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, OrthantValue>) {
            blocks.push_back(vector_json(v.v));
          } else if constexpr (std::is_same_v<T, SocValue>) {
            blocks.push_back({{"t", v.t}, {"x", vector_json(v.x)}});
          } else {
            json rows = json::array();
            for (Eigen::Index i = 0; i < v.m.rows(); ++i) rows.push_back(vector_json(v.m.row(i).transpose()));
            blocks.push_back(rows);
          }
        },
        b);
  }
  return blocks;
}

Element element_from_json(const ConeStructure& structure, const json& j) {
  if (!j.is_array() || j.size() != structure.num_blocks())
    throw StructureMismatch("element JSON: expected " + std::to_string(structure.num_blocks()) + " blocks");
  std::vector<BlockValue> blocks;
  for (std::size_t b = 0; b < structure.num_blocks(); ++b) {
    const json& jb = j[b];
    const int n = structure.block(b).size();
    switch (structure.block(b).type()) {
      case BlockKind::Type::Orthant:
        blocks.push_back(OrthantValue{vector_from_json(jb)});
        break;
      case BlockKind::Type::Soc:
        blocks.push_back(SocValue{jb.at("t").get<double>(), vector_from_json(jb.at("x"))});
        break;
      case BlockKind::Type::Sym: {
        if (!jb.is_array() || jb.size() != static_cast<std::size_t>(n))
          throw StructureMismatch("element JSON: psd block has wrong row count");
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i) {
          const Eigen::VectorXd row = vector_from_json(jb[static_cast<std::size_t>(i)]);
          if (row.size() != n) throw StructureMismatch("element JSON: psd block has wrong column count");
          m.row(i) = row.transpose();
        }
        blocks.push_back(SymValue{std::move(m)});
        break;
      }
    }
  }
  return Element(structure, std::move(blocks));
}

json to_json(const FactorSet& f) {
  json out;
  out["format"] = "conefact.factors";
  out["format_version"] = kFactorFormatVersion;
  out["structure"] = format_cone_spec(f.structure);
  out["a"] = json::array();
  out["b"] = json::array();
  for (const auto& e : f.a) out["a"].push_back(to_json(e));
  for (const auto& e : f.b) out["b"].push_back(to_json(e));
  return out;
}

FactorSet factor_set_from_json(const json& j) {
  const int version = j.at("format_version").get<int>();
  if (version != kFactorFormatVersion)
    throw std::invalid_argument("factor JSON: unsupported format_version " + std::to_string(version));
  FactorSet f{parse_cone_spec(j.at("structure").get<std::string>()), {}, {}};
  for (const auto& e : j.at("a")) f.a.push_back(element_from_json(f.structure, e));
  for (const auto& e : j.at("b")) f.b.push_back(element_from_json(f.structure, e));
  return f;
}

json to_json(const SlackInstance& s) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < s.matrix.rows(); ++i) rows.push_back(vector_json(s.matrix.values().row(i).transpose()));
  return {{"n_vertices", s.n_vertices},
          {"inradius", s.inradius},
          {"vertex_angles", s.vertex_angles},
          {"facet_normal_angles", s.facet_normal_angles},
          {"matrix", rows}};
}

json to_json(const RunReport& r, bool include_timing) {
  json out{{"initial_objective", r.initial_objective},
           {"final_objective", r.final_objective},
           {"final_residual_relative", r.final_residual_relative},
           {"sweeps_run", r.sweeps_run},
           {"monotone_violations", r.monotone_violations},
           {"last_iterate_change", r.last_iterate_change},
           {"kkt_residual", r.kkt_residual},
           {"zero_rows", r.zero_rows},
           {"zero_cols", r.zero_cols},
           {"stop_reason", r.stop_reason},
           {"objective_trace", r.objective_trace}};
  if (include_timing) out["wall_time_seconds"] = r.wall_time.count();
  return out;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      if (first == std::string::npos)
        throw ParseError("csv line " + std::to_string(line_no) + ": empty cell", line_no);
      const std::string trimmed = cell.substr(first, last - first + 1);
      double v = 0.0;
      auto res = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
      if (res.ec != std::errc() || res.ptr != trimmed.data() + trimmed.size())
        throw ParseError("csv line " + std::to_string(line_no) + ": bad number '" + trimmed + "'", line_no);
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("csv line " + std::to_string(line_no) + ": ragged row", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("csv: no rows", 0);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace conefact
