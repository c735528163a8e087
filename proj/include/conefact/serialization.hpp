#pragma once

// JSON and CSV encodings for structures, factor sets, slack instances and
// solver reports.
//
// FactorSet JSON:
//   {"format": "conefact.factors", "format_version": 1,
//    "structure": "soc:1*2",
//    "a": [ [block, ...], ... ], "b": [ ... ]}
// where a block is a list of numbers for orthant, {"t": t, "x": [...]} for
// soc and a list of rows for psd.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "conefact/factor_map.hpp"
#include "conefact/polytopes.hpp"
#include "conefact/scmu.hpp"

namespace conefact {

inline constexpr int kFactorFormatVersion = 1;

nlohmann::json to_json(const Element& x);
Element element_from_json(const ConeStructure& structure, const nlohmann::json& j);

nlohmann::json to_json(const FactorSet& f);
FactorSet factor_set_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SlackInstance& s);
// timing excluded unless include_timing
nlohmann::json to_json(const RunReport& r, bool include_timing = true);

// Comma-separated rows, full round-trip precision.
std::string matrix_to_csv(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace conefact
