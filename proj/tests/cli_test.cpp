#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "conefact/cone_spec.hpp"
#include "conefact/errors.hpp"
#include "conefact/experiment.hpp"
#include "conefact/polytopes.hpp"
#include "conefact/serialization.hpp"
#include "conefact/table.hpp"
#include "support.hpp"

using namespace conefact;

namespace {

std::size_t parse_error_position(const std::string& text) {
  try {
    parse_cone_spec(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  FAIL("no ParseError for '" << text << "'");
  return 0;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CONEFACT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cone spec parsing and formatting") {
  const ConeStructure s = parse_cone_spec("soc:2*3");
  CHECK(s == ConeStructure({BlockKind::soc(2), BlockKind::soc(2), BlockKind::soc(2)}));
  CHECK(format_cone_spec(s) == "soc:2*3");

  const ConeStructure mixed = parse_cone_spec("orthant:4 x psd:3 x soc:1*2");
  CHECK(mixed == ConeStructure({BlockKind::orthant(4), BlockKind::sym(3), BlockKind::soc(1), BlockKind::soc(1)}));
  CHECK(parse_cone_spec(format_cone_spec(mixed)) == mixed);
  CHECK(format_cone_spec(parse_cone_spec("soc:1 x soc:1")) == "soc:1*2");

  CHECK_THROWS_AS(parse_cone_spec("soc:0"), ParseError);
  CHECK_THROWS_AS(parse_cone_spec(""), ParseError);
  CHECK_THROWS_AS(parse_cone_spec("soc:2*0"), ParseError);
  CHECK(parse_error_position("cube:3") == 0);
  CHECK(parse_error_position("soc:2 x ") >= 6);
  CHECK(parse_error_position("soc:2*") == 6);
}

TEST_CASE("two significant figures") {
  CHECK(format_two_significant(0.0020) == "0.0020");
  CHECK(format_two_significant(0.17) == "0.17");
  CHECK(format_two_significant(0.5) == "0.50");
  CHECK(format_two_significant(0.0) == "0");
  CHECK(format_two_significant(3.14159) == "3.1");
  CHECK(format_two_significant(2.5e-7) == "2.5e-07");
}

TEST_CASE("residual table rendering and csv round-trip") {
  ResidualGrid grid;
  grid.ks = {1, 2, 3, 4};
  grid.ls = {1, 2, 3};
  for (int k : grid.ks)
    for (int l : grid.ls)
      if (!(k == 2 && l == 3)) grid.cells[{k, l}] = 1.0 / (k * 10.0 + l) / 3.0;
  const RenderedTable t = emit_table(grid);

  std::size_t lines = 0;
  for (char c : t.text) lines += c == '\n';
  CHECK(lines == 5);
  CHECK(t.text.find("x^3") != std::string::npos);
  CHECK(t.text.find("soc_4") != std::string::npos);
  CHECK(t.text.find("—") != std::string::npos);
  CHECK(t.csv.rfind("k,l=1,l=2,l=3\n", 0) == 0);
  CHECK(t.csv.find("2,") != std::string::npos);

  const ResidualGrid back = parse_table_csv(t.csv);
  CHECK(back.ks == grid.ks);
  CHECK(back.ls == grid.ls);
  CHECK(back.cells == grid.cells);

  const RenderedTable empty = emit_table(ResidualGrid{});
  CHECK(empty.csv == "k\n");
  CHECK(empty.text == "\n");

  CHECK_THROWS_AS(parse_table_csv("k,l=1\nx,0.1\n"), ParseError);
  CHECK_THROWS_AS(parse_table_csv("k,l=1\n1,0.1,0.2\n"), ParseError);
  CHECK_THROWS_AS(parse_table_csv(""), ParseError);
}

TEST_CASE("json round-trips") {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 20; ++n) {
    const ConeStructure s = testsupport::random_mixed(rng);
    const Element x = testsupport::random_element(s, rng);
    CHECK(testsupport::rel_diff(element_from_json(s, to_json(x)), x) == 0.0);
  }
  const FactorSet f = fourgon_fixture();
  const nlohmann::json j = to_json(f);
  CHECK(j["structure"] == "soc:1*2");
  CHECK(j["format_version"] == kFactorFormatVersion);
  const FactorSet g = factor_set_from_json(nlohmann::json::parse(j.dump()));
  CHECK(g.structure == f.structure);
  REQUIRE(g.a.size() == f.a.size());
  REQUIRE(g.b.size() == f.b.size());
  for (std::size_t i = 0; i < f.a.size(); ++i) CHECK(testsupport::rel_diff(g.a[i], f.a[i]) == 0.0);
  for (std::size_t i = 0; i < f.b.size(); ++i) CHECK(testsupport::rel_diff(g.b[i], f.b[i]) == 0.0);

  nlohmann::json bad = j;
  bad["format_version"] = 99;
  CHECK_THROWS_AS(factor_set_from_json(bad), std::invalid_argument);
}

TEST_CASE("matrix csv") {
  const Eigen::MatrixXd m = regular_ngon_slack(7).matrix.values();
  CHECK((matrix_from_csv(matrix_to_csv(m)) - m).norm() == 0.0);
  CHECK_THROWS_AS(matrix_from_csv(""), ParseError);
  CHECK_THROWS_AS(matrix_from_csv("1,2\n3\n"), ParseError);
  CHECK_THROWS_AS(matrix_from_csv("1,,2\n"), ParseError);
  CHECK_THROWS_AS(matrix_from_csv("1,abc\n"), ParseError);
  CHECK_THROWS_AS(read_file("/nonexistent/dir/file.csv"), IoError);
}

TEST_CASE("experiments are deterministic") {
  ExperimentConfig cfg;
  cfg.target = "ngon:4";
  cfg.cone_spec = "soc:2*2";
  cfg.stage1_starts = 6;
  cfg.stage1_sweeps = 20;
  cfg.stage2_keep = 2;
  cfg.stage2_sweeps = 30;
  cfg.seed = 5;
  cfg.record_traces = true;
  const ExperimentReport a = run_experiment(cfg), b = run_experiment(cfg);
  CHECK(to_json(a, false).dump() == to_json(b, false).dump());
  CHECK(a.success);
  CHECK(a.stage2.size() == 2);
  REQUIRE(a.stage1.size() == 6);
  // stage 2 keeps the lowest stage-1 residuals, ties going to the lower index
  for (const auto& kept : a.stage2)
    for (const auto& s : a.stage1)
      if (s.residual < a.stage1[static_cast<std::size_t>(kept.index)].residual) {
        bool also_kept = false;
        for (const auto& k2 : a.stage2) also_kept = also_kept || k2.index == s.index;
        CHECK(also_kept);
      }

  cfg.seed = 6;
  CHECK(to_json(run_experiment(cfg), false).dump() != to_json(a, false).dump());

  cfg.stage2_keep = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("command line exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "conefact_cli_test";
  std::filesystem::create_directories(dir);
  const std::string csv = (dir / "slack.csv").string();
  CHECK(run_cli("slack --n 5 --csv " + csv) == 0);
  CHECK(matrix_from_csv(read_file(csv)).rows() == 5);
  CHECK(run_cli("solve --target ngon:4 --cone soc:1*2 --stage1-starts 2 --stage1-sweeps 5 --stage2-keep 1 "
                "--stage2-sweeps 5") == 0);
  CHECK(run_cli("solve --target ngon:4 --cone soc:0") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("grid --target ngon:4 --k 3..1") == 2);
  CHECK(run_cli("verify --factors /nonexistent/f.json --target ngon:4") == 3);
  std::filesystem::remove_all(dir);
}
