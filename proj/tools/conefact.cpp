// conefact: cone factorizations of nonnegative matrices by symmetric-cone
// multiplicative updates.
//
//   conefact solve  --target ngon:5 --cone "soc:2*3" --seed 7 --out report.json
//   conefact grid   --target ngon:8 --k 1..4 --l 1..4 --out table.csv
//   conefact verify --factors f.json --target slack.csv
//   conefact slack  --n 5 --csv slack.csv --json slack.json
//
// Exit codes: 0 success, 2 parse/usage errors, 3 I/O errors, 1 anything else.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "conefact/cone_spec.hpp"
#include "conefact/errors.hpp"
#include "conefact/experiment.hpp"
#include "conefact/polytopes.hpp"
#include "conefact/serialization.hpp"
#include "conefact/table.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitIo = 3;

std::vector<int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) return {std::stoi(text)};
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw std::invalid_argument(text);
    std::vector<int> out;
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  } catch (const std::exception&) {
    throw conefact::ParseError("bad range '" + text + "', expected N or LO..HI", 0);
  }
}

void add_experiment_flags(CLI::App* cmd, conefact::ExperimentConfig& cfg) {
  cmd->add_option("--target", cfg.target, "ngon:<n> or a CSV matrix file")->required();
  cmd->add_option("--seed", cfg.seed, "base seed");
  cmd->add_option("--eps", cfg.epsilon, "damping")->check(CLI::NonNegativeNumber);
  cmd->add_option("--stage1-starts", cfg.stage1_starts)->check(CLI::PositiveNumber);
  cmd->add_option("--stage1-sweeps", cfg.stage1_sweeps)->check(CLI::PositiveNumber);
  cmd->add_option("--stage2-keep", cfg.stage2_keep)->check(CLI::PositiveNumber);
  cmd->add_option("--stage2-sweeps", cfg.stage2_sweeps)->check(CLI::PositiveNumber);
}

int cmd_solve(const conefact::ExperimentConfig& cfg, const std::string& out,
              const std::string& factors_out) {
  const conefact::ExperimentReport report = conefact::run_experiment(cfg);
  const nlohmann::json j = conefact::to_json(report);
  if (!out.empty()) conefact::write_file(out, j.dump(2) + "\n");
  if (!factors_out.empty() && report.best_factors)
    conefact::write_file(factors_out, conefact::to_json(*report.best_factors).dump(2) + "\n");
  if (!report.success) {
    std::cerr << "solve: every start failed\n";
    return 1;
  }
  std::cout << "structure " << report.structure << "\n"
            << "best residual " << report.best_residual << " (start " << report.best_start << ")\n"
            << "kkt residual " << report.best_kkt_residual << "\n"
            << "wall time " << report.wall_time_seconds << " s\n";
  return 0;
}

int cmd_grid(const conefact::ExperimentConfig& cfg, const std::string& ks, const std::string& ls,
             const std::string& out) {
  const conefact::GridResult result = conefact::run_grid(cfg, parse_range(ks), parse_range(ls));
  const conefact::RenderedTable table = conefact::emit_table(result.grid);
  std::cout << table.text;
  if (!out.empty()) conefact::write_file(out, table.csv);
  return 0;
}

int cmd_verify(const std::string& factors_path, const std::string& target) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(conefact::read_file(factors_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw conefact::ParseError(std::string("factors: ") + e.what(), e.byte);
  }
  // Accept either a bare factor set or a solve report.
  if (j.contains("best_factors")) j = j["best_factors"];
  const conefact::FactorSet f = conefact::factor_set_from_json(j);
  const conefact::TargetMatrix x = conefact::load_target(target);
  std::cout << "structure " << conefact::format_cone_spec(f.structure) << "\n"
            << "residual_relative " << conefact::residual_relative(f, x) << "\n"
            << "objective " << conefact::objective(f, x) << "\n";
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.a.size(); ++i) {
    const double m = conefact::min_eigenvalue(f.a[i]);
    worst = std::min(worst, m);
    std::cout << "a[" << i << "] min_eigenvalue " << m << "\n";
  }
  for (std::size_t j2 = 0; j2 < f.b.size(); ++j2) {
    const double m = conefact::min_eigenvalue(f.b[j2]);
    worst = std::min(worst, m);
    std::cout << "b[" << j2 << "] min_eigenvalue " << m << "\n";
  }
  std::cout << "cone_margin " << worst << "\n";
  return 0;
}

int cmd_slack(int n, const std::string& csv, const std::string& json) {
  const conefact::SlackInstance s = conefact::regular_ngon_slack(n);
  if (!csv.empty()) conefact::write_file(csv, conefact::matrix_to_csv(s.matrix.values()));
  if (!json.empty()) conefact::write_file(json, conefact::to_json(s).dump(2) + "\n");
  if (csv.empty() && json.empty()) std::cout << conefact::matrix_to_csv(s.matrix.values());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cone factorizations by symmetric-cone multiplicative updates"};
  app.require_subcommand(1);

  conefact::ExperimentConfig solve_cfg;
  std::string solve_out, solve_factors_out;
  auto* solve = app.add_subcommand("solve", "two-stage multi-start factorization of one target");
  add_experiment_flags(solve, solve_cfg);
  solve->add_option("--cone", solve_cfg.cone_spec, "cone spec, e.g. \"soc:2*3\"")->required();
  solve->add_option("--out", solve_out, "JSON report path");
  solve->add_option("--factors-out", solve_factors_out, "write the best factor set as JSON");
  solve->add_flag("--traces", solve_cfg.record_traces, "include per-start objective traces");

  conefact::ExperimentConfig grid_cfg;
  std::string grid_k = "1..4", grid_l = "1..4", grid_out;
  auto* grid = app.add_subcommand("grid", "best residual table over soc:k*l");
  add_experiment_flags(grid, grid_cfg);
  grid->add_option("--k", grid_k, "soc size range, e.g. 1..4");
  grid->add_option("--l", grid_l, "copy count range, e.g. 1..4");
  grid->add_option("--out", grid_out, "CSV output path");

  std::string verify_factors, verify_target;
  auto* verify = app.add_subcommand("verify", "residual and cone margins of stored factors");
  verify->add_option("--factors", verify_factors)->required();
  verify->add_option("--target", verify_target, "ngon:<n> or CSV path")->required();

  int slack_n = 4;
  std::string slack_csv, slack_json;
  auto* slack = app.add_subcommand("slack", "emit the slack matrix of a regular polygon");
  slack->add_option("--n", slack_n)->check(CLI::Range(3, 1 << 20));
  slack->add_option("--csv", slack_csv);
  slack->add_option("--json", slack_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*solve) return cmd_solve(solve_cfg, solve_out, solve_factors_out);
    if (*grid) return cmd_grid(grid_cfg, grid_k, grid_l, grid_out);
    if (*verify) return cmd_verify(verify_factors, verify_target);
    if (*slack) return cmd_slack(slack_n, slack_csv, slack_json);
  } catch (const conefact::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const conefact::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
