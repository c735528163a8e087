#pragma once

// Two-stage multi-start experiments:
//   stage 1  stage1_starts seeded random starts, stage1_sweeps sweeps each
//   stage 2  the stage2_keep lowest-residual starts continue for stage2_sweeps
// The reported result is the lowest stage-2 residual.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "conefact/eja.hpp"
#include "conefact/factor_map.hpp"
#include "conefact/scmu.hpp"
#include "conefact/table.hpp"

namespace conefact {

struct ExperimentConfig {
  std::string target = "ngon:4";  // "ngon:<n>" or a CSV path
  std::string cone_spec = "soc:2*2";
  int stage1_starts = 100;
  int stage1_sweeps = 100;
  int stage2_keep = 10;
  int stage2_sweeps = 900;
  std::uint64_t seed = 0;
  double epsilon = 1e-6;
  bool record_traces = false;

  void validate() const;
};

struct StartOutcome {
  int index = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  double residual = 0.0;  // relative Frobenius residual at the end of the stage
  double objective = 0.0;
  std::optional<RunReport> report;  // kept when record_traces
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string structure;  // canonical cone spec
  int rows = 0;
  int cols = 0;
  std::vector<StartOutcome> stage1;
  std::vector<StartOutcome> stage2;
  bool success = false;  // at least one stage-2 run finished
  int best_start = -1;
  double best_residual = 0.0;
  double best_objective = 0.0;
  double best_kkt_residual = 0.0;
  std::optional<FactorSet> best_factors;
  double wall_time_seconds = 0.0;
};

// splitmix64 finalizer applied to base and stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// "ngon:<n>" builds the regular n-gon slack matrix; anything else is read as
// a CSV file.
TargetMatrix load_target(const std::string& target);

// Scale used for random starts: sqrt(mean(X)) / sqrt(m * rank).
double init_scale(const TargetMatrix& x, const ConeStructure& structure);

// scale * (g o g / dim + 0.1 e) per block, g standard normal: the Jordan square
// of a Gaussian shifted into the interior (for psd blocks G G^T / n + 0.1 I).
Element random_square_interior(const ConeStructure& structure, double scale, std::mt19937_64& rng);

// Row factors first, then column factors, from one mt19937_64 stream.
FactorSet random_start(const ConeStructure& structure, Eigen::Index rows, Eigen::Index cols,
                       double scale, std::uint64_t seed);

ExperimentReport run_experiment(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config, const TargetMatrix& x);

nlohmann::json to_json(const ExperimentReport& report, bool include_timing = true);

// Runs "soc:k*l" for every (k, l); each cell uses seed derive_seed(seed, cell id).
struct GridResult {
  ResidualGrid grid;
  std::vector<ExperimentReport> reports;
};
GridResult run_grid(const ExperimentConfig& base, const std::vector<int>& ks, const std::vector<int>& ls);

std::uint64_t cell_seed(std::uint64_t base, int k, int l);

}  // namespace conefact
