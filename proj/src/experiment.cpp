#include "conefact/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "conefact/cone_spec.hpp"
#include "conefact/errors.hpp"
#include "conefact/polytopes.hpp"
#include "conefact/serialization.hpp"

namespace conefact {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SolverConfig stage_config(const ExperimentConfig& config, int sweeps) {
  SolverConfig s;
  // Fixed-length stages: every start gets exactly `sweeps` sweeps.
  s.max_sweeps = sweeps;
  s.min_sweeps = sweeps;
  s.epsilon = config.epsilon;
  s.record_trace = config.record_traces;
  return s;
}

// Runs one stage from `init`, catching solver failures.
StartOutcome run_stage(const TargetMatrix& x, const FactorSet& init, const SolverConfig& solver,
                       int index, std::uint64_t seed, bool keep_report,
                       std::optional<FactorSet>& final_factors) {
  StartOutcome out;
  out.index = index;
  out.seed = seed;
  try {
    RunResult r = run(x, init, solver);
    out.residual = r.report.final_residual_relative;
    out.objective = r.report.final_objective;
    if (!std::isfinite(out.residual)) throw NumericalError("non-finite residual");
    if (keep_report) out.report = r.report;
    final_factors = std::move(r.factors);
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
    final_factors.reset();
  }
  return out;
}

// Order: successful before failed, then residual, then start index.
bool better(const StartOutcome& a, const StartOutcome& b) {
  if (a.failed != b.failed) return !a.failed;
  if (!a.failed && a.residual != b.residual) return a.residual < b.residual;
  return a.index < b.index;
}

nlohmann::json outcome_json(const StartOutcome& o, bool include_timing) {
  nlohmann::json j{{"start", o.index}, {"seed", o.seed}, {"failed", o.failed}};
  if (o.failed) {
    j["error"] = o.error;
  } else {
    j["residual"] = o.residual;
    j["objective"] = o.objective;
  }
  if (o.report) j["report"] = to_json(*o.report, include_timing);
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (stage1_starts < 1 || stage1_sweeps < 1 || stage2_keep < 1 || stage2_sweeps < 1)
    throw std::invalid_argument("ExperimentConfig: all counts must be >= 1");
  if (stage2_keep > stage1_starts)
    throw std::invalid_argument("ExperimentConfig: stage2_keep exceeds stage1_starts");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("ExperimentConfig: epsilon must be >= 0");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream));
}

std::uint64_t cell_seed(std::uint64_t base, int k, int l) {
  return derive_seed(base, (static_cast<std::uint64_t>(k) << 32) | static_cast<std::uint32_t>(l));
}

TargetMatrix load_target(const std::string& target) {
  if (target.rfind("ngon:", 0) == 0) {
    const std::string digits = target.substr(5);
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(digits, &used);
      if (used != digits.size()) throw std::invalid_argument(digits);
    } catch (const std::exception&) {
      throw ParseError("target: bad polygon size '" + digits + "'", 5);
    }
    if (n < 3) throw ParseError("target: polygon needs at least 3 vertices", 5);
    return regular_ngon_slack(n).matrix;
  }
  return TargetMatrix(matrix_from_csv(read_file(target)));
}

double init_scale(const TargetMatrix& x, const ConeStructure& structure) {
  const double mean = x.values().size() > 0 ? x.values().mean() : 0.0;
  const double scale = std::sqrt(mean) / std::sqrt(static_cast<double>(x.rows()) * structure.rank());
  return scale > 0.0 ? scale : 1.0;
}

Element random_square_interior(const ConeStructure& structure, double scale, std::mt19937_64& rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("random_square_interior: scale must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<BlockValue> blocks;
  for (const auto& kind : structure.blocks()) {
    const int n = kind.size();
    switch (kind.type()) {
      case BlockKind::Type::Orthant: {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) {
          const double g = normal(rng);
          v(i) = g * g + 0.1;
        }
        blocks.push_back(OrthantValue{scale * v});
        break;
      }
      case BlockKind::Type::Soc: {
        const double g0 = normal(rng);
        Eigen::VectorXd gx(n);
        for (int i = 0; i < n; ++i) gx(i) = normal(rng);
        // (g0, gx) o (g0, gx) = (g0^2 + |gx|^2, 2 g0 gx)
        const double norm = n + 1.0;
        blocks.push_back(SocValue{scale * ((g0 * g0 + gx.squaredNorm()) / norm + 0.1),
                                  scale * (2.0 * g0 / norm) * gx});
        break;
      }
      case BlockKind::Type::Sym: {
        Eigen::MatrixXd g(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
        Eigen::MatrixXd m = g * g.transpose() / n;
        m.diagonal().array() += 0.1;
        blocks.push_back(SymValue{scale * 0.5 * (m + m.transpose())});
        break;
      }
    }
  }
  return Element(structure, std::move(blocks));
}

FactorSet random_start(const ConeStructure& structure, Eigen::Index rows, Eigen::Index cols,
                       double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FactorSet f{structure, {}, {}};
  for (Eigen::Index i = 0; i < rows; ++i) f.a.push_back(random_square_interior(structure, scale, rng));
  for (Eigen::Index j = 0; j < cols; ++j) f.b.push_back(random_square_interior(structure, scale, rng));
  return f;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  return run_experiment(config, load_target(config.target));
}

ExperimentReport run_experiment(const ExperimentConfig& config, const TargetMatrix& x) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const ConeStructure structure = parse_cone_spec(config.cone_spec);
  const double scale = init_scale(x, structure);

  ExperimentReport report;
  report.config = config;
  report.structure = format_cone_spec(structure);
  report.rows = static_cast<int>(x.rows());
  report.cols = static_cast<int>(x.cols());

  const SolverConfig stage1 = stage_config(config, config.stage1_sweeps);
  const SolverConfig stage2 = stage_config(config, config.stage2_sweeps);

  std::vector<std::optional<FactorSet>> stage1_factors(static_cast<std::size_t>(config.stage1_starts));
  for (int s = 0; s < config.stage1_starts; ++s) {
    const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(s));
    const FactorSet init = random_start(structure, x.rows(), x.cols(), scale, seed);
    report.stage1.push_back(run_stage(x, init, stage1, s, seed, config.record_traces,
                                      stage1_factors[static_cast<std::size_t>(s)]));
  }

  std::vector<StartOutcome> ranked = report.stage1;
  std::stable_sort(ranked.begin(), ranked.end(), better);

  std::optional<FactorSet> best;
  const StartOutcome* best_outcome = nullptr;
  report.stage2.reserve(static_cast<std::size_t>(config.stage2_keep));
  for (int r = 0; r < config.stage2_keep; ++r) {
    const StartOutcome& chosen = ranked[static_cast<std::size_t>(r)];
    if (chosen.failed) break;
    std::optional<FactorSet> final_factors;
    report.stage2.push_back(run_stage(x, *stage1_factors[static_cast<std::size_t>(chosen.index)], stage2,
                                      chosen.index, chosen.seed, config.record_traces, final_factors));
    const StartOutcome& o = report.stage2.back();
    if (!o.failed && (best_outcome == nullptr || better(o, *best_outcome))) {
      best_outcome = &o;
      best = std::move(final_factors);
    }
  }

  if (best_outcome != nullptr) {
    report.success = true;
    report.best_start = best_outcome->index;
    report.best_residual = best_outcome->residual;
    report.best_objective = best_outcome->objective;
    report.best_kkt_residual = kkt_residual(*best, x);
    report.best_factors = std::move(best);
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

nlohmann::json to_json(const ExperimentReport& r, bool include_timing) {
  const ExperimentConfig& c = r.config;
  nlohmann::json j;
  j["schema_version"] = 1;
  j["config"] = {{"target", c.target},
                 {"cone", c.cone_spec},
                 {"stage1_starts", c.stage1_starts},
                 {"stage1_sweeps", c.stage1_sweeps},
                 {"stage2_keep", c.stage2_keep},
                 {"stage2_sweeps", c.stage2_sweeps},
                 {"seed", c.seed},
                 {"epsilon", c.epsilon},
                 {"record_traces", c.record_traces}};
  j["structure"] = r.structure;
  j["target_shape"] = {r.rows, r.cols};
  j["stage1"] = nlohmann::json::array();
  for (const auto& o : r.stage1) j["stage1"].push_back(outcome_json(o, include_timing));
  j["stage2"] = nlohmann::json::array();
  for (const auto& o : r.stage2) j["stage2"].push_back(outcome_json(o, include_timing));
  j["success"] = r.success;
  if (r.success) {
    j["best"] = {{"start", r.best_start},
                 {"residual", r.best_residual},
                 {"objective", r.best_objective},
                 {"kkt_residual", r.best_kkt_residual}};
    j["best_factors"] = to_json(*r.best_factors);
  }
  if (include_timing) j["timing"] = {{"wall_time_seconds", r.wall_time_seconds}};
  return j;
}

GridResult run_grid(const ExperimentConfig& base, const std::vector<int>& ks, const std::vector<int>& ls) {
  base.validate();
  const TargetMatrix x = load_target(base.target);
  GridResult out;
  out.grid.ks = ks;
  out.grid.ls = ls;
  for (int k : ks) {
    for (int l : ls) {
      ExperimentConfig cell = base;
      cell.cone_spec = "soc:" + std::to_string(k) + "*" + std::to_string(l);
      cell.seed = cell_seed(base.seed, k, l);
      ExperimentReport rep = run_experiment(cell, x);
      if (rep.success) out.grid.cells[{k, l}] = rep.best_residual;
      out.reports.push_back(std::move(rep));
    }
  }
  return out;
}

}  // namespace conefact
