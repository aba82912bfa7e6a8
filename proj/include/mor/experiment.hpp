// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_EXPERIMENT_HPP
#define MOR_EXPERIMENT_HPP

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "mor/bench_problems.hpp"
#include "mor/h2_metrics.hpp"
#include "mor/rirka.hpp"

namespace mor
{

enum class Method
{
  IRKA,
  RIRKA,
  TRIRKA
};

std::string to_string(Method m);
Method method_from_string(const std::string &name);

struct ProblemSpec
{
  std::string name;
  enum class Kind
  {
    EllipticFD,
    MatrixMarketDir,
    Toeplitz
  } kind = Kind::EllipticFD;
  EllipticParams elliptic;
  ToeplitzParams toeplitz;
  std::string path; // MatrixMarketDir
  std::optional<std::pair<Index, Index>> siso_select; // (b_col, c_col)
};

DescriptorSystem load_problem(const ProblemSpec &spec);

struct ExperimentConfig
{
  ProblemSpec problem;
  std::vector<Method> methods{Method::IRKA, Method::RIRKA, Method::TRIRKA};
  Index r = 10;
  double tol = 1e-8;                // outer/IRKA tolerance
  std::optional<double> tol_inner;  // default tol / 2
  int itmax_irka = 300;
  int itmax_outer = 30;
  int itmax_inner = 300;
  int tau = 3;
  std::string init = "eig"; // "eig" or "random"
  std::uint64_t seed = 0;
  std::string output_dir;   // empty: no artifact files
  bool compute_sigma = false;
  Index sigma_dense_cap = 2000;
};

ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ExperimentConfig &cfg);

struct MethodOutcome
{
  Method method;
  ConvergenceRecord record;
  VecC shifts;
  std::optional<H2Report> h2;
  std::string error; // nonempty when the method failed outright
};

struct ExperimentResult
{
  std::vector<MethodOutcome> outcomes;
  bool all_ok() const;
};

/// Runs every configured method on the problem; per-method failures are
/// recorded and the remaining methods still run. With output_dir set,
/// emits per-method convergence CSV, shifts JSON, a summary JSON/CSV, the
/// comparison table, and an echo of the config (all numerics at 17
/// significant digits).
ExperimentResult run_experiment(const ExperimentConfig &cfg);

/// Aligned text table of the summary quantities (one column per method).
std::string compare_report(const std::vector<MethodOutcome> &outcomes);
std::string compare_csv(const std::vector<MethodOutcome> &outcomes);

} // namespace mor

#endif // MOR_EXPERIMENT_HPP
