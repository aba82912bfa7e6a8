// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_IRKA_HPP
#define MOR_IRKA_HPP

#include <optional>
#include <string>
#include <vector>

#include "mor/lti_system.hpp"
#include "mor/rational_krylov.hpp"
#include "mor/types.hpp"

namespace mor
{

/// Projected quadruple with its spectral data. For real data the poles are
/// conjugation-closed and the residue directions mirror that closure.
struct ReducedModel
{
  DescriptorSystem system;
  VecC poles;
  std::optional<TangentSet> residue_dirs;
  VecC residue_scales; // rho_i with R_i = rho_i * c_dir_i * b_dir_i^H
};

enum class InitOption
{
  EigInit,     // Option 1: eigenbasis of the r smallest eigenvalues, W = V
  GivenShifts, // Option 2: rational Krylov bases from supplied shifts
  RandomBases  // Option 3: two independent random orthonormal bases
};

struct IrkaConfig
{
  Index r = 1;
  double tol = 1e-8;
  int itmax = 300;
  InitOption init = InitOption::EigInit;
  std::uint64_t seed = 0;
};

enum class Termination
{
  Converged,
  ItmaxReached,
  Stagnation,
  Error
};

/// Per-iteration history shared by IRKA and the outer R-IRKA loop.
struct ConvergenceRecord
{
  struct Entry
  {
    int iter;
    double chi;
    VecC shifts;
    Index basis_cols_v;
    Index basis_cols_w;
    long cumulative_solves;
    int inner_iterations;
    double wall_ms;
  };
  std::vector<Entry> entries;
  VecC initial_shifts; // S_0, the baseline of the first chi value
  Termination status = Termination::Error;
  std::string message;
  long total_solves = 0;       // xi_lin for this run
  Index final_subspace = 0;    // ell^fin

  int iterations() const { return static_cast<int>(entries.size()); }
};

struct IrkaResult
{
  ShiftSet shifts;
  RKBasis V, W;
  ReducedModel model;
  ConvergenceRecord record;
};

/// Classical IRKA fixed-point iteration (SISO and tangential MIMO). On
/// itmax the last iterate is returned flagged unconverged, not an error.
IrkaResult irka(const DescriptorSystem &sys, const IrkaConfig &cfg,
                const ShiftSet *init_shifts = nullptr,
                const TangentSet *init_tangents = nullptr);

/// Two-sided Petrov-Galerkin projection of sys onto (V, W); poles and
/// residue directions are populated. Uses the first min(cols V, cols W)
/// columns of each side when the counts differ.
ReducedModel project(const DescriptorSystem &sys, const MatC &V, const MatC &W,
                     bool with_spectral = true);

/// Pole/residue expansion of a reduced model with simple poles:
/// h(s) = sum_i rho_i c_dir_i b_dir_i^H / (s - lambda_i).
TangentSet compute_residue_dirs(ReducedModel &model);

} // namespace mor

#endif // MOR_IRKA_HPP
