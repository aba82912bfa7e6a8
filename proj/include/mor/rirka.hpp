// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_RIRKA_HPP
#define MOR_RIRKA_HPP

#include <optional>

#include "mor/irka.hpp"

namespace mor
{

enum class RirkaInit
{
  EigInit2r,    // Option 1: eigenbasis of the 2r smallest eigenvalues, W = V
  GivenBases,   // Option 2: caller-supplied starting bases
  RandomBases2r // Option 3: two independent random 2r-column bases
};

struct RirkaConfig
{
  Index r = 1;
  double tol_outer = 1e-8;
  double tol_inner = 5e-9; // must satisfy tol_inner <= tol_outer
  int itmax_outer = 30;
  int itmax_inner = 300;
  RirkaInit init = RirkaInit::EigInit2r;
  std::optional<int> tau;  // truncation window; absent = full accumulation
  bool allow_tau1_debug = false;
  std::uint64_t seed = 0;
};

struct RirkaResult
{
  ShiftSet shifts;
  RKBasis V, W;            // final r-dimensional bases (re-orthonormalized)
  RKBasis V_hat, W_hat;    // accumulated spaces at termination
  ReducedModel model;      // reduced model from the final (V, W)
  ConvergenceRecord record;
};

/// Outer reduced-IRKA loop: project onto the accumulated space, run inner
/// IRKA(r) on the projected problem (warm-started after the first sweep),
/// inject the resulting shifts as new rational Krylov blocks against the
/// original system, then test shift variation. With cfg.tau set, the basis
/// window keeps only the most recent tau blocks (truncate before expand).
/// Only the outer expansion solves hit the solve counter.
RirkaResult rirka(const DescriptorSystem &sys, const RirkaConfig &cfg,
                  const MatC *V0 = nullptr, const MatC *W0 = nullptr);

} // namespace mor

#endif // MOR_RIRKA_HPP
