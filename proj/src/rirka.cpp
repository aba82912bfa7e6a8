// SPDX-License-Identifier: Apache-2.0

#include "mor/rirka.hpp"

#include <chrono>
#include <string>

#include "mor/numeric_kernels.hpp"

namespace mor
{

namespace
{

double elapsed_ms(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

} // namespace

RirkaResult rirka(const DescriptorSystem &sys, const RirkaConfig &cfg,
                  const MatC *V0, const MatC *W0)
{
  if (cfg.r < 1 || 2 * cfg.r > sys.n())
    throw DimensionError("rirka: target order out of range");
  if (cfg.tol_inner > cfg.tol_outer)
    throw Error("rirka: tol_inner must not exceed tol_outer");
  if (cfg.itmax_outer < 1 || cfg.itmax_inner < 1)
    throw Error("rirka: invalid iteration caps");
  if (cfg.tau && *cfg.tau < 2 && !(cfg.tau == 1 && cfg.allow_tau1_debug))
    throw Error("rirka: tau must be >= 2 (tau = 1 requires the debug flag)");

  const Index r = cfg.r;
  const bool mimo = sys.m() > 1 || sys.p() > 1;

  RKBasis V_hat, W_hat;
  switch (cfg.init)
  {
  case RirkaInit::EigInit2r:
  {
    MatC Q = smallest_eigs(sys.A(), sys.E(), 2 * r, cfg.seed);
    if (Q.cols() < 2 * r)
      throw Error("rirka: initial eigenbasis is rank deficient");
    V_hat = wrap_basis(Q, Side::Right, 2);
    W_hat = wrap_basis(Q, Side::Left, 2);
    break;
  }
  case RirkaInit::GivenBases:
  {
    if (!V0 || !W0)
      throw Error("rirka: GivenBases requires starting bases");
    V_hat = wrap_basis(orth(*V0).Q, Side::Right, 2);
    W_hat = wrap_basis(orth(*W0).Q, Side::Left, 2);
    break;
  }
  case RirkaInit::RandomBases2r:
  {
    V_hat = wrap_basis(orth(seeded_gaussian(sys.n(), 2 * r, cfg.seed)
                                .cast<Complex>())
                           .Q,
                       Side::Right, 2);
    W_hat = wrap_basis(orth(seeded_gaussian(sys.n(), 2 * r, cfg.seed + 1)
                                .cast<Complex>())
                           .Q,
                       Side::Left, 2);
    break;
  }
  }

  RirkaResult res;
  ShiftSet S_prev = ones_shifts(r);
  res.record.initial_shifts = S_prev.values;
  TangentSet tangents_prev = default_tangents(sys.m(), sys.p(), r);
  const long solves0 = SolveCounter::value();
  const auto t0 = std::chrono::steady_clock::now();

  ShiftSet S_cur;
  MatC last_V_block, last_W_block;
  bool deflated_prev = false;

  for (int j = 1; j <= cfg.itmax_outer; ++j)
  {
    // (1) Project onto the accumulated spaces.
    ReducedModel reduced = project(sys, V_hat.Q, W_hat.Q, false);

    // (2) Inner IRKA(r) on the projected problem. First sweep uses the
    // eigenbasis initialization; later sweeps warm-start from the previous
    // shift set. Inner solves are not counted.
    IrkaResult inner;
    {
      SolveCounter::Suspend suspend;
      IrkaConfig icfg;
      icfg.r = r;
      icfg.tol = cfg.tol_inner;
      icfg.itmax = cfg.itmax_inner;
      icfg.seed = cfg.seed;
      icfg.init = (j == 1) ? InitOption::EigInit : InitOption::GivenShifts;
      try
      {
        inner = (j == 1)
                    ? irka(reduced.system, icfg)
                    : irka(reduced.system, icfg, &S_prev, &tangents_prev);
      }
      catch (const Error &e)
      {
        res.record.status = Termination::Error;
        res.record.message = "inner IRKA failed at outer iteration " +
                             std::to_string(j) + ": " + e.what();
        res.record.total_solves = SolveCounter::value() - solves0;
        res.record.final_subspace = V_hat.cols();
        res.V_hat = V_hat;
        res.W_hat = W_hat;
        return res;
      }
    }
    S_cur = inner.shifts;
    TangentSet tangents_cur = inner.model.residue_dirs
                                  ? *inner.model.residue_dirs
                                  : tangents_prev;

    // (3) Build r new columns per side against the ORIGINAL system. A shift
    // colliding with the pencil spectrum is perturbed once and retried.
    RKColumns cols;
    try
    {
      cols = rk_columns(sys, S_cur, mimo ? &tangents_cur : nullptr);
    }
    catch (const SingularShiftError &e)
    {
      ShiftSet perturbed = S_cur;
      for (Index i = 0; i < perturbed.size(); ++i)
        if (perturbed.values[i] == e.shift)
          perturbed.values[i] += 1e-8 * (1.0 + std::abs(e.shift));
      cols = rk_columns(sys, perturbed, mimo ? &tangents_cur : nullptr);
      S_cur = perturbed;
    }
    last_V_block = cols.V;
    last_W_block = cols.W;

    // (4) Expand (truncate-then-expand when a window is configured).
    if (cfg.tau)
    {
      V_hat = truncate_window(V_hat, *cfg.tau, cfg.allow_tau1_debug);
      W_hat = truncate_window(W_hat, *cfg.tau, cfg.allow_tau1_debug);
    }
    V_hat = expand_basis(V_hat, cols.V, j);
    W_hat = expand_basis(W_hat, cols.W, j);
    const bool deflated_now =
        V_hat.expansion_deflated && W_hat.expansion_deflated;

    const double chi = shift_distance(S_cur, S_prev);
    res.record.entries.push_back({j, chi, S_cur.values, V_hat.cols(),
                                  W_hat.cols(),
                                  SolveCounter::value() - solves0,
                                  inner.record.iterations(), elapsed_ms(t0)});

    if (chi < cfg.tol_outer)
    {
      res.record.status = Termination::Converged;
      break;
    }
    if (deflated_now && deflated_prev)
    {
      res.record.status = Termination::Stagnation;
      res.record.message = "expansion block fully deflated in two "
                           "consecutive outer iterations";
      break;
    }
    deflated_prev = deflated_now;
    S_prev = S_cur;
    tangents_prev = tangents_cur;
  }
  if (res.record.status == Termination::Error)
    res.record.status = Termination::ItmaxReached;

  // Final bases: the last computed r-column rational Krylov blocks,
  // re-orthonormalized; the returned model is their two-sided projection.
  res.V = wrap_basis(orth(last_V_block).Q, Side::Right);
  res.W = wrap_basis(orth(last_W_block).Q, Side::Left);
  res.model = project(sys, res.V.Q, res.W.Q, false);
  try
  {
    compute_residue_dirs(res.model);
  }
  catch (const Error &)
  {
    res.model.poles = small_gen_eig(res.model.system.denseA(),
                                    res.model.system.denseE(),
                                    res.model.system.real_data())
                          .values;
  }
  res.shifts = S_cur;
  res.V_hat = V_hat;
  res.W_hat = W_hat;
  res.record.total_solves = SolveCounter::value() - solves0;
  res.record.final_subspace = V_hat.cols();
  return res;
}

} // namespace mor
