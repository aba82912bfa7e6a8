// SPDX-License-Identifier: Apache-2.0

#include "mor/irka.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

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

// The expansion needs a diagonalizable pencil; repeated but semisimple
// poles are fine, a (numerically) defective eigenvector matrix is not.
void check_diagonalizable(const Eigen::PartialPivLU<MatC> &xlu)
{
  if (xlu.rcond() < 1e-13)
    throw Error("defective reduced pencil (pole/residue expansion "
                "undefined)");
}

// Spectral decomposition of a reduced quadruple: poles plus rank-one residue
// factors R_i = rho_i * c_dir_i * b_dir_i^H of
// h(s) = C^H (sE - A)^{-1} B = sum_i (C^H x_i)(y_i^H B) / (s - lambda_i),
// where y_i^H = (row i of X^{-1}) E^{-1} so that y_i^H E x_i = 1.
void spectral_decompose(ReducedModel &model)
{
  const DescriptorSystem &rs = model.system;
  const MatC Ar = rs.denseA();
  const MatC Er = rs.denseE();
  GenEigResult ge = small_gen_eig(Ar, Er, rs.real_data());
  model.poles = ge.values;

  const Index ell = Ar.rows();
  const MatC &X = ge.right_vectors;
  Eigen::PartialPivLU<MatC> xlu(X);
  check_diagonalizable(xlu);
  const MatC YB = xlu.solve(Er.partialPivLu().solve(rs.B())); // rows y_i^H B
  const MatC CX = rs.C().adjoint() * X;                       // cols C^H x_i

  TangentSet dirs;
  dirs.b_dirs = MatC(rs.m(), ell);
  dirs.c_dirs = MatC(rs.p(), ell);
  model.residue_scales = VecC(ell);
  for (Index i = 0; i < ell; ++i)
  {
    const VecC u = CX.col(i);
    const VecC w = YB.row(i).adjoint(); // (y_i^H B)^H
    const VecC cd = normalize_direction(u);
    const VecC bd = normalize_direction(w);
    dirs.c_dirs.col(i) = cd;
    dirs.b_dirs.col(i) = bd;
    const Complex alpha = cd.dot(u); // cd^H u
    const Complex beta = bd.dot(w);
    model.residue_scales[i] = alpha * std::conj(beta);
  }

  // Exact conjugate closure for real data: canonical sorting places each
  // pair adjacently with the negative-imaginary member first.
  if (rs.real_data())
  {
    for (Index i = 0; i + 1 < ell; ++i)
    {
      if (model.poles[i].imag() < 0.0 &&
          model.poles[i + 1] == std::conj(model.poles[i]))
      {
        dirs.b_dirs.col(i + 1) = dirs.b_dirs.col(i).conjugate();
        dirs.c_dirs.col(i + 1) = dirs.c_dirs.col(i).conjugate();
        model.residue_scales[i + 1] = std::conj(model.residue_scales[i]);
        ++i;
      }
    }
  }
  model.residue_dirs = std::move(dirs);
}

} // namespace

ReducedModel project(const DescriptorSystem &sys, const MatC &V, const MatC &W,
                     bool with_spectral)
{
  const Index ell = std::min(V.cols(), W.cols());
  if (ell == 0)
    throw DimensionError("project: empty projection basis");
  const auto Vv = V.leftCols(ell);
  const auto Ww = W.leftCols(ell);
  MatC Er = Ww.adjoint() * (sys.E() * Vv);
  MatC Ar = Ww.adjoint() * (sys.A() * Vv);
  MatC Br = Ww.adjoint() * sys.B();
  MatC Cr = Vv.adjoint() * sys.C();
  ReducedModel model{DescriptorSystem::FromDense(Er, Ar, Br, Cr), VecC(),
                     std::nullopt, VecC()};
  if (with_spectral)
    spectral_decompose(model);
  return model;
}

TangentSet compute_residue_dirs(ReducedModel &model)
{
  spectral_decompose(model);
  return *model.residue_dirs;
}

namespace
{

// S = sort(-conj(Lambda)); the permutation is applied to the tangent columns
// so directions stay aligned with their shifts.
ShiftSet mirrored_sorted_shifts(const VecC &lam, const TangentSet *dirs_in,
                                TangentSet *dirs_out)
{
  const Index r = lam.size();
  VecC s(r);
  for (Index i = 0; i < r; ++i)
    s[i] = -std::conj(lam[i]);
  std::vector<Index> perm(static_cast<size_t>(r));
  std::iota(perm.begin(), perm.end(), Index(0));
  std::sort(perm.begin(), perm.end(), [&](Index a, Index b) {
    return s[a].real() != s[b].real() ? s[a].real() < s[b].real()
                                      : s[a].imag() < s[b].imag();
  });
  VecC sorted(r);
  for (Index i = 0; i < r; ++i)
    sorted[i] = s[perm[static_cast<size_t>(i)]];
  if (dirs_in && dirs_out)
  {
    dirs_out->b_dirs = MatC(dirs_in->b_dirs.rows(), r);
    dirs_out->c_dirs = MatC(dirs_in->c_dirs.rows(), r);
    for (Index i = 0; i < r; ++i)
    {
      dirs_out->b_dirs.col(i) = dirs_in->b_dirs.col(perm[static_cast<size_t>(i)]);
      dirs_out->c_dirs.col(i) = dirs_in->c_dirs.col(perm[static_cast<size_t>(i)]);
    }
  }
  return ShiftSet(std::move(sorted));
}

} // namespace

IrkaResult irka(const DescriptorSystem &sys, const IrkaConfig &cfg,
                const ShiftSet *init_shifts, const TangentSet *init_tangents)
{
  if (cfg.r < 1 || cfg.r > sys.n())
    throw DimensionError("irka: target order out of range");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0) || cfg.itmax < 1)
    throw Error("irka: invalid tolerance or iteration cap");
  const Index r = cfg.r;
  const bool mimo = sys.m() > 1 || sys.p() > 1;

  MatC V, W;
  ShiftSet S_prev;
  TangentSet tangents = init_tangents
                            ? *init_tangents
                            : default_tangents(sys.m(), sys.p(), r);
  switch (cfg.init)
  {
  case InitOption::EigInit:
  {
    MatC Q = smallest_eigs(sys.A(), sys.E(), r, cfg.seed);
    if (Q.cols() < r)
      throw Error("irka: initial eigenbasis is rank deficient");
    V = Q;
    W = Q;
    S_prev = ones_shifts(r);
    break;
  }
  case InitOption::GivenShifts:
  {
    if (!init_shifts || init_shifts->size() != r)
      throw DimensionError("irka: GivenShifts requires r initial shifts");
    S_prev = *init_shifts;
    S_prev.canonical_sort();
    RKColumns cols = rk_columns(sys, S_prev, mimo ? &tangents : nullptr);
    V = orth(cols.V).Q;
    W = orth(cols.W).Q;
    break;
  }
  case InitOption::RandomBases:
  {
    V = orth(seeded_gaussian(sys.n(), r, cfg.seed).cast<Complex>()).Q;
    W = orth(seeded_gaussian(sys.n(), r, cfg.seed + 1).cast<Complex>()).Q;
    S_prev = ones_shifts(r);
    break;
  }
  }

  IrkaResult res;
  res.record.initial_shifts = S_prev.values;
  const long solves0 = SolveCounter::value();
  const auto t0 = std::chrono::steady_clock::now();
  ShiftSet S_new;
  bool warned_unstable = false;

  for (int k = 1; k <= cfg.itmax; ++k)
  {
    ReducedModel model{project(sys, V, W, false)};
    try
    {
      if (mimo)
        spectral_decompose(model);
      else
        model.poles = small_gen_eig(model.system.denseA(),
                                    model.system.denseE(),
                                    model.system.real_data())
                          .values;
    }
    catch (const Error &e)
    {
      throw Error("irka: iteration " + std::to_string(k) + ": " + e.what());
    }

    TangentSet next_tangents;
    S_new = mirrored_sorted_shifts(model.poles,
                                   mimo ? &*model.residue_dirs : nullptr,
                                   mimo ? &next_tangents : nullptr);
    if (mimo)
      tangents = std::move(next_tangents);
    if (!warned_unstable)
      for (Index i = 0; i < S_new.size(); ++i)
        if (S_new.values[i].real() < 0.0)
        {
          res.record.message +=
              "warning: unstable reduced poles at iteration " +
              std::to_string(k) + "; shift update applied verbatim. ";
          warned_unstable = true;
          break;
        }

    RKColumns cols = rk_columns(sys, S_new, mimo ? &tangents : nullptr);
    V = orth(cols.V).Q;
    W = orth(cols.W).Q;

    const double chi = shift_distance(S_new, S_prev);
    res.record.entries.push_back({k, chi, S_new.values, V.cols(), W.cols(),
                                  SolveCounter::value() - solves0, 0,
                                  elapsed_ms(t0)});
    if (chi < cfg.tol)
    {
      res.record.status = Termination::Converged;
      break;
    }
    S_prev = S_new;
  }
  if (res.record.status != Termination::Converged)
    res.record.status = Termination::ItmaxReached;

  res.V = wrap_basis(V, Side::Right);
  res.W = wrap_basis(W, Side::Left);
  res.model = project(sys, V, W, false);
  try
  {
    spectral_decompose(res.model);
  }
  catch (const Error &)
  {
    // Poles may still be useful even when residues are undefined.
    res.model.poles = small_gen_eig(res.model.system.denseA(),
                                    res.model.system.denseE(),
                                    res.model.system.real_data())
                          .values;
  }
  // Re-derive the returned shifts from the final model so that the
  // shifts-mirror-the-poles identity holds exactly rather than only to
  // the convergence tolerance. Elementwise mirroring keeps shift i
  // aligned with pole i and residue-direction column i.
  {
    const VecC &lam = res.model.poles;
    VecC mir(lam.size());
    for (Index i = 0; i < lam.size(); ++i)
      mir[i] = -std::conj(lam[i]);
    res.shifts = ShiftSet(std::move(mir));
  }
  res.record.total_solves = SolveCounter::value() - solves0;
  res.record.final_subspace = V.cols();
  return res;
}

} // namespace mor
