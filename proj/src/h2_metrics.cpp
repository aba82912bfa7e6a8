// SPDX-License-Identifier: Apache-2.0

#include "mor/h2_metrics.hpp"

#include <cmath>

#include "mor/numeric_kernels.hpp"

namespace mor
{

namespace
{

double h2_norm_lyapunov(const DescriptorSystem &sys, Index dense_cap)
{
  // With E nonsingular: Ad P + P Ad^H + Bd Bd^H = 0, Ad = E^{-1}A,
  // Bd = E^{-1}B, and ||h||^2 = trace(C^H P C).
  const MatC E = sys.denseE();
  Eigen::PartialPivLU<MatC> elu(E);
  const double emax = E.cwiseAbs().maxCoeff();
  if (emax == 0.0 ||
      elu.matrixLU().diagonal().cwiseAbs().minCoeff() <= 1e-14 * emax)
    throw Error("h2_norm: singular E");
  MatC Ad = elu.solve(sys.denseA());
  MatC Bd = elu.solve(sys.B());
  MatC P = solve_sylvester(Ad, Ad.adjoint(), MatC(-Bd * Bd.adjoint()),
                           dense_cap);
  const Complex tr = (sys.C().adjoint() * P * sys.C()).trace();
  return std::sqrt(std::max(0.0, tr.real()));
}

double h2_norm_residue(const DescriptorSystem &sys)
{
  ReducedModel model{sys, VecC(), std::nullopt, VecC()};
  compute_residue_dirs(model);
  const Index k = model.poles.size();
  // ||h||^2 = sum_{i,j} trace(R_i R_j^H) / (-lambda_i - conj(lambda_j)).
  double acc = 0.0;
  for (Index i = 0; i < k; ++i)
  {
    const MatC Ri = model.residue_scales[i] *
                    (model.residue_dirs->c_dirs.col(i) *
                     model.residue_dirs->b_dirs.col(i).adjoint());
    for (Index j = 0; j < k; ++j)
    {
      const MatC Rj = model.residue_scales[j] *
                      (model.residue_dirs->c_dirs.col(j) *
                       model.residue_dirs->b_dirs.col(j).adjoint());
      const Complex denom = -model.poles[i] - std::conj(model.poles[j]);
      acc += ((Ri * Rj.adjoint()).trace() / denom).real();
    }
  }
  return std::sqrt(std::max(0.0, acc));
}

double spectral_norm(const MatC &M)
{
  if (M.size() == 1)
    return std::abs(M(0, 0));
  Eigen::JacobiSVD<MatC> svd(M);
  return svd.singularValues()(0);
}

DescriptorSystem error_system(const DescriptorSystem &full,
                              const DescriptorSystem &red)
{
  if (full.m() != red.m() || full.p() != red.p())
    throw DimensionError("sigma: input/output dimension mismatch");
  const Index n1 = full.n(), n2 = red.n();
  MatC E = MatC::Zero(n1 + n2, n1 + n2);
  MatC A = MatC::Zero(n1 + n2, n1 + n2);
  E.topLeftCorner(n1, n1) = full.denseE();
  E.bottomRightCorner(n2, n2) = red.denseE();
  A.topLeftCorner(n1, n1) = full.denseA();
  A.bottomRightCorner(n2, n2) = red.denseA();
  MatC B(n1 + n2, full.m());
  B.topRows(n1) = full.B();
  B.bottomRows(n2) = red.B();
  MatC C(n1 + n2, full.p());
  C.topRows(n1) = full.C();
  C.bottomRows(n2) = -red.C();
  return DescriptorSystem::FromDense(E, A, B, C);
}

} // namespace

double h2_norm(const DescriptorSystem &sys, H2Method method, Index dense_cap)
{
  if (sys.n() > dense_cap)
    throw Error("h2_norm: dimension exceeds dense cap; use the grid "
                "diagnostic (sigma_grid) for large systems");
  if (!is_c_stable(sys, dense_cap))
    throw Error("h2_norm: H2 norm undefined for an unstable system");
  return method == H2Method::LyapunovDense ? h2_norm_lyapunov(sys, dense_cap)
                                           : h2_norm_residue(sys);
}

H2Report sigma(const DescriptorSystem &full, const ReducedModel &reduced,
               Index dense_cap)
{
  if (!is_c_stable(reduced.system, dense_cap))
    throw Error("sigma: H2 distance undefined for an unstable reduced model");
  H2Report rep;
  rep.method = H2Method::LyapunovDense;
  rep.norm_full = h2_norm(full, H2Method::LyapunovDense, dense_cap);
  rep.norm_error =
      h2_norm(error_system(full, reduced.system), H2Method::LyapunovDense,
              dense_cap + reduced.system.n());
  rep.sigma = (rep.norm_error * rep.norm_error) /
              (rep.norm_full * rep.norm_full);
  return rep;
}

H2Report sigma_grid(const DescriptorSystem &full, const ReducedModel &reduced,
                    double w_min, double w_max, int points)
{
  if (points < 2 || w_min <= 0.0 || w_max <= w_min)
    throw Error("sigma_grid: invalid frequency grid");
  H2Report rep;
  rep.approximate = true;
  // Trapezoid in omega over a log-spaced grid, symmetrized (+/- omega).
  double num = 0.0, den = 0.0;
  const double lr = std::log(w_max / w_min);
  double prev_w = 0.0, prev_e2 = 0.0, prev_f2 = 0.0;
  for (int i = 0; i < points; ++i)
  {
    const double w = w_min * std::exp(lr * i / (points - 1));
    const Complex s(0.0, w);
    const MatC h = eval_transfer(full, s).value;
    const MatC hr = eval_transfer(reduced.system, s).value;
    const double f2 = h.squaredNorm();
    const double e2 = (h - hr).squaredNorm();
    if (i > 0)
    {
      num += 0.5 * (prev_e2 + e2) * (w - prev_w);
      den += 0.5 * (prev_f2 + f2) * (w - prev_w);
    }
    prev_w = w;
    prev_e2 = e2;
    prev_f2 = f2;
  }
  rep.norm_full = std::sqrt(den / M_PI);
  rep.norm_error = std::sqrt(num / M_PI);
  rep.sigma = num / den;
  return rep;
}

MeierLuenbergerReport check_meier_luenberger(const DescriptorSystem &full,
                                             const ReducedModel &reduced)
{
  VecC lam = reduced.poles;
  if (lam.size() == 0)
    lam = poles(reduced.system);
  {
    const double scale = lam.cwiseAbs().maxCoeff();
    for (Index i = 0; i < lam.size(); ++i)
      for (Index j = i + 1; j < lam.size(); ++j)
        if (std::abs(lam[i] - lam[j]) <= 1e-12 * std::max(scale, 1.0))
          throw Error("check_meier_luenberger: non-simple reduced poles");
  }
  TransferEvaluator eval_full(full);
  TransferEvaluator eval_red(reduced.system);
  MeierLuenbergerReport rep;
  constexpr double kGuard = 1e-300;
  for (Index i = 0; i < lam.size(); ++i)
  {
    const Complex node = -std::conj(lam[i]);
    const TransferSample hf = eval_full(node, true);
    const TransferSample hr = eval_red(node, true);
    const double rv = (hf.value - hr.value).norm() /
                      std::max(hf.value.norm(), kGuard);
    const double rd = (*hf.derivative - *hr.derivative).norm() /
                      std::max(hf.derivative->norm(), kGuard);
    rep.poles.push_back({lam[i], rv, rd});
    rep.max_residual = std::max({rep.max_residual, rv, rd});
  }
  return rep;
}

std::vector<TransferSamplePoint>
sample_transfer(const DescriptorSystem &sys, const std::vector<double> &omegas,
                const ReducedModel *reduced)
{
  std::vector<TransferSamplePoint> out;
  out.reserve(omegas.size());
  for (double w : omegas)
  {
    if (!std::isfinite(w))
      throw Error("sample_transfer: non-finite frequency");
    const Complex s(0.0, w);
    MatC h;
    try
    {
      h = eval_transfer(sys, s).value;
    }
    catch (const SingularShiftError &)
    {
      throw Error("sample_transfer: singular system at omega = " +
                  std::to_string(w));
    }
    TransferSamplePoint pt{w, spectral_norm(h), 0.0};
    if (reduced)
    {
      const MatC hr = eval_transfer(reduced->system, s).value;
      pt.error_magnitude = spectral_norm(h - hr);
    }
    out.push_back(pt);
  }
  return out;
}

} // namespace mor
