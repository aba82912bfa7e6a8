// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_H2_METRICS_HPP
#define MOR_H2_METRICS_HPP

#include <vector>

#include "mor/irka.hpp"
#include "mor/lti_system.hpp"

namespace mor
{

enum class H2Method
{
  LyapunovDense,  // controllability Gramian via a dense Lyapunov solve
  ResidueFormula  // pole/residue double sum (simple poles required)
};

struct H2Report
{
  double norm_full = 0.0;
  double norm_error = 0.0;
  double sigma = 0.0; // ||h - h_red||^2 / ||h||^2
  H2Method method = H2Method::LyapunovDense;
  bool approximate = false; // set for the frequency-grid diagnostic path
};

/// H2 norm of a stable system (Frobenius convention for MIMO). E is folded
/// in by solving with it once; the Gramian comes from the Sylvester kernel.
double h2_norm(const DescriptorSystem &sys,
               H2Method method = H2Method::LyapunovDense,
               Index dense_cap = 2000);

/// Relative squared H2 error of a reduced model, computed exactly through
/// the stacked error system when it fits the dense cap.
H2Report sigma(const DescriptorSystem &full, const ReducedModel &reduced,
               Index dense_cap = 2000);

/// Approximate sigma on a logarithmic frequency grid (diagnostic only, for
/// systems beyond the dense cap). Trapezoidal quadrature over [w_min, w_max].
H2Report sigma_grid(const DescriptorSystem &full, const ReducedModel &reduced,
                    double w_min, double w_max, int points);

/// Meier-Luenberger first-order check: relative value and derivative
/// interpolation residuals of h vs h_red at the mirrored reduced poles.
struct MeierLuenbergerReport
{
  struct PerPole
  {
    Complex pole;
    double value_residual;
    double derivative_residual;
  };
  std::vector<PerPole> poles;
  double max_residual = 0.0;

  bool passes(double tol) const { return max_residual <= tol; }
};

MeierLuenbergerReport check_meier_luenberger(const DescriptorSystem &full,
                                             const ReducedModel &reduced);

/// Magnitudes ||h(i w)|| (spectral norm) along the imaginary axis, plus the
/// pointwise error magnitude when a reduced model is supplied.
struct TransferSamplePoint
{
  double omega;
  double magnitude;
  double error_magnitude; // 0 when no reduced model given
};

std::vector<TransferSamplePoint>
sample_transfer(const DescriptorSystem &sys, const std::vector<double> &omegas,
                const ReducedModel *reduced = nullptr);

} // namespace mor

#endif // MOR_H2_METRICS_HPP
