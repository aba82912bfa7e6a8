// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mor/h2_metrics.hpp"
#include "mor/irka.hpp"
#include "mor/numeric_kernels.hpp"

using namespace mor;

namespace
{

DescriptorSystem scalar_system(double a, double b, double c)
{
  MatC A(1, 1), B(1, 1), C(1, 1);
  A(0, 0) = Complex(-a, 0.0);
  B(0, 0) = Complex(b, 0.0);
  C(0, 0) = Complex(c, 0.0);
  return DescriptorSystem::FromDense(A, B, C);
}

DescriptorSystem random_stable(Index n, Index m, Index p, std::uint64_t seed)
{
  MatR M = seeded_gaussian(n, n, seed);
  MatC A = M.cast<Complex>() - (M.cwiseAbs().rowwise().sum().maxCoeff() + 1.0) *
                                   MatC::Identity(n, n);
  return DescriptorSystem::FromDense(
      A, seeded_gaussian(n, m, seed + 1).cast<Complex>(),
      seeded_gaussian(n, p, seed + 2).cast<Complex>());
}

} // namespace

TEST_CASE("closed form: ||1/(s+a)|| = 1/sqrt(2a)")
{
  for (double a : {0.5, 1.0, 7.0})
  {
    DescriptorSystem sys = scalar_system(a, 1.0, 1.0);
    CHECK(h2_norm(sys, H2Method::LyapunovDense) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * a)).epsilon(1e-12));
    CHECK(h2_norm(sys, H2Method::ResidueFormula) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * a)).epsilon(1e-12));
  }
}

TEST_CASE("Lyapunov and residue methods agree on random stable systems")
{
  for (std::uint64_t seed = 0; seed < 8; ++seed)
  {
    DescriptorSystem sys = random_stable(12 + 3 * seed, 2, 2, 100 + 10 * seed);
    const double l = h2_norm(sys, H2Method::LyapunovDense);
    const double r = h2_norm(sys, H2Method::ResidueFormula);
    CHECK(l == doctest::Approx(r).epsilon(1e-9));
  }
}

TEST_CASE("h2_norm rejects unstable systems and oversized dense input")
{
  MatC A(1, 1), B(1, 1), C(1, 1);
  A(0, 0) = Complex(0.5, 0.0);
  B(0, 0) = C(0, 0) = Complex(1.0, 0.0);
  CHECK_THROWS_AS(h2_norm(DescriptorSystem::FromDense(A, B, C)), Error);
  DescriptorSystem big = random_stable(12, 1, 1, 200);
  CHECK_THROWS_AS(h2_norm(big, H2Method::LyapunovDense, 10), Error);
}

TEST_CASE("h2_norm with non-identity E matches the E-folded equivalent")
{
  DescriptorSystem sys = random_stable(10, 1, 1, 300);
  MatC E = MatC::Identity(10, 10) + 0.2 * seeded_gaussian(10, 10, 301).cast<Complex>();
  DescriptorSystem desc =
      DescriptorSystem::FromDense(E, sys.denseA(), sys.B(), sys.C());
  if (!is_c_stable(desc))
    return;
  // Equivalent explicit system: x' = E^{-1}A x + E^{-1}B u.
  Eigen::PartialPivLU<MatC> lu(E);
  DescriptorSystem folded = DescriptorSystem::FromDense(
      lu.solve(sys.denseA()), lu.solve(sys.B()), sys.C());
  CHECK(h2_norm(desc) == doctest::Approx(h2_norm(folded)).epsilon(1e-10));
}

TEST_CASE("sigma vanishes for an exact reduction and is exact for known parts")
{
  DescriptorSystem sys = random_stable(8, 1, 1, 400);
  // "Reduced" model identical to the full system.
  ReducedModel self{sys, poles(sys), std::nullopt, VecC()};
  H2Report rep = sigma(sys, self);
  CHECK(rep.sigma < 1e-12);
  CHECK_FALSE(rep.approximate);
  CHECK(rep.norm_full == doctest::Approx(h2_norm(sys)).epsilon(1e-12));

  // Two decoupled scalar modes; dropping one gives a known error norm.
  MatC A = MatC::Zero(2, 2);
  A(0, 0) = Complex(-1.0, 0.0);
  A(1, 1) = Complex(-4.0, 0.0);
  MatC B(2, 1), C(2, 1);
  B << Complex(1, 0), Complex(1, 0);
  C << Complex(1, 0), Complex(1, 0);
  DescriptorSystem two = DescriptorSystem::FromDense(A, B, C);
  DescriptorSystem one = scalar_system(1.0, 1.0, 1.0);
  ReducedModel red{one, VecC(), std::nullopt, VecC()};
  H2Report r2 = sigma(two, red);
  // Error system = the dropped mode 1/(s+4): ||e|| = 1/sqrt(8).
  CHECK(r2.norm_error == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-10));
  CHECK(r2.sigma ==
        doctest::Approx((1.0 / 8.0) / (r2.norm_full * r2.norm_full))
            .epsilon(1e-10));
}

TEST_CASE("sigma rejects unstable reduced models")
{
  DescriptorSystem sys = random_stable(6, 1, 1, 500);
  MatC A(1, 1), B(1, 1), C(1, 1);
  A(0, 0) = Complex(0.3, 0.0);
  B(0, 0) = C(0, 0) = Complex(1.0, 0.0);
  ReducedModel bad{DescriptorSystem::FromDense(A, B, C), VecC(), std::nullopt,
                   VecC()};
  CHECK_THROWS_AS(sigma(sys, bad), Error);
}

TEST_CASE("sigma_grid approximates the exact sigma and is flagged")
{
  DescriptorSystem sys = random_stable(10, 1, 1, 600);
  IrkaConfig cfg;
  cfg.r = 3;
  IrkaResult res = irka(sys, cfg);
  if (!is_c_stable(res.model.system))
    return;
  H2Report exact = sigma(sys, res.model);
  H2Report grid = sigma_grid(sys, res.model, 1e-3, 1e4, 4000);
  CHECK(grid.approximate);
  CHECK(grid.sigma == doctest::Approx(exact.sigma).epsilon(0.2));
  CHECK_THROWS_AS(sigma_grid(sys, res.model, 1.0, 0.5, 100), Error);
}

TEST_CASE("Meier-Luenberger check: converged IRKA passes, perturbation fails")
{
  DescriptorSystem sys = random_stable(25, 1, 1, 700);
  IrkaConfig cfg;
  cfg.r = 4;
  cfg.tol = 1e-12;
  IrkaResult res = irka(sys, cfg);
  REQUIRE(res.record.status == Termination::Converged);
  MeierLuenbergerReport ok = check_meier_luenberger(sys, res.model);
  CHECK(ok.passes(1e-6));
  CHECK(ok.poles.size() == 4);

  // Control: a visibly perturbed reduced model must fail the same check.
  MatC Ap = res.model.system.denseA() * Complex(1.02, 0.0);
  ReducedModel bad{DescriptorSystem::FromDense(Ap, res.model.system.B(),
                                               res.model.system.C()),
                   VecC(), std::nullopt, VecC()};
  MeierLuenbergerReport fail = check_meier_luenberger(sys, bad);
  CHECK_FALSE(fail.passes(1e-6));
  CHECK(fail.max_residual > 100.0 * ok.max_residual);
}

TEST_CASE("sample_transfer reports spectral norms and pointwise errors")
{
  DescriptorSystem sys = random_stable(10, 2, 2, 800);
  IrkaConfig cfg;
  cfg.r = 3;
  IrkaResult res = irka(sys, cfg);
  std::vector<double> omegas{0.0, 0.5, 2.0, 10.0};
  auto pts = sample_transfer(sys, omegas, &res.model);
  REQUIRE(pts.size() == 4);
  for (size_t i = 0; i < pts.size(); ++i)
  {
    CHECK(pts[i].omega == omegas[i]);
    const MatC h = eval_transfer(sys, Complex(0.0, omegas[i])).value;
    Eigen::JacobiSVD<MatC> svd(h);
    CHECK(pts[i].magnitude ==
          doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
    CHECK(pts[i].error_magnitude >= 0.0);
  }
  CHECK_THROWS_AS(
      sample_transfer(sys, {std::numeric_limits<double>::quiet_NaN()}),
      Error);
}
