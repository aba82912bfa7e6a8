// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mor/bench_problems.hpp"
#include "mor/h2_metrics.hpp"
#include "mor/rirka.hpp"

using namespace mor;

namespace
{

DescriptorSystem laplace_siso(Index grid)
{
  EllipticParams ep;
  ep.grid = grid;
  ep.m = 1;
  ep.p = 1;
  return gen_elliptic(ep);
}

} // namespace

TEST_CASE("rirka validates its configuration")
{
  DescriptorSystem sys = laplace_siso(6);
  RirkaConfig cfg;
  cfg.r = 0;
  CHECK_THROWS_AS(rirka(sys, cfg), DimensionError);
  cfg.r = 30; // 2r > n = 36
  CHECK_THROWS_AS(rirka(sys, cfg), DimensionError);
  cfg.r = 4;
  cfg.tol_inner = 1e-6;
  cfg.tol_outer = 1e-8; // inner must not exceed outer
  CHECK_THROWS_AS(rirka(sys, cfg), Error);
  cfg.tol_inner = 5e-9;
  cfg.tau = 1;
  CHECK_THROWS_AS(rirka(sys, cfg), Error); // tau = 1 needs the debug flag
  cfg.init = RirkaInit::GivenBases;
  cfg.tau.reset();
  CHECK_THROWS_AS(rirka(sys, cfg), Error); // missing starting bases
}

TEST_CASE("R-IRKA accounting: outer solves only, ell_fin = 2r + r #its "
          "minus deflation")
{
  DescriptorSystem sys = laplace_siso(10); // n = 100
  RirkaConfig cfg;
  cfg.r = 4;
  SolveCounter::reset();
  RirkaResult res = rirka(sys, cfg);
  REQUIRE(res.record.status == Termination::Converged);
  const int its = res.record.iterations();
  CHECK(res.record.total_solves == 2 * cfg.r * static_cast<long>(its));
  CHECK(res.record.total_solves == SolveCounter::value());
  CHECK(res.record.final_subspace <= 2 * cfg.r + cfg.r * its);
  CHECK(res.record.final_subspace == res.V_hat.cols());
  // Inner iteration counts are recorded per outer sweep.
  for (const auto &e : res.record.entries)
    CHECK(e.inner_iterations > 0);
}

TEST_CASE("converged R-IRKA final model interpolates at the final shifts")
{
  DescriptorSystem sys = laplace_siso(10);
  RirkaConfig cfg;
  cfg.r = 4;
  RirkaResult res = rirka(sys, cfg);
  REQUIRE(res.record.status == Termination::Converged);
  REQUIRE(res.V.cols() == 4);
  REQUIRE(res.W.cols() == 4);
  for (Index i = 0; i < res.shifts.size(); ++i)
  {
    const Complex s = res.shifts.values[i];
    const TransferSample hf = eval_transfer(sys, s, true);
    const TransferSample hr = eval_transfer(res.model.system, s, true);
    CHECK(std::abs(hf.value(0, 0) - hr.value(0, 0)) <=
          1e-8 * std::abs(hf.value(0, 0)));
    CHECK(std::abs((*hf.derivative)(0, 0) - (*hr.derivative)(0, 0)) <=
          1e-5 * std::abs((*hf.derivative)(0, 0)));
  }
}

TEST_CASE("warm start: later sweeps report fewer inner iterations than the "
          "cold first sweep")
{
  DescriptorSystem sys = laplace_siso(10);
  RirkaConfig cfg;
  cfg.r = 4;
  RirkaResult res = rirka(sys, cfg);
  REQUIRE(res.record.entries.size() >= 2);
  const auto &e = res.record.entries;
  CHECK(e.back().inner_iterations <= e.front().inner_iterations);
}

TEST_CASE("T-R-IRKA window: never more than tau blocks, ell_fin <= tau r")
{
  DescriptorSystem sys = laplace_siso(10);
  RirkaConfig cfg;
  cfg.r = 4;
  cfg.tau = 3;
  RirkaResult res = rirka(sys, cfg);
  REQUIRE(res.record.status == Termination::Converged);
  CHECK(res.V_hat.blocks.size() <= 3);
  CHECK(res.record.final_subspace <= 3 * cfg.r);
  for (const auto &e : res.record.entries)
    CHECK(e.basis_cols_v <= 3 * cfg.r);
}

TEST_CASE("five-iteration tau = 3 run keeps exactly the last three blocks")
{
  // A convection-dominated operator keeps the shifts moving for all five
  // iterations, so every expansion contributes a genuinely new block (on an
  // already-converged problem late blocks would deflate away).
  EllipticParams ep;
  ep.op = OperatorId::L160000;
  ep.grid = 12;
  DescriptorSystem sys = gen_elliptic(ep);
  RirkaConfig cfg;
  cfg.r = 3;
  cfg.tau = 3;
  cfg.tol_outer = 1e-14; // force many outer iterations
  cfg.tol_inner = 1e-14;
  cfg.itmax_outer = 5;
  RirkaResult res = rirka(sys, cfg);
  REQUIRE(res.record.iterations() == 5);
  REQUIRE(res.V_hat.blocks.size() == 3);
  // The surviving blocks are the three most recent expansion iterations.
  CHECK(res.V_hat.blocks[0].iter == 3);
  CHECK(res.V_hat.blocks[1].iter == 4);
  CHECK(res.V_hat.blocks[2].iter == 5);
  CHECK(res.W_hat.blocks[0].iter == 3);
}

TEST_CASE("random-bases initialization also reaches convergence")
{
  DescriptorSystem sys = laplace_siso(8);
  RirkaConfig cfg;
  cfg.r = 3;
  cfg.init = RirkaInit::RandomBases2r;
  cfg.seed = 4;
  RirkaResult res = rirka(sys, cfg);
  CHECK(res.record.status == Termination::Converged);
}

TEST_CASE("given-bases initialization consumes the caller's spaces")
{
  DescriptorSystem sys = laplace_siso(8);
  RirkaConfig cfg;
  cfg.r = 3;
  cfg.init = RirkaInit::GivenBases;
  MatC V0 = seeded_gaussian(sys.n(), 6, 7).cast<Complex>();
  MatC W0 = seeded_gaussian(sys.n(), 6, 8).cast<Complex>();
  RirkaResult res = rirka(sys, cfg, &V0, &W0);
  CHECK(res.record.status == Termination::Converged);
}

TEST_CASE("identical configurations give bitwise-identical shift histories")
{
  DescriptorSystem sys = laplace_siso(8);
  RirkaConfig cfg;
  cfg.r = 3;
  RirkaResult a = rirka(sys, cfg);
  RirkaResult b = rirka(sys, cfg);
  REQUIRE(a.record.entries.size() == b.record.entries.size());
  for (size_t i = 0; i < a.record.entries.size(); ++i)
  {
    CHECK(a.record.entries[i].chi == b.record.entries[i].chi);
    CHECK(a.record.entries[i].shifts == b.record.entries[i].shifts);
    CHECK(a.record.entries[i].cumulative_solves ==
          b.record.entries[i].cumulative_solves);
  }
}

TEST_CASE("MIMO R-IRKA runs tangentially and converges on a small problem")
{
  EllipticParams ep;
  ep.grid = 10;
  DescriptorSystem sys = gen_elliptic(ep); // m = p = 2
  RirkaConfig cfg;
  cfg.r = 4;
  RirkaResult res = rirka(sys, cfg);
  CHECK(res.record.status == Termination::Converged);
  CHECK(res.shifts.size() == 4);
  CHECK(res.record.total_solves ==
        2 * cfg.r * static_cast<long>(res.record.iterations()));
}
