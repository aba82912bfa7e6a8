// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: generate benchmark problems, run the reduction
// methods, compare them, and sample transfer functions.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "mor/experiment.hpp"

namespace
{

struct ProblemOpts
{
  std::string kind = "elliptic";
  std::string op = "laplace2d";
  mor::Index grid = 10;
  mor::Index n = 1000; // toeplitz
  mor::Index m = 2;
  mor::Index p = 2;
  std::uint64_t seed_b = 0;
  std::uint64_t seed_c = 10;
  std::string path; // matrix market directory
  std::vector<mor::Index> siso; // two entries: b column, c column
};

void add_problem_opts(CLI::App &app, ProblemOpts &o)
{
  app.add_option("--kind", o.kind, "Problem kind: elliptic, toeplitz, dir")
      ->check(CLI::IsMember({"elliptic", "toeplitz", "dir"}));
  app.add_option("--operator", o.op, "Elliptic operator id");
  app.add_option("--grid", o.grid, "Interior grid points per dimension");
  app.add_option("--n", o.n, "Toeplitz dimension");
  app.add_option("-m,--inputs", o.m, "Input count");
  app.add_option("-p,--outputs", o.p, "Output count");
  app.add_option("--seed-b", o.seed_b, "Seed for B");
  app.add_option("--seed-c", o.seed_c, "Seed for C");
  app.add_option("--dir", o.path, "Matrix Market directory (kind=dir)");
  app.add_option("--siso", o.siso, "Restrict to SISO: B column, C column")
      ->expected(2);
}

mor::ProblemSpec make_spec(const ProblemOpts &o)
{
  mor::ProblemSpec spec;
  if (o.kind == "elliptic")
  {
    spec.kind = mor::ProblemSpec::Kind::EllipticFD;
    spec.elliptic.op = mor::operator_id_from_string(o.op);
    spec.elliptic.grid = o.grid;
    spec.elliptic.m = o.m;
    spec.elliptic.p = o.p;
    spec.elliptic.seed_b = o.seed_b;
    spec.elliptic.seed_c = o.seed_c;
    spec.name = o.op;
  }
  else if (o.kind == "toeplitz")
  {
    spec.kind = mor::ProblemSpec::Kind::Toeplitz;
    spec.toeplitz.n = o.n;
    spec.toeplitz.m = o.m;
    spec.toeplitz.p = o.p;
    spec.toeplitz.seed_b = o.seed_b;
    spec.toeplitz.seed_c = o.seed_c;
    spec.name = "toeplitz";
  }
  else
  {
    spec.kind = mor::ProblemSpec::Kind::MatrixMarketDir;
    spec.path = o.path;
    spec.name = o.path;
  }
  if (!o.siso.empty())
    spec.siso_select = {o.siso[0], o.siso[1]};
  return spec;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Model-order reduction experiments (IRKA / R-IRKA / T-R-IRKA)"};
  app.require_subcommand(1);

  // --- generate ---
  auto *gen = app.add_subcommand("generate",
                                 "Assemble a benchmark problem and write it "
                                 "as Matrix Market files");
  ProblemOpts gen_opts;
  std::string gen_out = "problem";
  add_problem_opts(*gen, gen_opts);
  gen->add_option("-o,--output", gen_out, "Output directory")->required();

  // --- reduce / compare ---
  auto *red = app.add_subcommand("reduce",
                                 "Run the configured reduction methods and "
                                 "write convergence artifacts");
  auto *cmp = app.add_subcommand("compare",
                                 "Run the methods and print the comparison "
                                 "table");
  ProblemOpts red_opts, cmp_opts;
  struct RunOpts
  {
    std::vector<std::string> methods{"IRKA", "RIRKA", "TRIRKA"};
    mor::Index r = 10;
    double tol = 1e-8;
    double tol_inner = -1.0;
    int itmax_irka = 300, itmax_outer = 30, itmax_inner = 300, tau = 3;
    std::string init = "eig";
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string config_file;
    bool with_sigma = false;
  } red_run, cmp_run;
  for (auto [sub, po, ro] : {std::tuple{red, &red_opts, &red_run},
                             std::tuple{cmp, &cmp_opts, &cmp_run}})
  {
    add_problem_opts(*sub, *po);
    sub->add_option("--config", ro->config_file,
                    "JSON config file (overrides the other options)");
    sub->add_option("--methods", ro->methods,
                    "Methods to run (IRKA, RIRKA, TRIRKA)");
    sub->add_option("-r,--order", ro->r, "Reduced order");
    sub->add_option("--tol", ro->tol, "Convergence tolerance");
    sub->add_option("--tol-inner", ro->tol_inner,
                    "Inner tolerance (default tol/2)");
    sub->add_option("--itmax", ro->itmax_irka, "IRKA iteration cap");
    sub->add_option("--itmax-outer", ro->itmax_outer, "Outer iteration cap");
    sub->add_option("--itmax-inner", ro->itmax_inner, "Inner iteration cap");
    sub->add_option("--tau", ro->tau, "Truncation window (TRIRKA)");
    sub->add_option("--init", ro->init, "Initialization: eig or random")
        ->check(CLI::IsMember({"eig", "random"}));
    sub->add_option("--seed", ro->seed, "Random seed");
    sub->add_option("-o,--output", ro->out_dir, "Artifact directory");
    sub->add_flag("--sigma", ro->with_sigma,
                  "Compute the relative H2 error (dense path)");
  }

  // --- sample ---
  auto *smp = app.add_subcommand("sample",
                                 "Sample transfer magnitudes on a log grid "
                                 "of frequencies (CSV on stdout)");
  ProblemOpts smp_opts;
  double w_min = 1e-2, w_max = 1e4;
  int w_points = 200;
  add_problem_opts(*smp, smp_opts);
  smp->add_option("--wmin", w_min, "Lowest frequency");
  smp->add_option("--wmax", w_max, "Highest frequency");
  smp->add_option("--points", w_points, "Grid size");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (gen->parsed())
    {
      mor::DescriptorSystem sys = mor::load_problem(make_spec(gen_opts));
      mor::save_matrix_market_dir(sys, gen_out);
      std::cout << "wrote n=" << sys.n() << " m=" << sys.m()
                << " p=" << sys.p() << " system to " << gen_out << "\n";
      return 0;
    }

    if (red->parsed() || cmp->parsed())
    {
      const bool is_cmp = cmp->parsed();
      const RunOpts &ro = is_cmp ? cmp_run : red_run;
      mor::ExperimentConfig cfg;
      if (!ro.config_file.empty())
      {
        std::ifstream in(ro.config_file);
        if (!in)
          throw mor::Error("cannot open config " + ro.config_file);
        cfg = mor::config_from_json(nlohmann::json::parse(in));
        if (!ro.out_dir.empty())
          cfg.output_dir = ro.out_dir;
      }
      else
      {
        cfg.problem = make_spec(is_cmp ? cmp_opts : red_opts);
        cfg.methods.clear();
        for (const auto &name : ro.methods)
          cfg.methods.push_back(mor::method_from_string(name));
        cfg.r = ro.r;
        cfg.tol = ro.tol;
        if (ro.tol_inner > 0.0)
          cfg.tol_inner = ro.tol_inner;
        cfg.itmax_irka = ro.itmax_irka;
        cfg.itmax_outer = ro.itmax_outer;
        cfg.itmax_inner = ro.itmax_inner;
        cfg.tau = ro.tau;
        cfg.init = ro.init;
        cfg.seed = ro.seed;
        cfg.output_dir = ro.out_dir;
        cfg.compute_sigma = ro.with_sigma;
      }
      mor::ExperimentResult result = mor::run_experiment(cfg);
      std::cout << mor::compare_report(result.outcomes);
      for (const auto &o : result.outcomes)
        if (!o.error.empty())
          std::cerr << mor::to_string(o.method) << " failed: " << o.error
                    << "\n";
      return result.all_ok() ? 0 : 1;
    }

    if (smp->parsed())
    {
      mor::DescriptorSystem sys = mor::load_problem(make_spec(smp_opts));
      std::vector<double> omegas(w_points);
      const double lmin = std::log10(w_min), lmax = std::log10(w_max);
      for (int i = 0; i < w_points; ++i)
        omegas[i] = std::pow(
            10.0, lmin + (lmax - lmin) * i / std::max(1, w_points - 1));
      std::cout << "omega,magnitude\n";
      for (const auto &pt : mor::sample_transfer(sys, omegas))
        std::printf("%.17g,%.17g\n", pt.omega, pt.magnitude);
      return 0;
    }
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
