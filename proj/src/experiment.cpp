// SPDX-License-Identifier: Apache-2.0

#include "mor/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mor
{

using nlohmann::json;

std::string to_string(Method m)
{
  switch (m)
  {
  case Method::IRKA:
    return "IRKA";
  case Method::RIRKA:
    return "RIRKA";
  case Method::TRIRKA:
    return "TRIRKA";
  }
  throw Error("unknown method");
}

Method method_from_string(const std::string &name)
{
  if (name == "IRKA" || name == "irka")
    return Method::IRKA;
  if (name == "RIRKA" || name == "rirka")
    return Method::RIRKA;
  if (name == "TRIRKA" || name == "trirka")
    return Method::TRIRKA;
  throw Error("unknown method: " + name);
}

DescriptorSystem load_problem(const ProblemSpec &spec)
{
  DescriptorSystem sys = [&] {
    switch (spec.kind)
    {
    case ProblemSpec::Kind::EllipticFD:
      return gen_elliptic(spec.elliptic);
    case ProblemSpec::Kind::Toeplitz:
      return gen_toeplitz(spec.toeplitz);
    case ProblemSpec::Kind::MatrixMarketDir:
      return load_matrix_market_dir(spec.path);
    }
    throw Error("unknown problem kind");
  }();
  if (spec.siso_select)
    return sys.select_siso(spec.siso_select->first, spec.siso_select->second);
  return sys;
}

namespace
{

std::string fmt17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char *status_name(Termination t)
{
  switch (t)
  {
  case Termination::Converged:
    return "converged";
  case Termination::ItmaxReached:
    return "itmax";
  case Termination::Stagnation:
    return "stagnation";
  case Termination::Error:
    return "error";
  }
  return "unknown";
}

json shifts_to_json(const VecC &s)
{
  json arr = json::array();
  for (Index i = 0; i < s.size(); ++i)
    arr.push_back({{"re", s[i].real()}, {"im", s[i].imag()}});
  return arr;
}

void write_convergence_csv(const ConvergenceRecord &rec,
                           const std::string &path)
{
  std::ofstream out(path);
  out << "iter,chi,cum_solves,basis_dim,inner_iters,wall_ms\n";
  for (const auto &e : rec.entries)
    out << e.iter << ',' << fmt17(e.chi) << ',' << e.cumulative_solves << ','
        << e.basis_cols_v << ',' << e.inner_iterations << ','
        << fmt17(e.wall_ms) << '\n';
}

} // namespace

ExperimentConfig config_from_json(const json &j)
{
  ExperimentConfig cfg;
  const json &jp = j.at("problem");
  cfg.problem.name = jp.value("name", "");
  const std::string kind = jp.value("kind", "elliptic");
  if (kind == "elliptic")
  {
    cfg.problem.kind = ProblemSpec::Kind::EllipticFD;
    const json &pp = jp.at("params");
    cfg.problem.elliptic.op =
        operator_id_from_string(pp.value("operator", "laplace2d"));
    cfg.problem.elliptic.grid = pp.value("grid", 10);
    cfg.problem.elliptic.m = pp.value("m", 2);
    cfg.problem.elliptic.p = pp.value("p", 2);
    cfg.problem.elliptic.seed_b = pp.value("seed_b", 0);
    cfg.problem.elliptic.seed_c = pp.value("seed_c", 10);
  }
  else if (kind == "toeplitz")
  {
    cfg.problem.kind = ProblemSpec::Kind::Toeplitz;
    const json &pp = jp.at("params");
    cfg.problem.toeplitz.n = pp.value("n", 1000);
    if (pp.contains("offsets"))
      cfg.problem.toeplitz.offsets = pp["offsets"].get<std::vector<int>>();
    if (pp.contains("values"))
      cfg.problem.toeplitz.values = pp["values"].get<std::vector<double>>();
    cfg.problem.toeplitz.m = pp.value("m", 2);
    cfg.problem.toeplitz.p = pp.value("p", 2);
    cfg.problem.toeplitz.seed_b = pp.value("seed_b", 0);
    cfg.problem.toeplitz.seed_c = pp.value("seed_c", 10);
  }
  else if (kind == "matrix_market")
  {
    cfg.problem.kind = ProblemSpec::Kind::MatrixMarketDir;
    cfg.problem.path = jp.at("path").get<std::string>();
  }
  else
  {
    throw Error("config: unknown problem kind '" + kind + "'");
  }
  if (jp.contains("siso_select"))
    cfg.problem.siso_select = {jp["siso_select"].at(0).get<Index>(),
                               jp["siso_select"].at(1).get<Index>()};

  cfg.methods.clear();
  for (const auto &m : j.at("methods"))
    cfg.methods.push_back(method_from_string(m.get<std::string>()));
  if (cfg.methods.empty())
    throw Error("config: at least one method required");
  cfg.r = j.at("r").get<Index>();
  cfg.tol = j.value("tol", 1e-8);
  if (j.contains("tol_inner"))
    cfg.tol_inner = j["tol_inner"].get<double>();
  cfg.itmax_irka = j.value("itmax_irka", 300);
  cfg.itmax_outer = j.value("itmax_outer", 30);
  cfg.itmax_inner = j.value("itmax_inner", 300);
  cfg.tau = j.value("tau", 3);
  cfg.init = j.value("init", "eig");
  cfg.seed = j.value("seed", 0);
  cfg.output_dir = j.value("output_dir", "");
  cfg.compute_sigma = j.value("compute_sigma", false);
  cfg.sigma_dense_cap = j.value("sigma_dense_cap", 2000);
  return cfg;
}

json config_to_json(const ExperimentConfig &cfg)
{
  json jp;
  jp["name"] = cfg.problem.name;
  switch (cfg.problem.kind)
  {
  case ProblemSpec::Kind::EllipticFD:
    jp["kind"] = "elliptic";
    jp["params"] = {{"operator", to_string(cfg.problem.elliptic.op)},
                    {"grid", cfg.problem.elliptic.grid},
                    {"m", cfg.problem.elliptic.m},
                    {"p", cfg.problem.elliptic.p},
                    {"seed_b", cfg.problem.elliptic.seed_b},
                    {"seed_c", cfg.problem.elliptic.seed_c}};
    break;
  case ProblemSpec::Kind::Toeplitz:
    jp["kind"] = "toeplitz";
    jp["params"] = {{"n", cfg.problem.toeplitz.n},
                    {"offsets", cfg.problem.toeplitz.offsets},
                    {"values", cfg.problem.toeplitz.values},
                    {"m", cfg.problem.toeplitz.m},
                    {"p", cfg.problem.toeplitz.p},
                    {"seed_b", cfg.problem.toeplitz.seed_b},
                    {"seed_c", cfg.problem.toeplitz.seed_c}};
    break;
  case ProblemSpec::Kind::MatrixMarketDir:
    jp["kind"] = "matrix_market";
    jp["path"] = cfg.problem.path;
    break;
  }
  if (cfg.problem.siso_select)
    jp["siso_select"] = {cfg.problem.siso_select->first,
                         cfg.problem.siso_select->second};
  json j;
  j["problem"] = jp;
  j["methods"] = json::array();
  for (Method m : cfg.methods)
    j["methods"].push_back(to_string(m));
  j["r"] = cfg.r;
  j["tol"] = cfg.tol;
  if (cfg.tol_inner)
    j["tol_inner"] = *cfg.tol_inner;
  j["itmax_irka"] = cfg.itmax_irka;
  j["itmax_outer"] = cfg.itmax_outer;
  j["itmax_inner"] = cfg.itmax_inner;
  j["tau"] = cfg.tau;
  j["init"] = cfg.init;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["compute_sigma"] = cfg.compute_sigma;
  j["sigma_dense_cap"] = cfg.sigma_dense_cap;
  return j;
}

bool ExperimentResult::all_ok() const
{
  for (const auto &o : outcomes)
    if (!o.error.empty() || o.record.status == Termination::Error)
      return false;
  return !outcomes.empty();
}

namespace
{

MethodOutcome run_method(const DescriptorSystem &sys,
                         const ExperimentConfig &cfg, Method method)
{
  MethodOutcome out;
  out.method = method;
  const double tol_inner = cfg.tol_inner ? *cfg.tol_inner : cfg.tol / 2.0;
  ReducedModel model{sys, VecC(), std::nullopt, VecC()}; // placeholder
  try
  {
    if (method == Method::IRKA)
    {
      IrkaConfig icfg;
      icfg.r = cfg.r;
      icfg.tol = cfg.tol;
      icfg.itmax = cfg.itmax_irka;
      icfg.seed = cfg.seed;
      icfg.init = (cfg.init == "random") ? InitOption::RandomBases
                                         : InitOption::EigInit;
      IrkaResult res = irka(sys, icfg);
      out.record = std::move(res.record);
      out.shifts = res.shifts.values;
      model = std::move(res.model);
    }
    else
    {
      RirkaConfig rcfg;
      rcfg.r = cfg.r;
      rcfg.tol_outer = cfg.tol;
      rcfg.tol_inner = tol_inner;
      rcfg.itmax_outer = cfg.itmax_outer;
      rcfg.itmax_inner = cfg.itmax_inner;
      rcfg.seed = cfg.seed;
      rcfg.init = (cfg.init == "random") ? RirkaInit::RandomBases2r
                                         : RirkaInit::EigInit2r;
      if (method == Method::TRIRKA)
        rcfg.tau = cfg.tau;
      RirkaResult res = rirka(sys, rcfg);
      out.record = std::move(res.record);
      out.shifts = res.shifts.values;
      model = std::move(res.model);
    }
    if (cfg.compute_sigma && sys.n() + cfg.r <= cfg.sigma_dense_cap)
    {
      try
      {
        out.h2 = sigma(sys, model, cfg.sigma_dense_cap);
      }
      catch (const Error &e)
      {
        out.record.message += std::string("sigma unavailable: ") + e.what();
      }
    }
  }
  catch (const Error &e)
  {
    out.error = e.what();
    out.record.status = Termination::Error;
    out.record.message = e.what();
  }
  return out;
}

json summary_json(const ExperimentConfig &cfg, const MethodOutcome &o)
{
  json row;
  row["method"] = to_string(o.method);
  row["status"] = status_name(o.record.status);
  row["iterations"] = o.record.iterations();
  row["xi_lin"] = o.record.total_solves;
  row["ell_fin"] = o.record.final_subspace;
  row["r"] = cfg.r;
  double cpu_s = 0.0;
  if (!o.record.entries.empty())
    cpu_s = o.record.entries.back().wall_ms / 1000.0;
  row["cpu_s"] = cpu_s;
  if (o.h2)
  {
    row["sigma"] = o.h2->sigma;
    row["sigma_approximate"] = o.h2->approximate;
  }
  if (!o.error.empty())
    row["error"] = o.error;
  if (!o.record.message.empty())
    row["note"] = o.record.message;
  return row;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig &cfg)
{
  if (cfg.methods.empty())
    throw Error("run_experiment: no methods configured");
  if (cfg.r < 1)
    throw Error("run_experiment: r must be positive");
  DescriptorSystem sys = load_problem(cfg.problem);

  ExperimentResult result;
  for (Method m : cfg.methods)
    result.outcomes.push_back(run_method(sys, cfg, m));

  if (!cfg.output_dir.empty())
  {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    const fs::path base(cfg.output_dir);
    for (const auto &o : result.outcomes)
    {
      const std::string name = to_string(o.method);
      write_convergence_csv(o.record, (base / (name + "_convergence.csv")).string());
      json js;
      js["method"] = name;
      js["shifts"] = shifts_to_json(o.shifts);
      js["initial_shifts"] = shifts_to_json(o.record.initial_shifts);
      std::ofstream((base / (name + "_shifts.json")).string()) << js.dump(2)
                                                               << '\n';
    }
    json summary = json::array();
    for (const auto &o : result.outcomes)
      summary.push_back(summary_json(cfg, o));
    std::ofstream((base / "summary.json").string()) << summary.dump(2) << '\n';
    std::ofstream((base / "summary.csv").string())
        << compare_csv(result.outcomes);
    std::ofstream((base / "comparison.txt").string())
        << compare_report(result.outcomes);
    std::ofstream((base / "config.json").string())
        << config_to_json(cfg).dump(2) << '\n';
  }
  return result;
}

std::string compare_report(const std::vector<MethodOutcome> &outcomes)
{
  if (outcomes.empty())
    throw Error("compare_report: no records");
  std::ostringstream os;
  auto row = [&](const std::string &label, auto fn) {
    os << label;
    for (const auto &o : outcomes)
    {
      std::ostringstream cell;
      fn(cell, o);
      os << ' ' << cell.str();
      for (size_t pad = cell.str().size(); pad < 14; ++pad)
        os << ' ';
    }
    os << '\n';
  };
  row("method   ", [](std::ostringstream &c, const MethodOutcome &o) {
    c << to_string(o.method);
  });
  row("status   ", [](std::ostringstream &c, const MethodOutcome &o) {
    c << status_name(o.record.status);
  });
  row("#its     ", [](std::ostringstream &c, const MethodOutcome &o) {
    c << o.record.iterations();
  });
  row("xi_lin   ", [](std::ostringstream &c, const MethodOutcome &o) {
    c << o.record.total_solves;
  });
  row("ell_fin  ", [](std::ostringstream &c, const MethodOutcome &o) {
    c << o.record.final_subspace;
  });
  row("sigma    ", [](std::ostringstream &c, const MethodOutcome &o) {
    if (o.h2)
      c << fmt17(o.h2->sigma);
    else
      c << "-";
  });
  return os.str();
}

std::string compare_csv(const std::vector<MethodOutcome> &outcomes)
{
  std::ostringstream os;
  os << "method,status,iterations,xi_lin,ell_fin,sigma\n";
  for (const auto &o : outcomes)
  {
    os << to_string(o.method) << ',' << status_name(o.record.status) << ','
       << o.record.iterations() << ',' << o.record.total_solves << ','
       << o.record.final_subspace << ',';
    if (o.h2)
      os << fmt17(o.h2->sigma);
    os << '\n';
  }
  return os.str();
}

} // namespace mor
