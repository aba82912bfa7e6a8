// SPDX-License-Identifier: Apache-2.0

#include "mor/bench_problems.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <vector>

#include "mor/matrix_market.hpp"
#include "mor/numeric_kernels.hpp"

namespace mor
{

OperatorId operator_id_from_string(const std::string &name)
{
  if (name == "laplace2d")
    return OperatorId::Laplace2D;
  if (name == "laplace3d")
    return OperatorId::Laplace3D;
  if (name == "L10000" || name == "l10000")
    return OperatorId::L10000;
  if (name == "L10648" || name == "l10648")
    return OperatorId::L10648;
  if (name == "L10648_diffusion" || name == "l10648_diffusion")
    return OperatorId::L10648Diffusion;
  if (name == "L160000" || name == "l160000")
    return OperatorId::L160000;
  throw Error("unsupported operator id: " + name);
}

std::string to_string(OperatorId id)
{
  switch (id)
  {
  case OperatorId::Laplace2D:
    return "laplace2d";
  case OperatorId::Laplace3D:
    return "laplace3d";
  case OperatorId::L10000:
    return "L10000";
  case OperatorId::L10648:
    return "L10648";
  case OperatorId::L10648Diffusion:
    return "L10648_diffusion";
  case OperatorId::L160000:
    return "L160000";
  }
  throw Error("unknown operator id");
}

namespace
{

using Fn2 = std::function<double(double, double)>;

// 2-D operator (a u_x)_x + (d u_y)_y - (cflux u)_x - cpt u_x on the unit
// square. Diffusion uses midpoint coefficients, convection is centered.
SpMat assemble_2d(Index g, const Fn2 &a, const Fn2 &d, const Fn2 &cflux,
                  const Fn2 &cpt)
{
  const Index n = g * g;
  const double h = 1.0 / static_cast<double>(g + 1);
  const double h2 = h * h;
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<size_t>(5 * n));
  auto idx = [g](Index i, Index j) { return j * g + i; }; // x fastest
  for (Index j = 0; j < g; ++j)
  {
    const double y = (j + 1) * h;
    for (Index i = 0; i < g; ++i)
    {
      const double x = (i + 1) * h;
      const Index row = idx(i, j);
      const double ae = a(x + 0.5 * h, y);
      const double aw = a(x - 0.5 * h, y);
      const double dn = d(x, y + 0.5 * h);
      const double ds = d(x, y - 0.5 * h);
      double diag = -(ae + aw + dn + ds) / h2;
      double east = ae / h2;
      double west = aw / h2;
      const double north = dn / h2;
      const double south = ds / h2;
      if (cflux)
      {
        east -= cflux(x + h, y) / (2.0 * h);
        west += cflux(x - h, y) / (2.0 * h);
      }
      if (cpt)
      {
        const double c = cpt(x, y);
        east -= c / (2.0 * h);
        west += c / (2.0 * h);
      }
      trips.emplace_back(row, row, Complex(diag, 0.0));
      if (i + 1 < g)
        trips.emplace_back(row, idx(i + 1, j), Complex(east, 0.0));
      if (i > 0)
        trips.emplace_back(row, idx(i - 1, j), Complex(west, 0.0));
      if (j + 1 < g)
        trips.emplace_back(row, idx(i, j + 1), Complex(north, 0.0));
      if (j > 0)
        trips.emplace_back(row, idx(i, j - 1), Complex(south, 0.0));
    }
  }
  SpMat A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

// 3-D Laplacian plus pointwise convection b1 u_x + b2 u_y + b3 u_z,
// lexicographic ordering with x fastest.
using Fn3 = std::function<double(double, double, double)>;
SpMat assemble_3d(Index g, const Fn3 &b1, const Fn3 &b2, const Fn3 &b3)
{
  const Index n = g * g * g;
  const double h = 1.0 / static_cast<double>(g + 1);
  const double h2 = h * h;
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<size_t>(7 * n));
  auto idx = [g](Index i, Index j, Index k) { return (k * g + j) * g + i; };
  for (Index k = 0; k < g; ++k)
  {
    const double z = (k + 1) * h;
    for (Index j = 0; j < g; ++j)
    {
      const double y = (j + 1) * h;
      for (Index i = 0; i < g; ++i)
      {
        const double x = (i + 1) * h;
        const Index row = idx(i, j, k);
        const double c1 = b1 ? b1(x, y, z) : 0.0;
        const double c2 = b2 ? b2(x, y, z) : 0.0;
        const double c3 = b3 ? b3(x, y, z) : 0.0;
        trips.emplace_back(row, row, Complex(-6.0 / h2, 0.0));
        if (i + 1 < g)
          trips.emplace_back(row, idx(i + 1, j, k),
                             Complex(1.0 / h2 + c1 / (2.0 * h), 0.0));
        if (i > 0)
          trips.emplace_back(row, idx(i - 1, j, k),
                             Complex(1.0 / h2 - c1 / (2.0 * h), 0.0));
        if (j + 1 < g)
          trips.emplace_back(row, idx(i, j + 1, k),
                             Complex(1.0 / h2 + c2 / (2.0 * h), 0.0));
        if (j > 0)
          trips.emplace_back(row, idx(i, j - 1, k),
                             Complex(1.0 / h2 - c2 / (2.0 * h), 0.0));
        if (k + 1 < g)
          trips.emplace_back(row, idx(i, j, k + 1),
                             Complex(1.0 / h2 + c3 / (2.0 * h), 0.0));
        if (k > 0)
          trips.emplace_back(row, idx(i, j, k - 1),
                             Complex(1.0 / h2 - c3 / (2.0 * h), 0.0));
      }
    }
  }
  SpMat A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

SpMat identity(Index n)
{
  SpMat I(n, n);
  I.setIdentity();
  return I;
}

DescriptorSystem with_seeded_io(SpMat A, Index m, Index p, std::uint64_t sb,
                                std::uint64_t sc)
{
  const Index n = A.rows();
  MatC B = seeded_gaussian(n, m, sb).cast<Complex>();
  MatC C = seeded_gaussian(n, p, sc).cast<Complex>();
  return DescriptorSystem(identity(n), std::move(A), std::move(B),
                          std::move(C));
}

} // namespace

DescriptorSystem gen_elliptic(const EllipticParams &params)
{
  const Index g = params.grid;
  if (g < 1)
    throw Error("gen_elliptic: grid must be positive");
  SpMat A;
  switch (params.op)
  {
  case OperatorId::Laplace2D:
    A = assemble_2d(g, [](double, double) { return 1.0; },
                    [](double, double) { return 1.0; }, nullptr, nullptr);
    break;
  case OperatorId::L10000:
    A = assemble_2d(
        g, [](double x, double y) { return std::exp(-10.0 * x * y); },
        [](double x, double y) { return std::exp(10.0 * x * y); },
        [](double x, double y) { return 10.0 * (x + y); }, nullptr);
    break;
  case OperatorId::L160000:
    A = assemble_2d(
        g, [](double x, double y) { return std::exp(3.0 * x * y); },
        [](double x, double y) { return std::exp(3.0 * x * y); }, nullptr,
        [](double x, double y) { return 1.0 / (x + y); });
    break;
  case OperatorId::Laplace3D:
    A = assemble_3d(g, nullptr, nullptr, nullptr);
    break;
  case OperatorId::L10648:
    A = assemble_3d(g, [](double x, double, double) { return -10.0 * x; },
                    [](double, double y, double) { return -1000.0 * y; },
                    [](double, double, double) { return -10.0; });
    break;
  case OperatorId::L10648Diffusion:
    A = assemble_3d(g, nullptr, nullptr, nullptr);
    break;
  }
  return with_seeded_io(std::move(A), params.m, params.p, params.seed_b,
                        params.seed_c);
}

DescriptorSystem gen_toeplitz(const ToeplitzParams &params)
{
  if (params.offsets.size() != params.values.size())
    throw Error("gen_toeplitz: offsets and values must align");
  std::vector<Eigen::Triplet<Complex>> trips;
  for (size_t b = 0; b < params.offsets.size(); ++b)
  {
    const int off = params.offsets[b];
    for (Index i = 0; i < params.n; ++i)
    {
      const Index j = i + off;
      if (j >= 0 && j < params.n)
        trips.emplace_back(i, j, Complex(params.values[b], 0.0));
    }
  }
  SpMat A(params.n, params.n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return with_seeded_io(std::move(A), params.m, params.p, params.seed_b,
                        params.seed_c);
}

DescriptorSystem load_matrix_market_dir(const std::string &dir)
{
  namespace fs = std::filesystem;
  const fs::path base(dir);
  auto need = [&](const char *name) {
    const fs::path p = base / name;
    if (!fs::exists(p))
      throw Error("load_matrix_market_dir: missing " + p.string());
    return p.string();
  };
  SpMat A = load_market_sparse(need("A.mtx"));
  MatC B = load_market_dense(need("B.mtx"));
  MatC C = load_market_dense(need("C.mtx"));
  SpMat E;
  if (fs::exists(base / "E.mtx"))
    E = load_market_sparse((base / "E.mtx").string());
  else
    E = identity(A.rows());
  if (E.rows() != A.rows() || B.rows() != A.rows() || C.rows() != A.rows())
    throw DimensionError("load_matrix_market_dir: dimension mismatch across "
                         "files in " + dir);
  return DescriptorSystem(std::move(E), std::move(A), std::move(B),
                          std::move(C));
}

void save_matrix_market_dir(const DescriptorSystem &sys, const std::string &dir)
{
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  save_market_sparse(sys.E(), (base / "E.mtx").string());
  save_market_sparse(sys.A(), (base / "A.mtx").string());
  save_market_dense(sys.B(), (base / "B.mtx").string());
  save_market_dense(sys.C(), (base / "C.mtx").string());
}

} // namespace mor
