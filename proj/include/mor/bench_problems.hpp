// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_BENCH_PROBLEMS_HPP
#define MOR_BENCH_PROBLEMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mor/lti_system.hpp"

namespace mor
{

/// Built-in elliptic operators, discretized with second-order centered
/// finite differences on the unit square/cube interior with zero Dirichlet
/// boundary, uniform grid spacing h = 1/(grid + 1).
enum class OperatorId
{
  Laplace2D,         // u_xx + u_yy
  Laplace3D,         // u_xx + u_yy + u_zz
  L10000,            // (e^{-10xy} u_x)_x + (e^{10xy} u_y)_y - (10(x+y) u)_x
  L10648,            // Laplace3D - 10x u_x - 1000y u_y - 10 u_z
  L10648Diffusion,   // convection-free variant of L10648
  L160000            // div(e^{3xy} grad u) - u_x/(x+y)
};

OperatorId operator_id_from_string(const std::string &name);
std::string to_string(OperatorId id);

struct EllipticParams
{
  OperatorId op = OperatorId::Laplace2D;
  Index grid = 10;      // interior points per dimension
  Index m = 2;          // input columns
  Index p = 2;          // output columns
  std::uint64_t seed_b = 0;
  std::uint64_t seed_c = 10;
};

/// Sparse A from the finite-difference discretization, E = I, seeded
/// standard-normal B and C. Deterministic: identical parameters give a
/// bitwise-identical system.
DescriptorSystem gen_elliptic(const EllipticParams &params);

/// Banded Toeplitz operator with the given diagonal offsets and values,
/// E = I, seeded B and C.
struct ToeplitzParams
{
  Index n = 1000;
  std::vector<int> offsets{-2, -1, 0, 1};
  std::vector<double> values{0.5, 1.0, -3.0, 1.0};
  Index m = 2;
  Index p = 2;
  std::uint64_t seed_b = 0;
  std::uint64_t seed_c = 10;
};
DescriptorSystem gen_toeplitz(const ToeplitzParams &params);

/// Assembles a system from a directory holding A.mtx, B.mtx, C.mtx and an
/// optional E.mtx (identity when absent).
DescriptorSystem load_matrix_market_dir(const std::string &dir);

/// Writes E.mtx, A.mtx, B.mtx, C.mtx into dir (created by the caller).
void save_matrix_market_dir(const DescriptorSystem &sys,
                            const std::string &dir);

} // namespace mor

#endif // MOR_BENCH_PROBLEMS_HPP
