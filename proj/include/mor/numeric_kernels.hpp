// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_NUMERIC_KERNELS_HPP
#define MOR_NUMERIC_KERNELS_HPP

#include <Eigen/SparseLU>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mor/types.hpp"

namespace mor
{

/// Deterministic standard-normal stream: mt19937_64 + Box-Muller
/// (std::normal_distribution is implementation-defined, this is portable).
class NormalStream
{
public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

  double next()
  {
    if (have_)
    {
      have_ = false;
      return spare_;
    }
    double u1;
    do
    {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_ = true;
    return r * std::cos(t);
  }

private:
  double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53; }
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_ = false;
};

/// Column-major matrix of seeded standard normals.
MatR seeded_gaussian(Index rows, Index cols, std::uint64_t seed);

/// Sparse LU factorization of (A - sE), reusable for any number of
/// right-hand sides. Adjoint solves (A - sE)^H x = rhs share the same
/// factorization. Each solve bumps the global SolveCounter by one per
/// right-hand-side column (unless counting is suspended).
class ShiftedFactorization
{
public:
  ShiftedFactorization(const SpMat &A, const SpMat &E, Complex s);

  MatC solve(const MatC &rhs) const;
  MatC solve_adjoint(const MatC &rhs) const;

  Complex shift() const { return shift_; }

private:
  // mutable: SparseLU::adjoint() is non-const in Eigen 3.4 though it does
  // not modify the factorization.
  mutable Eigen::SparseLU<SpMat> lu_;
  Complex shift_;
  Index n_;
};

/// Result of Gram-Schmidt orthonormalization with rank deflation.
struct OrthResult
{
  MatC Q;                   // orthonormal columns
  std::vector<Index> kept;  // retained input-column indices, in order
  std::vector<Index> dropped;
};

inline constexpr double kDefaultRankTol = 1e-10;

/// Modified Gram-Schmidt with one reorthogonalization pass, processing
/// columns in order. A column whose residual falls below rank_tol times its
/// original norm is dropped and recorded. Throws on an all-dropped input.
OrthResult orth(const MatC &M, double rank_tol = kDefaultRankTol);

/// Orthogonalizes `block` against the orthonormal columns of Q, then
/// internally. Returns the surviving columns (possibly zero of them).
OrthResult orth_against(const MatC &Q, const MatC &block,
                        double rank_tol = kDefaultRankTol);

struct GenEigResult
{
  VecC values;         // canonically sorted (Re, then Im, ascending)
  MatC right_vectors;  // columns aligned with values
};

/// Dense generalized eigensolve of the pencil (A_red, E_red) via
/// eig(E_red^{-1} A_red). For real input data the eigenvalue multiset is
/// post-processed into exact conjugate pairs (vectors conjugated to match).
GenEigResult small_gen_eig(const MatC &A_red, const MatC &E_red,
                           bool real_input, Index dense_cap = 2000);

/// Solves F X + X G = RHS (dense, Bartels-Stewart via complex Schur forms).
/// Throws when the spectra of F and -G overlap within tolerance.
MatC solve_sylvester(const MatC &F, const MatC &G, const MatC &RHS,
                     Index dense_cap = 2000);

/// Approximate orthonormal basis of the invariant subspace belonging to the
/// k eigenvalues of (A, E) of smallest magnitude. Shift-invert Arnoldi at
/// zero with Ritz restarts; deterministic for a fixed seed. For real data
/// the returned basis is real (zero imaginary part). Solves performed here
/// are not counted.
MatC smallest_eigs(const SpMat &A, const SpMat &E, Index k,
                   std::uint64_t seed = 0);

} // namespace mor

#endif // MOR_NUMERIC_KERNELS_HPP
