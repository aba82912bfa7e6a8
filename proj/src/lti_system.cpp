// SPDX-License-Identifier: Apache-2.0

#include "mor/lti_system.hpp"

#include <Eigen/Eigenvalues>

#include "mor/numeric_kernels.hpp"

namespace mor
{

namespace
{

bool sparse_is_real(const SpMat &M)
{
  for (Index k = 0; k < M.outerSize(); ++k)
    for (SpMat::InnerIterator it(M, k); it; ++it)
      if (it.value().imag() != 0.0)
        return false;
  return true;
}

bool sparse_is_hermitian(const SpMat &M)
{
  SpMat D = SpMat(M.adjoint()) - M;
  for (Index k = 0; k < D.outerSize(); ++k)
    for (SpMat::InnerIterator it(D, k); it; ++it)
      if (std::abs(it.value()) != 0.0)
        return false;
  return true;
}

SpMat sparse_identity(Index n)
{
  SpMat I(n, n);
  I.setIdentity();
  return I;
}

} // namespace

DescriptorSystem::DescriptorSystem(SpMat E, SpMat A, MatC B, MatC C)
    : E_(std::move(E)), A_(std::move(A)), B_(std::move(B)), C_(std::move(C))
{
  const Index n = A_.rows();
  if (A_.cols() != n || E_.rows() != n || E_.cols() != n)
    throw DimensionError("DescriptorSystem: E and A must be square of equal size");
  if (B_.rows() != n || C_.rows() != n)
    throw DimensionError("DescriptorSystem: B and C must have n rows");
  E_.makeCompressed();
  A_.makeCompressed();
  real_ = sparse_is_real(E_) && sparse_is_real(A_) &&
          B_.imag().cwiseAbs().sum() == 0.0 && C_.imag().cwiseAbs().sum() == 0.0;
  symmetric_ = sparse_is_hermitian(E_) && sparse_is_hermitian(A_);
}

DescriptorSystem DescriptorSystem::FromDense(const MatC &E, const MatC &A,
                                             const MatC &B, const MatC &C)
{
  return DescriptorSystem(E.sparseView(), A.sparseView(), B, C);
}

DescriptorSystem DescriptorSystem::FromDense(const MatC &A, const MatC &B,
                                             const MatC &C)
{
  return DescriptorSystem(sparse_identity(A.rows()), A.sparseView(), B, C);
}

DescriptorSystem DescriptorSystem::select_siso(Index b_col, Index c_col) const
{
  if (b_col < 0 || b_col >= m() || c_col < 0 || c_col >= p())
    throw DimensionError("select_siso: column index out of range");
  return DescriptorSystem(E_, A_, B_.col(b_col), C_.col(c_col));
}

namespace
{

TransferSample eval_with(const DescriptorSystem &sys,
                         const ShiftedFactorization &fac, Complex s,
                         bool with_derivative)
{
  SolveCounter::Suspend suspend; // diagnostic evaluation, not an outer solve
  // (sE - A)^{-1} = -(A - sE)^{-1}
  MatC X = -fac.solve(sys.B());
  TransferSample out;
  out.point = s;
  out.value = sys.C().adjoint() * X;
  if (with_derivative)
  {
    MatC Y = -fac.solve(MatC(sys.E() * X));
    out.derivative = -(sys.C().adjoint() * Y);
  }
  return out;
}

} // namespace

TransferSample eval_transfer(const DescriptorSystem &sys, Complex s,
                             bool with_derivative)
{
  SolveCounter::Suspend suspend;
  ShiftedFactorization fac(sys.A(), sys.E(), s);
  return eval_with(sys, fac, s, with_derivative);
}

TransferSample TransferEvaluator::operator()(Complex s, bool with_derivative)
{
  auto it = cache_.find(s);
  if (it == cache_.end())
  {
    SolveCounter::Suspend suspend;
    it = cache_
             .emplace(s, std::make_shared<ShiftedFactorization>(sys_.A(),
                                                                sys_.E(), s))
             .first;
  }
  return eval_with(sys_, *it->second, s, with_derivative);
}

VecC poles(const DescriptorSystem &sys, Index dense_cap)
{
  if (sys.n() > dense_cap)
    throw Error("poles: dimension exceeds dense cap; use smallest_eigs for "
                "large pencils");
  // Lazily verifies nonsingular E through the reduced eigensolve path.
  GenEigResult ge = small_gen_eig(sys.denseA(), sys.denseE(), sys.real_data(),
                                  dense_cap);
  return ge.values;
}

bool is_c_stable(const DescriptorSystem &sys, Index dense_cap)
{
  const VecC lam = poles(sys, dense_cap);
  for (Index i = 0; i < lam.size(); ++i)
    if (lam[i].real() >= 0.0)
      return false;
  return true;
}

} // namespace mor
