// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_LTI_SYSTEM_HPP
#define MOR_LTI_SYSTEM_HPP

#include <map>
#include <memory>
#include <optional>

#include "mor/types.hpp"

namespace mor
{

class ShiftedFactorization;

/// Descriptor LTI system E x' = A x + B u, y = C^H x.
///
/// A and E are stored sparse (dense inputs are converted); B and C are dense
/// with few columns. The system is immutable after construction and safe to
/// share across threads.
class DescriptorSystem
{
public:
  DescriptorSystem() = default; // empty placeholder (n = m = p = 0)
  DescriptorSystem(SpMat E, SpMat A, MatC B, MatC C);

  // Convenience constructors from dense data; E defaults to the identity.
  static DescriptorSystem FromDense(const MatC &E, const MatC &A, const MatC &B,
                                    const MatC &C);
  static DescriptorSystem FromDense(const MatC &A, const MatC &B, const MatC &C);

  Index n() const { return A_.rows(); }
  Index m() const { return B_.cols(); }
  Index p() const { return C_.cols(); }

  const SpMat &E() const { return E_; }
  const SpMat &A() const { return A_; }
  const MatC &B() const { return B_; }
  const MatC &C() const { return C_; }

  bool real_data() const { return real_; }
  bool symmetric() const { return symmetric_; }

  MatC denseE() const { return MatC(E_); }
  MatC denseA() const { return MatC(A_); }

  /// SISO restriction sharing E and A, with b = B(:, b_col), c = C(:, c_col).
  DescriptorSystem select_siso(Index b_col, Index c_col) const;

private:
  SpMat E_, A_;
  MatC B_, C_;
  bool real_ = true;
  bool symmetric_ = false;
};

/// Transfer function sample h(s) = C^H (sE - A)^{-1} B, optionally with the
/// analytic derivative h'(s) = -C^H (sE - A)^{-1} E (sE - A)^{-1} B.
struct TransferSample
{
  Complex point;
  MatC value;
  std::optional<MatC> derivative;
};

TransferSample eval_transfer(const DescriptorSystem &sys, Complex s,
                             bool with_derivative = false);

/// Evaluates h and h' at repeated frequencies reusing one factorization per
/// distinct node (the interpolation checker queries each node twice).
class TransferEvaluator
{
public:
  explicit TransferEvaluator(const DescriptorSystem &sys) : sys_(sys) {}

  TransferSample operator()(Complex s, bool with_derivative = false);

private:
  const DescriptorSystem &sys_;
  struct CmpComplex
  {
    bool operator()(Complex a, Complex b) const
    {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    }
  };
  std::map<Complex, std::shared_ptr<ShiftedFactorization>, CmpComplex> cache_;
};

/// Eigenvalues of the pencil (A, E), canonically sorted (Re, then Im,
/// ascending). Dense path; refuses n above the cap.
VecC poles(const DescriptorSystem &sys, Index dense_cap = 2000);

/// True iff every pole lies strictly in the open left half-plane.
bool is_c_stable(const DescriptorSystem &sys, Index dense_cap = 2000);

} // namespace mor

#endif // MOR_LTI_SYSTEM_HPP
