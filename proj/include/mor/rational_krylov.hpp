// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_RATIONAL_KRYLOV_HPP
#define MOR_RATIONAL_KRYLOV_HPP

#include <optional>
#include <vector>

#include "mor/lti_system.hpp"
#include "mor/numeric_kernels.hpp"
#include "mor/types.hpp"

namespace mor
{

/// Ordered multiset of interpolation points. Canonical ordering is ascending
/// by (real part, then imaginary part), which keeps conjugate pairs adjacent.
struct ShiftSet
{
  VecC values;

  ShiftSet() = default;
  explicit ShiftSet(VecC v) : values(std::move(v)) {}

  Index size() const { return values.size(); }
  void canonical_sort();
  bool is_conj_closed(double tol = 0.0) const;
};

ShiftSet ones_shifts(Index r);

/// chi = ||S_new - S_old||_2 / ||S_new||_2 after canonical sorting of both
/// sets. Unequal cardinalities (or an all-zero new set) give +infinity.
double shift_distance(const ShiftSet &s_new, const ShiftSet &s_old);

/// Tangential directions aligned one-to-one with a shift set. b_dirs is
/// m x r, c_dirs is p x r; columns have unit norm with the largest-magnitude
/// entry rotated positive real.
struct TangentSet
{
  MatC b_dirs;
  MatC c_dirs;

  Index size() const { return b_dirs.cols(); }
};

TangentSet default_tangents(Index m, Index p, Index r);

/// Normalizes v to unit norm with its largest-magnitude entry positive real.
VecC normalize_direction(const VecC &v);

enum class Side
{
  Right, // V, built from (A, E, B)
  Left   // W, built from (A^H, E^H, C)
};

/// Orthonormal basis with per-iteration block bookkeeping (the truncation
/// window operates on blocks). Immutable by convention; expansion returns a
/// new value. Each block retains its raw (pre-orthogonalization) columns:
/// a later truncation must rebuild the window basis from raw spans, because
/// the orthonormalized columns of a block are residuals against earlier,
/// possibly dropped, blocks and no longer span the block's Krylov space.
struct RKBasis
{
  MatC Q;
  struct Block
  {
    int iter;
    Index begin;
    Index cols;
    MatC raw; // the block's columns as computed, before orthogonalization
  };
  std::vector<Block> blocks;
  Side side = Side::Right;
  bool expansion_deflated = false; // set when a whole block deflated away

  Index cols() const { return Q.cols(); }
};

/// Raw (unorthogonalized) rational Krylov columns for both sides at once,
/// sharing one factorization of (A - sE) per distinct shift; the left side
/// uses adjoint solves. For real data with a conjugation-closed shift set,
/// a conjugate pair contributes the real and imaginary parts of one complex
/// solve (Re column first), and the solve counter is bumped once per shift
/// per side. MIMO systems require tangents.
struct RKColumns
{
  MatC V; // n x r
  MatC W; // n x r
};
RKColumns rk_columns(const DescriptorSystem &sys, const ShiftSet &shifts,
                     const TangentSet *tangents = nullptr);

/// Orthonormal basis of the rational Krylov subspace for one side.
RKBasis build_rk_basis(const DescriptorSystem &sys, const ShiftSet &shifts,
                       Side side, const TangentSet *tangents = nullptr,
                       double rank_tol = kDefaultRankTol);

/// Wraps already-orthonormal columns (e.g. an eigenbasis) as a basis with
/// `nblocks` equal blocks for window bookkeeping.
RKBasis wrap_basis(const MatC &Q, Side side, int nblocks = 1);

/// Appends new_block (orthogonalized against the existing columns, then
/// internally) as one block tagged iter_index. Existing columns unchanged.
RKBasis expand_basis(const RKBasis &basis, const MatC &new_block,
                     int iter_index, double rank_tol = kDefaultRankTol);

/// Keeps only the most recent (tau - 1) blocks, to be applied before the
/// next expansion so the post-expansion window holds tau blocks. The window
/// basis is re-orthonormalized from the retained blocks' raw columns so it
/// spans the union of their rational Krylov spaces. tau = 1 is permitted
/// only with allow_tau1 (degenerates to no accumulation).
RKBasis truncate_window(const RKBasis &basis, int tau, bool allow_tau1 = false);

} // namespace mor

#endif // MOR_RATIONAL_KRYLOV_HPP
