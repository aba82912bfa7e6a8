// SPDX-License-Identifier: Apache-2.0

#include "mor/rational_krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mor/numeric_kernels.hpp"

namespace mor
{

void ShiftSet::canonical_sort()
{
  std::vector<Complex> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  values = Eigen::Map<VecC>(v.data(), static_cast<Index>(v.size()));
}

bool ShiftSet::is_conj_closed(double tol) const
{
  std::vector<bool> used(static_cast<size_t>(values.size()), false);
  for (Index i = 0; i < values.size(); ++i)
  {
    if (used[static_cast<size_t>(i)] || values[i].imag() == 0.0)
      continue;
    bool found = false;
    for (Index j = 0; j < values.size(); ++j)
    {
      if (j == i || used[static_cast<size_t>(j)])
        continue;
      if (std::abs(values[j] - std::conj(values[i])) <= tol)
      {
        used[static_cast<size_t>(i)] = used[static_cast<size_t>(j)] = true;
        found = true;
        break;
      }
    }
    if (!found)
      return false;
  }
  return true;
}

ShiftSet ones_shifts(Index r)
{
  return ShiftSet(VecC::Ones(r));
}

double shift_distance(const ShiftSet &s_new, const ShiftSet &s_old)
{
  if (s_new.size() != s_old.size())
    return std::numeric_limits<double>::infinity();
  ShiftSet a = s_new, b = s_old;
  a.canonical_sort();
  b.canonical_sort();
  const double denom = a.values.norm();
  if (denom == 0.0)
    return std::numeric_limits<double>::infinity();
  return (a.values - b.values).norm() / denom;
}

VecC normalize_direction(const VecC &v)
{
  const double nrm = v.norm();
  if (nrm == 0.0)
    throw Error("normalize_direction: zero direction");
  VecC u = v / nrm;
  Index imax;
  u.cwiseAbs().maxCoeff(&imax);
  const Complex e = u[imax];
  u *= std::abs(e) / e;
  return u;
}

TangentSet default_tangents(Index m, Index p, Index r)
{
  TangentSet t;
  t.b_dirs = MatC::Constant(m, r, Complex(1.0 / std::sqrt(double(m)), 0.0));
  t.c_dirs = MatC::Constant(p, r, Complex(1.0 / std::sqrt(double(p)), 0.0));
  return t;
}

namespace
{

struct SideColumns
{
  MatC V, W;
};

// Core solver for both rational Krylov sides. One factorization per
// processed shift; left columns come from adjoint solves on the same handle.
// For real data, a conjugate pair is served by one complex solve whose real
// and imaginary parts become two columns (counter bumped once per shift).
SideColumns rk_columns_impl(const DescriptorSystem &sys, const ShiftSet &shifts,
                            const TangentSet *tangents, bool want_right,
                            bool want_left)
{
  const Index r = shifts.size();
  const Index n = sys.n();
  if (r == 0)
    throw DimensionError("rk_columns: empty shift set");
  if (!tangents && sys.m() > 1 && want_right)
    throw Error("rk_columns: MIMO right side requires tangential directions");
  if (!tangents && sys.p() > 1 && want_left)
    throw Error("rk_columns: MIMO left side requires tangential directions");
  if (tangents && tangents->size() != r)
    throw DimensionError("rk_columns: tangent count must match shift count");

  SideColumns out;
  if (want_right)
    out.V = MatC(n, r);
  if (want_left)
    out.W = MatC(n, r);

  std::vector<bool> done(static_cast<size_t>(r), false);
  const bool realify = sys.real_data();
  for (Index j = 0; j < r; ++j)
  {
    if (done[static_cast<size_t>(j)])
      continue;
    const Complex s = shifts.values[j];
    Index partner = -1;
    if (realify && s.imag() != 0.0)
    {
      for (Index k2 = j + 1; k2 < r; ++k2)
        if (!done[static_cast<size_t>(k2)] &&
            shifts.values[k2] == std::conj(s))
        {
          partner = k2;
          break;
        }
    }

    VecC rhs_b, rhs_c;
    if (want_right)
      rhs_b = tangents ? VecC(sys.B() * tangents->b_dirs.col(j))
                       : VecC(sys.B().col(0));
    if (want_left)
      rhs_c = tangents ? VecC(sys.C() * tangents->c_dirs.col(j))
                       : VecC(sys.C().col(0));

    ShiftedFactorization fac(sys.A(), sys.E(), s);
    if (partner >= 0)
    {
      // Pair (s, conj s): span{x, conj x} = span{Re x, Im x}. The solve
      // serves both shifts, so account one extra per side.
      if (want_right)
      {
        VecC x = fac.solve(rhs_b);
        SolveCounter::add(1);
        out.V.col(std::min(j, partner)) = x.real().cast<Complex>();
        out.V.col(std::max(j, partner)) = x.imag().cast<Complex>();
      }
      if (want_left)
      {
        VecC y = fac.solve_adjoint(rhs_c);
        SolveCounter::add(1);
        out.W.col(std::min(j, partner)) = y.real().cast<Complex>();
        out.W.col(std::max(j, partner)) = y.imag().cast<Complex>();
      }
      done[static_cast<size_t>(partner)] = true;
    }
    else
    {
      if (want_right)
        out.V.col(j) = fac.solve(rhs_b);
      if (want_left)
        out.W.col(j) = fac.solve_adjoint(rhs_c);
      if (realify && s.imag() == 0.0)
      {
        // Real shift on real data: the solution is real up to stored zeros.
        if (want_right)
          out.V.col(j) = out.V.col(j).real().cast<Complex>();
        if (want_left)
          out.W.col(j) = out.W.col(j).real().cast<Complex>();
      }
    }
    done[static_cast<size_t>(j)] = true;
  }
  return out;
}

} // namespace

RKColumns rk_columns(const DescriptorSystem &sys, const ShiftSet &shifts,
                     const TangentSet *tangents)
{
  SideColumns sc = rk_columns_impl(sys, shifts, tangents, true, true);
  return RKColumns{std::move(sc.V), std::move(sc.W)};
}

RKBasis build_rk_basis(const DescriptorSystem &sys, const ShiftSet &shifts,
                       Side side, const TangentSet *tangents, double rank_tol)
{
  SideColumns sc = rk_columns_impl(sys, shifts, tangents, side == Side::Right,
                                   side == Side::Left);
  const MatC &raw = (side == Side::Right) ? sc.V : sc.W;
  OrthResult o = orth(raw, rank_tol);
  RKBasis basis;
  basis.Q = std::move(o.Q);
  basis.side = side;
  basis.blocks.push_back({0, 0, basis.Q.cols(), raw});
  return basis;
}

RKBasis wrap_basis(const MatC &Q, Side side, int nblocks)
{
  RKBasis basis;
  basis.Q = Q;
  basis.side = side;
  if (nblocks < 1)
    nblocks = 1;
  const Index per = Q.cols() / nblocks;
  Index at = 0;
  for (int b = 0; b < nblocks; ++b)
  {
    const Index cols = (b == nblocks - 1) ? Q.cols() - at : per;
    basis.blocks.push_back({b - nblocks + 1, at, cols, Q.middleCols(at, cols)});
    at += cols;
  }
  return basis;
}

RKBasis expand_basis(const RKBasis &basis, const MatC &new_block,
                     int iter_index, double rank_tol)
{
  if (new_block.rows() != basis.Q.rows())
    throw DimensionError("expand_basis: row count mismatch");
  OrthResult o = orth_against(basis.Q, new_block, rank_tol);
  RKBasis out = basis;
  out.expansion_deflated = (o.Q.cols() == 0);
  if (o.Q.cols() == 0)
    return out; // whole block deflated: unchanged, flagged
  const Index begin = out.Q.cols();
  MatC Q(out.Q.rows(), begin + o.Q.cols());
  Q.leftCols(begin) = out.Q;
  Q.rightCols(o.Q.cols()) = o.Q;
  out.Q = std::move(Q);
  out.blocks.push_back({iter_index, begin, o.Q.cols(), new_block});
  return out;
}

RKBasis truncate_window(const RKBasis &basis, int tau, bool allow_tau1)
{
  if (tau < 2 && !(tau == 1 && allow_tau1))
    throw Error("truncate_window: tau must be >= 2 (tau = 1 requires the "
                "debug flag)");
  const int keep = tau - 1;
  if (static_cast<int>(basis.blocks.size()) <= keep)
    return basis;
  // Rebuild the window basis from the retained blocks' raw columns. The
  // stored orthonormal columns are Gram-Schmidt residuals against dropped
  // blocks; re-orthonormalizing the raw spans restores the union of the
  // retained rational Krylov spaces (and hence their interpolation data).
  RKBasis out;
  out.side = basis.side;
  out.expansion_deflated = basis.expansion_deflated;
  const size_t first = basis.blocks.size() - static_cast<size_t>(keep);
  for (size_t b = first; b < basis.blocks.size(); ++b)
  {
    const auto &blk = basis.blocks[b];
    OrthResult o = (out.Q.cols() == 0) ? orth(blk.raw)
                                       : orth_against(out.Q, blk.raw);
    if (o.Q.cols() == 0)
      continue; // block fully contained in the newer retained spans
    const Index begin = out.Q.cols();
    MatC Q(basis.Q.rows(), begin + o.Q.cols());
    if (begin > 0)
      Q.leftCols(begin) = out.Q;
    Q.rightCols(o.Q.cols()) = o.Q;
    out.Q = std::move(Q);
    out.blocks.push_back({blk.iter, begin, o.Q.cols(), blk.raw});
  }
  return out;
}

} // namespace mor
