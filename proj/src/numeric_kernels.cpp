// SPDX-License-Identifier: Apache-2.0

#include "mor/numeric_kernels.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mor
{

namespace
{

bool canonical_less(Complex a, Complex b)
{
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

} // namespace

MatR seeded_gaussian(Index rows, Index cols, std::uint64_t seed)
{
  NormalStream rng(seed);
  MatR M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i)
      M(i, j) = rng.next();
  return M;
}

ShiftedFactorization::ShiftedFactorization(const SpMat &A, const SpMat &E,
                                           Complex s)
    : shift_(s), n_(A.rows())
{
  if (A.rows() != A.cols() || E.rows() != E.cols() || A.rows() != E.rows())
    throw DimensionError("factor_shifted: A and E must be square of equal size");
  SpMat M = A - s * E;
  M.makeCompressed();
  lu_.compute(M);
  if (lu_.info() != Eigen::Success)
    throw SingularShiftError("singular shifted system at s = (" +
                                 std::to_string(s.real()) + ", " +
                                 std::to_string(s.imag()) + ")",
                             s);
}

MatC ShiftedFactorization::solve(const MatC &rhs) const
{
  if (rhs.rows() != n_)
    throw DimensionError("factor_shifted solve: rhs row mismatch");
  MatC x = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success)
    throw SingularShiftError("shifted solve failed", shift_);
  SolveCounter::add(rhs.cols());
  return x;
}

MatC ShiftedFactorization::solve_adjoint(const MatC &rhs) const
{
  if (rhs.rows() != n_)
    throw DimensionError("factor_shifted solve_adjoint: rhs row mismatch");
  MatC x = lu_.adjoint().solve(rhs);
  SolveCounter::add(rhs.cols());
  return x;
}

namespace
{

// Shared MGS core: orthogonalize the columns of `block` against the columns
// of the (orthonormal) prefix Q, then against each other. `base` gives the
// index offset used in the kept/dropped bookkeeping.
OrthResult mgs(const MatC &Q0, const MatC &block, double rank_tol)
{
  const Index n = block.rows();
  OrthResult res;
  res.Q = MatC(n, Q0.cols() + block.cols());
  res.Q.leftCols(Q0.cols()) = Q0;
  Index ncols = Q0.cols();
  for (Index j = 0; j < block.cols(); ++j)
  {
    VecC v = block.col(j);
    const double nrm0 = v.norm();
    if (nrm0 == 0.0)
    {
      res.dropped.push_back(j);
      continue;
    }
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < ncols; ++i)
        v -= res.Q.col(i) * (res.Q.col(i).dot(v));
    const double nrm = v.norm();
    if (nrm <= rank_tol * nrm0)
    {
      res.dropped.push_back(j);
      continue;
    }
    res.Q.col(ncols) = v / nrm;
    res.kept.push_back(j);
    ++ncols;
  }
  res.Q.conservativeResize(n, ncols);
  return res;
}

} // namespace

OrthResult orth(const MatC &M, double rank_tol)
{
  if (M.cols() < 1)
    throw DimensionError("orth: input has no columns");
  OrthResult res = mgs(MatC(M.rows(), 0), M, rank_tol);
  if (res.Q.cols() == 0)
    throw Error("orth: empty basis (all columns deflated)");
  return res;
}

OrthResult orth_against(const MatC &Q, const MatC &block, double rank_tol)
{
  OrthResult res = mgs(Q, block, rank_tol);
  // Strip the prefix: callers only want the surviving new columns.
  const Index added = res.Q.cols() - Q.cols();
  res.Q = res.Q.rightCols(added).eval();
  return res;
}

namespace
{

// Greedy conjugate-pair enforcement on a canonically sorted spectrum of a
// real pencil. Matched pairs are averaged to exact conjugates; eigenvectors
// of the partner are replaced by the conjugate of the representative.
void enforce_conjugate_pairs(VecC &values, MatC &vectors)
{
  const Index n = values.size();
  std::vector<bool> done(n, false);
  const double scale = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  const double tol = 1e-8 * std::max(scale, 1.0);
  for (Index i = 0; i < n; ++i)
  {
    if (done[i])
      continue;
    if (std::abs(values[i].imag()) <= tol * 1e-4)
    {
      values[i] = Complex(values[i].real(), 0.0);
      done[i] = true;
      continue;
    }
    Index best = -1;
    double best_d = tol;
    for (Index j = 0; j < n; ++j)
    {
      if (j == i || done[j])
        continue;
      const double d = std::abs(values[j] - std::conj(values[i]));
      if (d < best_d)
      {
        best_d = d;
        best = j;
      }
    }
    if (best >= 0)
    {
      const Complex mu = 0.5 * (values[i] + std::conj(values[best]));
      values[i] = mu;
      values[best] = std::conj(mu);
      vectors.col(best) = vectors.col(i).conjugate();
      done[i] = done[best] = true;
    }
    else
    {
      if (std::abs(values[i].imag()) <= tol)
        values[i] = Complex(values[i].real(), 0.0);
      done[i] = true;
    }
  }
}

} // namespace

GenEigResult small_gen_eig(const MatC &A_red, const MatC &E_red,
                           bool real_input, Index dense_cap)
{
  const Index n = A_red.rows();
  if (A_red.cols() != n || E_red.rows() != n || E_red.cols() != n)
    throw DimensionError("small_gen_eig: pencil matrices must be square, equal size");
  if (n > dense_cap)
    throw Error("small_gen_eig: dimension exceeds dense cap; use the iterative "
                "eigensolver (smallest_eigs) instead");
  Eigen::PartialPivLU<MatC> lu(E_red);
  const double emax = E_red.cwiseAbs().maxCoeff();
  const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (emax == 0.0 || pivot_min <= 1e-14 * emax)
    throw Error("small_gen_eig: singular reduced E (degenerate projection basis)");
  MatC M = lu.solve(A_red);
  Eigen::ComplexEigenSolver<MatC> es(M, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw Error("small_gen_eig: eigensolver failed to converge");
  GenEigResult res;
  res.values = es.eigenvalues();
  res.right_vectors = es.eigenvectors();
  if (real_input)
    enforce_conjugate_pairs(res.values, res.right_vectors);
  // Canonical sort, vectors carried along.
  std::vector<Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), Index(0));
  std::sort(perm.begin(), perm.end(), [&](Index a, Index b) {
    return canonical_less(res.values[a], res.values[b]);
  });
  VecC vals(n);
  MatC vecs(res.right_vectors.rows(), n);
  for (Index i = 0; i < n; ++i)
  {
    vals[i] = res.values[perm[static_cast<size_t>(i)]];
    vecs.col(i) = res.right_vectors.col(perm[static_cast<size_t>(i)]);
  }
  res.values = std::move(vals);
  res.right_vectors = std::move(vecs);
  return res;
}

MatC solve_sylvester(const MatC &F, const MatC &G, const MatC &RHS,
                     Index dense_cap)
{
  const Index nf = F.rows(), ng = G.rows();
  if (F.cols() != nf || G.cols() != ng || RHS.rows() != nf || RHS.cols() != ng)
    throw DimensionError("solve_sylvester: inconsistent dimensions");
  if (nf > dense_cap || ng > dense_cap)
    throw Error("solve_sylvester: dimension exceeds dense cap");
  Eigen::ComplexSchur<MatC> sf(F), sg(G);
  if (sf.info() != Eigen::Success || sg.info() != Eigen::Success)
    throw Error("solve_sylvester: Schur decomposition failed");
  const MatC &TF = sf.matrixT();
  const MatC &TG = sg.matrixT();
  const MatC &U = sf.matrixU();
  const MatC &V = sg.matrixU();

  const double spread =
      std::max(TF.diagonal().cwiseAbs().maxCoeff(), TG.diagonal().cwiseAbs().maxCoeff());
  for (Index i = 0; i < nf; ++i)
    for (Index j = 0; j < ng; ++j)
      if (std::abs(TF(i, i) + TG(j, j)) <= 1e-12 * std::max(spread, 1.0))
        throw Error("solve_sylvester: ill-posed Sylvester equation "
                    "(spectra of F and -G overlap)");

  MatC Ct = U.adjoint() * RHS * V; // transformed right-hand side
  MatC Y(nf, ng);
  MatC T = TF;
  for (Index j = 0; j < ng; ++j)
  {
    VecC rhs = Ct.col(j);
    if (j > 0)
      rhs -= Y.leftCols(j) * TG.block(0, j, j, 1);
    T.diagonal() = (TF.diagonal().array() + TG(j, j)).matrix();
    Y.col(j) = T.triangularView<Eigen::Upper>().solve(rhs);
  }
  return U * Y * V.adjoint();
}

namespace
{

// One Arnoldi sweep with operator op, returning basis Q (n x (m+1)) and the
// (m+1) x m Hessenberg matrix.
template <typename Op>
std::pair<MatC, MatC> arnoldi(const Op &op, const VecC &start, Index m)
{
  const Index n = start.size();
  MatC Q(n, m + 1);
  MatC H = MatC::Zero(m + 1, m);
  Q.col(0) = start / start.norm();
  Index j = 0;
  for (; j < m; ++j)
  {
    VecC w = op(Q.col(j));
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i <= j; ++i)
      {
        const Complex hij = Q.col(i).dot(w);
        H(i, j) += hij;
        w -= Q.col(i) * hij;
      }
    const double nrm = w.norm();
    H(j + 1, j) = nrm;
    if (nrm < 1e-14)
    {
      // Invariant subspace found; shrink.
      return {Q.leftCols(j + 1), H.topLeftCorner(j + 1, j + 1 <= m ? j + 1 : m)};
    }
    Q.col(j + 1) = w / nrm;
  }
  return {Q, H};
}

} // namespace

MatC smallest_eigs(const SpMat &A, const SpMat &E, Index k, std::uint64_t seed)
{
  const Index n = A.rows();
  if (k > n)
    throw DimensionError("smallest_eigs: k exceeds n");
  SolveCounter::Suspend suspend;
  SpMat Ac = A, Ec = E;
  Ac.makeCompressed();
  Ec.makeCompressed();
  const bool is_real =
      Eigen::Map<const VecC>(Ac.valuePtr(), Ac.nonZeros()).imag().cwiseAbs().sum() == 0.0 &&
      Eigen::Map<const VecC>(Ec.valuePtr(), Ec.nonZeros()).imag().cwiseAbs().sum() == 0.0;
  ShiftedFactorization fac(A, E, Complex(0.0, 0.0));
  auto op = [&](const VecC &x) -> VecC { return fac.solve(E * x); };

  NormalStream rng(seed ^ 0x9e3779b97f4a7c15ULL);
  VecC start(n);
  for (Index i = 0; i < n; ++i)
    start[i] = Complex(rng.next(), 0.0);

  const Index m = std::min(n, std::max<Index>(3 * k + 20, 40));
  MatC ritz_basis;
  double resid = 1.0;
  for (int restart = 0; restart < 60; ++restart)
  {
    auto [Q, H] = arnoldi(op, start, m);
    const Index mm = H.cols();
    if (Q.cols() == mm)
    {
      // Exact invariant subspace of dimension mm; diagonalize the square H.
      Eigen::ComplexEigenSolver<MatC> es(H.topLeftCorner(mm, mm));
      std::vector<Index> idx(static_cast<size_t>(mm));
      std::iota(idx.begin(), idx.end(), Index(0));
      std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
        return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
      });
      MatC sel(mm, std::min(k, mm));
      for (Index i = 0; i < sel.cols(); ++i)
        sel.col(i) = es.eigenvectors().col(idx[static_cast<size_t>(i)]);
      ritz_basis = Q.leftCols(mm) * sel;
      resid = 0.0;
      break;
    }
    MatC Hm = H.topRows(mm);
    Eigen::ComplexEigenSolver<MatC> es(Hm);
    std::vector<Index> idx(static_cast<size_t>(mm));
    std::iota(idx.begin(), idx.end(), Index(0));
    // Largest |theta| of the shift-inverted operator = smallest |lambda|.
    std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
      return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
    });
    const double hlast = std::abs(H(mm, mm - 1));
    resid = 0.0;
    MatC sel(mm, k);
    for (Index i = 0; i < k; ++i)
    {
      const auto u = es.eigenvectors().col(idx[static_cast<size_t>(i)]);
      sel.col(i) = u;
      const double r = hlast * std::abs(u[mm - 1]) /
                       std::max(std::abs(es.eigenvalues()[idx[static_cast<size_t>(i)]]), 1e-300);
      resid = std::max(resid, r);
    }
    ritz_basis = Q.leftCols(mm) * sel;
    if (resid < 1e-8)
      break;
    start = ritz_basis.rowwise().sum();
    if (start.norm() < 1e-300)
      break;
  }
  if (resid > 1e-2)
    throw Error("smallest_eigs: Arnoldi iteration did not converge; "
                "consider a random-basis initialization (Option 3)");

  // Realify when the pencil data are real: Ritz vectors of a conjugate pair
  // share the span of their real and imaginary parts, so interleaving
  // [Re v, Im v] per vector (duplicates deflated by orth) yields a real
  // basis ordered by eigenvalue magnitude.
  MatC cand;
  if (is_real)
  {
    MatC both(n, 2 * ritz_basis.cols());
    for (Index i = 0; i < ritz_basis.cols(); ++i)
    {
      both.col(2 * i) = ritz_basis.col(i).real().cast<Complex>();
      both.col(2 * i + 1) = ritz_basis.col(i).imag().cast<Complex>();
    }
    cand = both;
  }
  else
  {
    cand = ritz_basis;
  }
  OrthResult o = orth(cand, 1e-8);
  if (o.Q.cols() == 0)
    throw Error("smallest_eigs: degenerate eigenbasis");
  return o.Q.leftCols(std::min<Index>(k, o.Q.cols()));
}

} // namespace mor
