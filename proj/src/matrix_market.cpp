// SPDX-License-Identifier: Apache-2.0

#include "mor/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mor
{

namespace
{

struct Header
{
  bool coordinate = true;
  bool complex_field = false;
  bool pattern = false;
  enum Sym
  {
    General,
    Symmetric,
    Hermitian,
    SkewSymmetric
  } sym = General;
};

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

Header parse_header(std::istream &in, const std::string &path)
{
  std::string line;
  if (!std::getline(in, line))
    throw Error("matrix market: empty file " + path);
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
    throw Error("matrix market: malformed header in " + path);
  Header h;
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format == "coordinate")
    h.coordinate = true;
  else if (format == "array")
    h.coordinate = false;
  else
    throw Error("matrix market: unsupported format '" + format + "' in " + path);
  if (field == "real" || field == "integer")
    h.complex_field = false;
  else if (field == "complex")
    h.complex_field = true;
  else if (field == "pattern")
    h.pattern = true;
  else
    throw Error("matrix market: unsupported field '" + field + "' in " + path);
  if (symmetry == "general")
    h.sym = Header::General;
  else if (symmetry == "symmetric")
    h.sym = Header::Symmetric;
  else if (symmetry == "hermitian")
    h.sym = Header::Hermitian;
  else if (symmetry == "skew-symmetric")
    h.sym = Header::SkewSymmetric;
  else
    throw Error("matrix market: unsupported symmetry '" + symmetry + "' in " +
                path);
  return h;
}

std::string next_data_line(std::istream &in)
{
  std::string line;
  while (std::getline(in, line))
  {
    const auto pos = line.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos || line[pos] == '%')
      continue;
    return line;
  }
  throw Error("matrix market: unexpected end of file");
}

} // namespace

SpMat load_market_sparse(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("matrix market: cannot open " + path);
  Header h = parse_header(in, path);

  std::istringstream sz(next_data_line(in));
  Index rows = 0, cols = 0;
  long nnz = 0;
  if (h.coordinate)
  {
    if (!(sz >> rows >> cols >> nnz))
      throw Error("matrix market: bad size line in " + path);
  }
  else
  {
    if (!(sz >> rows >> cols))
      throw Error("matrix market: bad size line in " + path);
  }

  std::vector<Eigen::Triplet<Complex>> trips;
  if (h.coordinate)
  {
    trips.reserve(static_cast<size_t>(nnz) * (h.sym == Header::General ? 1 : 2));
    for (long e = 0; e < nnz; ++e)
    {
      std::istringstream ls(next_data_line(in));
      Index i, j;
      double re = 1.0, im = 0.0;
      if (!(ls >> i >> j))
        throw Error("matrix market: bad entry in " + path);
      if (!h.pattern)
      {
        if (!(ls >> re))
          throw Error("matrix market: bad entry in " + path);
        if (h.complex_field && !(ls >> im))
          throw Error("matrix market: bad entry in " + path);
      }
      --i;
      --j;
      const Complex v(re, im);
      trips.emplace_back(i, j, v);
      if (i != j)
      {
        switch (h.sym)
        {
        case Header::Symmetric:
          trips.emplace_back(j, i, v);
          break;
        case Header::Hermitian:
          trips.emplace_back(j, i, std::conj(v));
          break;
        case Header::SkewSymmetric:
          trips.emplace_back(j, i, -v);
          break;
        case Header::General:
          break;
        }
      }
    }
  }
  else
  {
    // Array layout: column-major dense listing.
    for (Index j = 0; j < cols; ++j)
    {
      const Index i0 = (h.sym == Header::General) ? 0 : j;
      for (Index i = i0; i < rows; ++i)
      {
        std::istringstream ls(next_data_line(in));
        double re, im = 0.0;
        if (!(ls >> re) || (h.complex_field && !(ls >> im)))
          throw Error("matrix market: bad array entry in " + path);
        const Complex v(re, im);
        if (v != Complex(0.0, 0.0))
          trips.emplace_back(i, j, v);
        if (h.sym != Header::General && i != j)
        {
          Complex w = v;
          if (h.sym == Header::Hermitian)
            w = std::conj(v);
          else if (h.sym == Header::SkewSymmetric)
            w = -v;
          if (w != Complex(0.0, 0.0))
            trips.emplace_back(j, i, w);
        }
      }
    }
  }
  SpMat M(rows, cols);
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  return M;
}

MatC load_market_dense(const std::string &path)
{
  return MatC(load_market_sparse(path));
}

namespace
{

void write_value(std::FILE *f, Complex v, bool complex_field)
{
  if (complex_field)
    std::fprintf(f, " %.17g %.17g", v.real(), v.imag());
  else
    std::fprintf(f, " %.17g", v.real());
}

bool is_real(const SpMat &M)
{
  for (Index k = 0; k < M.outerSize(); ++k)
    for (SpMat::InnerIterator it(M, k); it; ++it)
      if (it.value().imag() != 0.0)
        return false;
  return true;
}

} // namespace

void save_market_sparse(const SpMat &M, const std::string &path, bool symmetric)
{
  std::FILE *f = std::fopen(path.c_str(), "w");
  if (!f)
    throw Error("matrix market: cannot write " + path);
  const bool cf = !is_real(M);
  SpMat C = M;
  C.makeCompressed();
  long nnz = 0;
  for (Index k = 0; k < C.outerSize(); ++k)
    for (SpMat::InnerIterator it(C, k); it; ++it)
      if (!symmetric || it.row() >= it.col())
        ++nnz;
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate %s %s\n",
               cf ? "complex" : "real", symmetric ? "symmetric" : "general");
  std::fprintf(f, "%ld %ld %ld\n", static_cast<long>(C.rows()),
               static_cast<long>(C.cols()), nnz);
  for (Index k = 0; k < C.outerSize(); ++k)
    for (SpMat::InnerIterator it(C, k); it; ++it)
    {
      if (symmetric && it.row() < it.col())
        continue;
      std::fprintf(f, "%ld %ld", static_cast<long>(it.row() + 1),
                   static_cast<long>(it.col() + 1));
      write_value(f, it.value(), cf);
      std::fputc('\n', f);
    }
  std::fclose(f);
}

void save_market_dense(const MatC &M, const std::string &path)
{
  std::FILE *f = std::fopen(path.c_str(), "w");
  if (!f)
    throw Error("matrix market: cannot write " + path);
  const bool cf = M.imag().cwiseAbs().sum() != 0.0;
  std::fprintf(f, "%%%%MatrixMarket matrix array %s general\n",
               cf ? "complex" : "real");
  std::fprintf(f, "%ld %ld\n", static_cast<long>(M.rows()),
               static_cast<long>(M.cols()));
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = 0; i < M.rows(); ++i)
    {
      if (cf)
        std::fprintf(f, "%.17g %.17g\n", M(i, j).real(), M(i, j).imag());
      else
        std::fprintf(f, "%.17g\n", M(i, j).real());
    }
  std::fclose(f);
}

} // namespace mor
