// SPDX-License-Identifier: Apache-2.0

#ifndef MOR_TYPES_HPP
#define MOR_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <atomic>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mor
{

using Complex = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Complex>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for all library errors.
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Thrown when a shifted matrix A - sE (or sE - A) is numerically singular.
class SingularShiftError : public Error
{
public:
  SingularShiftError(const std::string &msg, Complex s) : Error(msg), shift(s) {}
  Complex shift;
};

class DimensionError : public Error
{
public:
  using Error::Error;
};

// Global tally of shifted linear-system solves (one per right-hand-side
// column). Diagnostic evaluations and inner (projected) iterations run with
// counting suspended so the tally matches the outer-solve bookkeeping.
class SolveCounter
{
public:
  static long value() { return tally().load(std::memory_order_relaxed); }
  static void reset() { tally().store(0, std::memory_order_relaxed); }
  static void add(long k)
  {
    if (!suspended())
      tally().fetch_add(k, std::memory_order_relaxed);
  }

  // RAII guard: solves performed while alive are not counted.
  class Suspend
  {
  public:
    Suspend() : prev_(suspended()) { suspended() = true; }
    ~Suspend() { suspended() = prev_; }
    Suspend(const Suspend &) = delete;
    Suspend &operator=(const Suspend &) = delete;

  private:
    bool prev_;
  };

private:
  static std::atomic<long> &tally()
  {
    static std::atomic<long> t{0};
    return t;
  }
  static bool &suspended()
  {
    static thread_local bool s = false;
    return s;
  }
};

} // namespace mor

#endif // MOR_TYPES_HPP
