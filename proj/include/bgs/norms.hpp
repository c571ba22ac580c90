#pragma once

#include "bgs/matrix.hpp"

#include <Eigen/SVD>

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace bgs {

/// Matrices whose smaller dimension exceeds this use power iteration
/// instead of a full SVD.
inline constexpr std::size_t kSvdSizeLimit = 512;

namespace detail {

inline Eigen::Map<const Eigen::MatrixXd> as_eigen(const Matrix& a)
{
  return {a.data().data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols())};
}

struct PowerIterationResult {
  double sigma = 0.0;
  bool converged = false;
};

/// Largest singular value from power iteration on a^T a. The start vector
/// is drawn from a fixed seed so results are reproducible.
inline PowerIterationResult power_iteration(const Matrix& a, double rel_tol = 1e-10, int max_iter = 10000)
{
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::mt19937_64 gen(0x5eed5eedULL);
  std::vector<double> x(n), y(m), z(n);
  for (double& v : x) v = static_cast<double>(gen() >> 11) * 0x1.0p-53 + 0.5;

  auto normalize = [](std::vector<double>& v) {
    const double s = norm2(v);
    if (s > 0.0)
      for (double& e : v) e /= s;
    return s;
  };
  normalize(x);

  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    // y = a x
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const auto ak = a.col(k);
      for (std::size_t i = 0; i < m; ++i) y[i] += ak[i] * x[k];
    }
    const double next = norm2(y);
    if (next == 0.0) return {0.0, true};
    // z = a^T y
    for (std::size_t k = 0; k < n; ++k) z[k] = dot(a.col(k), y);
    normalize(z);
    x.swap(z);
    if (it > 0 && std::abs(next - sigma) <= rel_tol * next) return {next, true};
    sigma = next;
  }
  return {sigma, false};
}

} // namespace detail

/// Largest singular value of a. Full SVD when min(m, n) <= kSvdSizeLimit,
/// power iteration on a^T a otherwise (or when the SVD fails to converge).
inline double spectral_norm(const Matrix& a)
{
  if (a.empty()) throw std::invalid_argument("spectral_norm: empty matrix");
  if (std::min(a.rows(), a.cols()) <= kSvdSizeLimit) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(detail::as_eigen(a));
    if (svd.info() == Eigen::Success) return svd.singularValues()(0);
  }
  const auto pi = detail::power_iteration(a);
  if (!pi.converged) {
    throw std::runtime_error("spectral_norm: SVD did not converge on " + a.shape() +
                             " and the power-iteration fallback did not reach tolerance either");
  }
  return pi.sigma;
}

/// All singular values, descending. Desk-scale only.
inline std::vector<double> singular_values(const Matrix& a)
{
  Eigen::BDCSVD<Eigen::MatrixXd> svd(detail::as_eigen(a));
  if (svd.info() != Eigen::Success) throw std::runtime_error("singular_values: SVD did not converge on " + a.shape());
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

/// sigma_max / sigma_min; infinite for a numerically singular matrix.
inline double condition_number(const Matrix& a)
{
  const auto s = singular_values(a);
  const double smin = s.back();
  return smin == 0.0 ? std::numeric_limits<double>::infinity() : s.front() / smin;
}

/// || I - q^T q ||_2.
inline double orthogonality_defect(const Matrix& q)
{
  if (q.rows() < q.cols()) {
    throw std::invalid_argument("orthogonality_defect: expected rows >= cols, got " + q.shape());
  }
  Matrix g = matmul_tn(q, q);
  for (double& v : g.data()) v = -v;
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) += 1.0;
  return spectral_norm(g);
}

struct RelativeResidual {
  double value = 0.0;
  /// Set when a == 0, in which case value is 0 by convention.
  bool zero_input = false;
};

/// || a - q r ||_2 / || a ||_2.
inline RelativeResidual relative_residual(const Matrix& a, const QRFactorization& f)
{
  if (a.rows() != f.q().rows() || a.cols() != f.r().cols()) {
    throw std::invalid_argument("relative_residual: A is " + a.shape() + " but Q is " + f.q().shape() + " and R is " +
                                f.r().shape());
  }
  const double anorm = spectral_norm(a);
  if (anorm == 0.0) return {0.0, true};
  return {spectral_norm(a - matmul(f.q(), f.r())) / anorm, false};
}

} // namespace bgs
