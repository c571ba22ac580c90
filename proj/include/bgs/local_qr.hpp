#pragma once

#include "bgs/matrix.hpp"
#include "bgs/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bgs {

inline constexpr double kUnitRoundoff = 0x1.0p-53;

/// Hard numerical breakdown: a panel that is rank deficient to working
/// precision. `index` is the offending column (0-based) within the panel.
class BreakdownError : public std::runtime_error {
public:
  BreakdownError(const std::string& what, std::size_t index, double magnitude)
      : std::runtime_error(what), index_(index), magnitude_(magnitude)
  {
  }
  std::size_t index() const noexcept { return index_; }
  double magnitude() const noexcept { return magnitude_; }

private:
  std::size_t index_;
  double magnitude_;
};

struct LocalQrResult {
  Matrix q; ///< m x p
  Matrix r; ///< p x p, upper triangular, nonnegative diagonal
};

/// Single column: r = ||b||_2, q = b / r.
inline LocalQrResult normalize_column(const Matrix& b)
{
  const double r = norm2(b.col(0));
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw BreakdownError("local_qr: column 0 has norm " + sci(r) + "; cannot normalize", 0, r);
  }
  Matrix q(b.rows(), 1);
  const auto bc = b.col(0);
  auto qc = q.col(0);
  for (std::size_t i = 0; i < b.rows(); ++i) qc[i] = bc[i] / r;
  Matrix rr(1, 1);
  rr(0, 0) = r;
  return {std::move(q), std::move(rr)};
}

namespace detail {

/// Unblocked Householder QR in the style of LAPACK's geqr2: on return the
/// upper triangle of `a` holds R and the strict lower part the reflector
/// tails (implicit leading 1); tau holds the scalar factors.
inline void householder_factor(Matrix& a, std::vector<double>& tau)
{
  const std::size_t m = a.rows();
  const std::size_t p = a.cols();
  tau.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    auto aj = a.col(j);
    const double alpha = aj[j];
    double tail = 0.0;
    for (std::size_t i = j + 1; i < m; ++i) tail += aj[i] * aj[i];
    tail = std::sqrt(tail);
    if (tail == 0.0) continue; // H_j = I

    const double beta = -std::copysign(std::hypot(alpha, tail), alpha);
    tau[j] = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    for (std::size_t i = j + 1; i < m; ++i) aj[i] *= scale;
    aj[j] = beta;

    // Apply H_j = I - tau v v^T to the trailing columns.
    for (std::size_t k = j + 1; k < p; ++k) {
      auto ak = a.col(k);
      double w = ak[j];
      for (std::size_t i = j + 1; i < m; ++i) w += aj[i] * ak[i];
      w *= tau[j];
      ak[j] -= w;
      for (std::size_t i = j + 1; i < m; ++i) ak[i] -= w * aj[i];
    }
  }
}

/// Explicit thin Q = H_1 ... H_p I(:, 1:p), accumulated backwards.
inline Matrix householder_form_q(const Matrix& factored, const std::vector<double>& tau)
{
  const std::size_t m = factored.rows();
  const std::size_t p = factored.cols();
  Matrix q = Matrix::identity(m, p);
  for (std::size_t jj = p; jj-- > 0;) {
    if (tau[jj] == 0.0) continue;
    const auto v = factored.col(jj);
    for (std::size_t k = jj; k < p; ++k) {
      auto qk = q.col(k);
      double w = qk[jj];
      for (std::size_t i = jj + 1; i < m; ++i) w += v[i] * qk[i];
      w *= tau[jj];
      qk[jj] -= w;
      for (std::size_t i = jj + 1; i < m; ++i) qk[i] -= w * v[i];
    }
  }
  return q;
}

} // namespace detail

/// Thin QR of a tall panel b (m x p, m >= p).
///
/// p = 1 bypasses Householder and normalizes the column directly, so a
/// block method with unit widths reproduces its single-vector counterpart
/// exactly. For p > 1 the panel is factored with Householder reflectors,
/// Q is formed explicitly, and signs are flipped so diag(R) >= 0.
///
/// Throws BreakdownError when some |R(j, j)| <= m * eps * ||b||_2, i.e. the
/// panel is rank deficient to working precision.
inline LocalQrResult local_qr(const Matrix& b)
{
  const std::size_t m = b.rows();
  const std::size_t p = b.cols();
  if (m < p) throw std::invalid_argument("local_qr: panel must be tall, got " + b.shape());
  const double mp = static_cast<double>(m) * std::pow(static_cast<double>(p), 1.5);
  if (p > 1 && kUnitRoundoff * mp >= 1.0) {
    throw std::invalid_argument("local_qr: eps * m * p^{3/2} >= 1 for a " + b.shape() + " panel");
  }
  if (p == 1) return normalize_column(b);

  Matrix work = b;
  std::vector<double> tau;
  detail::householder_factor(work, tau);
  Matrix q = detail::householder_form_q(work, tau);

  Matrix r(p, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i <= j; ++i) r(i, j) = work(i, j);

  for (std::size_t j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) {
      for (std::size_t k = j; k < p; ++k) r(j, k) = -r(j, k);
      for (double& v : q.col(j)) v = -v;
    }
  }

  const double threshold = static_cast<double>(m) * kUnitRoundoff * spectral_norm(b);
  for (std::size_t j = 0; j < p; ++j) {
    if (!(r(j, j) > threshold)) {
      throw BreakdownError("local_qr: panel " + b.shape() + " is rank deficient: |R(" + std::to_string(j) + "," +
                               std::to_string(j) + ")| = " + sci(r(j, j)) + " <= m*eps*||B|| = " +
                               sci(threshold),
                           j, r(j, j));
    }
  }
  return {std::move(q), std::move(r)};
}

} // namespace bgs
