#pragma once

#include "bgs/local_qr.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

/// Rounding-error growth functions for block CGS2 and the constants of the
/// orthogonality induction. Arguments are m (rows), t (columns already
/// orthogonalized), p (block width), and k (block count). All results are
/// multiples of the unit roundoff: a bound reads eps * f(...).
namespace bgs::bounds {

/// (m, p, eps, d1). p is the largest block width in use.
class BoundContext {
public:
  BoundContext(std::size_t m, std::size_t p, double eps = kUnitRoundoff, double d1 = 1.0);

  std::size_t m() const noexcept { return m_; }
  std::size_t p() const noexcept { return p_; }
  double eps() const noexcept { return eps_; }
  double d1() const noexcept { return d1_; }

  /// Throws unless eps * f1(m, t, p) < 1, the regime where the bounds say
  /// anything at all.
  void require_meaningful(std::size_t t) const;

private:
  std::size_t m_;
  std::size_t p_;
  double eps_;
  double d1_;
};

namespace detail {
inline double d(std::size_t v) noexcept { return static_cast<double>(v); }
} // namespace detail

/// Panel QR constant, d1 m p^{3/2}. Single columns are normalized rather than
/// factored, with constant m + 4 independent of d1.
inline double l1(std::size_t m, std::size_t p, const BoundContext& ctx)
{
  if (p == 1) return detail::d(m) + 4.0;
  return ctx.d1() * detail::d(m) * std::pow(detail::d(p), 1.5);
}

/// Error in S = U^T B: m t^{1/2} p^{1/2}.
inline double l2(std::size_t m, std::size_t t, std::size_t p)
{
  return detail::d(m) * std::sqrt(detail::d(t)) * std::sqrt(detail::d(p));
}

/// Error in Y = B - U S: p^{1/2} (1 + t^{3/2}).
inline double l3(std::size_t t, std::size_t p)
{
  return std::sqrt(detail::d(p)) * (1.0 + std::pow(detail::d(t), 1.5));
}

/// Error in S_B = S_1 + S_2 R_1: p^{1/2} (1 + p^{3/2}).
inline double l4(std::size_t p) { return std::sqrt(detail::d(p)) * (1.0 + std::pow(detail::d(p), 1.5)); }

/// Error in R_B = R_2 R_1: p^2.
inline double l5(std::size_t p) { return detail::d(p) * detail::d(p); }

/// Backward error of one block CGS step: L1 + L2 + L3.
inline double lf(std::size_t m, std::size_t t, std::size_t p, const BoundContext& ctx)
{
  return l1(m, p, ctx) + l2(m, t, p) + l3(t, p);
}

/// sqrt(7 + 4 sqrt 2), approximately 3.5637.
inline double alpha() { return std::sqrt(7.0 + 4.0 * std::sqrt(2.0)); }

/// gamma_k = 1 / sqrt(alpha^2 (k - 1) + 1), k >= 1.
inline double gamma_k(std::size_t k)
{
  if (k == 0) throw std::invalid_argument("gamma_k: k must be >= 1");
  const double a = alpha();
  return 1.0 / std::sqrt(a * a * detail::d(k - 1) + 1.0);
}

namespace detail {
inline std::size_t block_count(std::size_t t, std::size_t p, const char* fn)
{
  if (p == 0 || t % p != 0) {
    throw std::invalid_argument(std::string(fn) + ": t = " + std::to_string(t) + " is not a multiple of p = " +
                                std::to_string(p));
  }
  return t / p;
}
} // namespace detail

/// Orthogonality growth after k = t / p blocks: sqrt(alpha^2 k + 1) L_F(m, t, p).
/// This is the closed form satisfying gamma_{k+1} f1(m, t_k, p) = L_F(m, t_k, p).
inline double f1(std::size_t m, std::size_t t, std::size_t p, const BoundContext& ctx)
{
  const std::size_t k = detail::block_count(t, p, "f1");
  const double a = alpha();
  return std::sqrt(a * a * detail::d(k) + 1.0) * lf(m, t, p, ctx);
}

/// L_F / f1 at (m, t, p); equals gamma_{t/p + 1}.
inline double gamma(std::size_t m, std::size_t t, std::size_t p, const BoundContext& ctx)
{
  return lf(m, t, p, ctx) / f1(m, t, p, ctx);
}

/// f1 + L_F + gamma L5: scales the singularity assumption on a block.
inline double f_sing(std::size_t m, std::size_t t, std::size_t p, const BoundContext& ctx)
{
  return f1(m, t, p, ctx) + lf(m, t, p, ctx) + gamma(m, t, p, ctx) * l5(p);
}

/// Residual growth of one block CGS2 step: 2 L1 + 2 L3 + L4 + L5.
inline double f_resid(std::size_t m, std::size_t t, std::size_t p, const BoundContext& ctx)
{
  return 2.0 * l1(m, p, ctx) + 2.0 * l3(t, p) + l4(p) + l5(p);
}

/// Residual growth after k blocks: k^{1/2} f_resid(m, t, p).
inline double f2(std::size_t m, std::size_t t, std::size_t p, std::size_t k, const BoundContext& ctx)
{
  return std::sqrt(detail::d(k)) * f_resid(m, t, p, ctx);
}

/// Frobenius-norm constant bounding the defect of [Q_hat_k, Q_{k+1}] in the
/// orthogonality induction, for t = t_k = k p with k >= 1:
///   sqrt(f1(m, t_{k-1}, p)^2 + 2 (1 + sqrt 2)^2 L_F(m, t_k, p)^2 + L1(m, p)^2).
inline double c_orth(std::size_t m, std::size_t t, std::size_t p, const BoundContext& ctx)
{
  const std::size_t k = detail::block_count(t, p, "c_orth");
  if (k == 0) throw std::invalid_argument("c_orth: needs at least one completed block (t >= p)");
  const double prev = f1(m, t - p, p, ctx);
  const double cross = (1.0 + std::sqrt(2.0)) * lf(m, t, p, ctx);
  const double diag = l1(m, p, ctx);
  return std::sqrt(prev * prev + 2.0 * cross * cross + diag * diag);
}

inline BoundContext::BoundContext(std::size_t m, std::size_t p, double eps, double d1)
    : m_(m), p_(p), eps_(eps), d1_(d1)
{
  if (m == 0 || p == 0 || p > m) {
    throw std::invalid_argument("BoundContext: need m >= p >= 1, got m = " + std::to_string(m) +
                                ", p = " + std::to_string(p));
  }
  if (!(eps > 0.0) || !(d1 > 0.0)) throw std::invalid_argument("BoundContext: eps and d1 must be positive");
  if (eps * l1(m, p, *this) >= 1.0) {
    throw std::invalid_argument("BoundContext: eps * L1(m, p) = " + sci(eps * l1(m, p, *this)) + " is not < 1");
  }
}

inline void BoundContext::require_meaningful(std::size_t t) const
{
  const double v = eps_ * f1(m_, t, p_, *this);
  if (v >= 1.0) {
    throw std::invalid_argument("BoundContext: eps * f1(m, " + std::to_string(t) + ", p) = " + sci(v) +
                                " is not < 1");
  }
}

/// Closed forms written out for unit block width, indexed by column count k.
/// These are the single-vector expressions as usually quoted; they are kept
/// separate from the general functions above because two of them do not
/// coincide with the p = 1 evaluation of the general formulas (see tests).
namespace unit_width {

/// m + k^{1/2} (m + k) + 4. The general lf(m, k, 1) is exactly one larger.
inline double lf(std::size_t m, std::size_t k)
{
  return detail::d(m) + std::sqrt(detail::d(k)) * (detail::d(m) + detail::d(k)) + 4.0;
}

/// 2m + 2k^{3/2} + 13; identical to f_resid(m, k, 1).
inline double f_resid(std::size_t m, std::size_t k)
{
  return 2.0 * detail::d(m) + 2.0 * std::pow(detail::d(k), 1.5) + 13.0;
}

/// [sqrt(alpha^2 (k - 1) + 1) + 1] (m + k^{1/2} (m + k) + 4) + 2, k >= 1.
inline double f_sing(std::size_t m, std::size_t k)
{
  if (k == 0) throw std::invalid_argument("unit_width::f_sing: k must be >= 1");
  const double a = alpha();
  return (std::sqrt(a * a * detail::d(k - 1) + 1.0) + 1.0) * lf(m, k) + 2.0;
}

/// CGS2 full-matrix residual constant n^{1/2} f_resid(m, n, 1)
/// = 2 m n^{1/2} + 2 n^2 + 13 n^{1/2}.
inline double cgs2_residual(std::size_t m, std::size_t n)
{
  const double rn = std::sqrt(detail::d(n));
  return 2.0 * detail::d(m) * rn + 2.0 * detail::d(n) * detail::d(n) + 13.0 * rn;
}

} // namespace unit_width

} // namespace bgs::bounds
