#pragma once

#include "bgs/local_qr.hpp"
#include "bgs/matrix.hpp"
#include "bgs/norms.hpp"

#include <string>

namespace bgs {

struct Cgs2StepResult {
  Matrix q_b;       ///< m x 1, unit 2-norm
  double r_b = 0.0; ///< >= 0
  Matrix s_b;       ///< t x 1
  double r1 = 0.0;  ///< norm after the first pass
  double r2 = 0.0;  ///< norm after the reorthogonalization pass
};

struct BlockStepResult {
  Matrix q; ///< m x p
  Matrix r; ///< p x p upper triangular, nonnegative diagonal
  Matrix s; ///< t x p
};

/// Block CGS2 step plus the intermediate factors the stability
/// assumptions are stated in.
struct BlockCgs2StepResult {
  Matrix q;
  Matrix r;
  Matrix s;
  Matrix r1; ///< R from the first projection pass
  Matrix r2; ///< R from the reorthogonalization pass
  double r2_inverse_norm = 0.0;
};

/// ||R^{-1}||_2 of an upper-triangular R; infinite when a diagonal entry is 0.
inline double triangular_inverse_norm(const Matrix& r)
{
  for (std::size_t i = 0; i < r.rows(); ++i)
    if (r(i, i) == 0.0) return std::numeric_limits<double>::infinity();
  return spectral_norm(invert_upper_triangular(r));
}

namespace detail {

inline void require_step_shapes(const Matrix& u, const Matrix& b, const char* fn)
{
  if (u.rows() != b.rows()) {
    throw std::invalid_argument(std::string(fn) + ": U is " + u.shape() + " but B is " + b.shape());
  }
  if (u.cols() + b.cols() > u.rows()) {
    throw std::invalid_argument(std::string(fn) + ": t + p = " + std::to_string(u.cols() + b.cols()) +
                                " exceeds m = " + std::to_string(u.rows()));
  }
}

/// y = b - u s, with u s formed by matmul so both kernels share rounding.
inline Matrix project_out(const Matrix& u, const Matrix& b, const Matrix& s) { return b - matmul(u, s); }

inline Matrix divide(const Matrix& y, double r)
{
  Matrix q = y;
  for (double& v : q.data()) v /= r;
  return q;
}

} // namespace detail

/// One CGS2 step on a single vector: project b against u twice,
/// normalizing after each pass, and return (q_b, r_b, s_b) with
/// b = u s_b + q_b r_b.
inline Cgs2StepResult cgs2_step(const Matrix& u, const Matrix& b)
{
  detail::require_step_shapes(u, b, "cgs2_step");
  if (b.cols() != 1) throw std::invalid_argument("cgs2_step: b must be a single column, got " + b.shape());

  const Matrix s1 = matmul_tn(u, b);
  const Matrix y1 = detail::project_out(u, b, s1);
  const double r1 = norm2(y1.col(0));
  if (!(r1 > 0.0)) throw BreakdownError("cgs2_step: first normalization failed, r1 = " + sci(r1), 0, r1);
  const Matrix q1 = detail::divide(y1, r1);

  const Matrix s2 = matmul_tn(u, q1);
  const Matrix y2 = detail::project_out(u, q1, s2);
  const double r2 = norm2(y2.col(0));
  if (!(r2 > 0.0)) throw BreakdownError("cgs2_step: second normalization failed, r2 = " + sci(r2), 0, r2);

  Matrix s_b = s1;
  for (std::size_t i = 0; i < s_b.rows(); ++i) s_b(i, 0) += s2(i, 0) * r1;
  return {detail::divide(y2, r2), r2 * r1, std::move(s_b), r1, r2};
}

namespace detail {

/// S = u^T b, Y = b - u S, (Q, R) = local_qr(Y), with no check on how much
/// of b survived the projection.
inline BlockStepResult block_cgs_pass(const Matrix& u, const Matrix& b)
{
  Matrix s = matmul_tn(u, b);
  auto [q, r] = local_qr(project_out(u, b, s));
  return {std::move(q), std::move(r), std::move(s)};
}

} // namespace detail

/// One pass of block classical Gram-Schmidt: S = u^T b, Y = b - u S,
/// (Q, R) = local_qr(Y). Throws BreakdownError when some R(j, j) <=
/// m * eps * ||b||_2, i.e. b lies in span(u) to working precision and Q
/// would be rounding noise.
inline BlockStepResult block_cgs_step(const Matrix& u, const Matrix& b)
{
  detail::require_step_shapes(u, b, "block_cgs_step");
  auto st = detail::block_cgs_pass(u, b);
  const double threshold = static_cast<double>(u.rows()) * kUnitRoundoff * spectral_norm(b);
  for (std::size_t j = 0; j < st.r.rows(); ++j) {
    if (!(st.r(j, j) > threshold)) {
      throw BreakdownError("block_cgs_step: projected block is rank deficient: R(" + std::to_string(j) + "," +
                               std::to_string(j) + ") = " + sci(st.r(j, j)) + " <= m*eps*||B|| = " + sci(threshold),
                           j, st.r(j, j));
    }
  }
  return st;
}

/// Block CGS with reorthogonalization: two chained passes against the
/// full u, then S_B = S_1 + S_2 R_1 and R_B = R_2 R_1. A first pass that
/// leaves only rounding noise is not an error here; the second pass and
/// the recorded R_2 show whether it was recovered.
inline BlockCgs2StepResult block_cgs2_step(const Matrix& u, const Matrix& b)
{
  detail::require_step_shapes(u, b, "block_cgs2_step");
  auto first = detail::block_cgs_pass(u, b);
  auto second = detail::block_cgs_pass(u, first.q);

  Matrix s = first.s + matmul(second.s, first.r);
  Matrix r = matmul(second.r, first.r);
  // Product of upper triangulars; the zeros below the diagonal are exact.
  const double r2_inv = triangular_inverse_norm(second.r);
  return {std::move(second.q), std::move(r), std::move(s), std::move(first.r), std::move(second.r), r2_inv};
}

} // namespace bgs
