#pragma once

#include "bgs/bounds.hpp"
#include "bgs/drivers.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace bgs::bounds {

struct CheckMargin {
  double lhs = 0.0;
  double rhs = 0.0;
  bool passed = false;
};

/// Per-block stability assumptions for k >= 2. Either one suffices for the
/// orthogonality bound on Q_hat_k.
struct AssumptionVerdict {
  std::size_t block_index = 0; ///< 1-based k
  /// eps f_sing(m, t_{k-1}, p) ||A_k|| ||R_kk^{-1}|| <= gamma_k
  CheckMargin check_a;
  /// ||(R_2^{(k)})^{-1}|| <= sqrt(1 + gamma_k^2)
  CheckMargin check_b;
  bool either_passed = false;
};

/// Evaluates both assumptions for every block after the first. Bounds are
/// taken at t_{k-1} = (k - 1) p with p = ctx.p() (the largest width), which
/// dominates the actual column offset for unequal partitions. A block with
/// no recorded reorthogonalization factor fails check B; a singular R_kk
/// fails check A with an infinite left-hand side.
inline std::vector<AssumptionVerdict> check_assumptions(const FactorizationTrace& trace, const BoundContext& ctx)
{
  const std::size_t m = trace.factorization.q().rows();
  if (ctx.m() != m) {
    throw std::invalid_argument("check_assumptions: context has m = " + std::to_string(ctx.m()) +
                                " but the factorization has " + std::to_string(m) + " rows");
  }
  if (ctx.p() < trace.partition.max_width()) {
    throw std::invalid_argument("check_assumptions: context p = " + std::to_string(ctx.p()) +
                                " is smaller than the widest block " + std::to_string(trace.partition.max_width()));
  }
  const std::size_t p = ctx.p();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<AssumptionVerdict> out;
  for (const auto& rec : trace.per_block) {
    if (rec.k < 2) continue;
    const double gk = gamma_k(rec.k);
    AssumptionVerdict v;
    v.block_index = rec.k;

    const double scale = ctx.eps() * f_sing(m, (rec.k - 1) * p, p, ctx) * rec.a_block_norm;
    v.check_a.lhs = std::isfinite(rec.rkk_inverse_norm) ? scale * rec.rkk_inverse_norm : inf;
    v.check_a.rhs = gk;
    v.check_a.passed = v.check_a.lhs > 0.0 && v.check_a.lhs <= v.check_a.rhs;

    v.check_b.lhs = rec.r2_inverse_norm.value_or(inf);
    v.check_b.rhs = std::sqrt(1.0 + gk * gk);
    v.check_b.passed = v.check_b.lhs <= v.check_b.rhs;

    v.either_passed = v.check_a.passed || v.check_b.passed;
    out.push_back(v);
  }
  return out;
}

inline bool all_passed(const std::vector<AssumptionVerdict>& verdicts)
{
  for (const auto& v : verdicts)
    if (!v.either_passed) return false;
  return true;
}

} // namespace bgs::bounds
