#pragma once

#include "bgs/gs_kernels.hpp"
#include "bgs/local_qr.hpp"
#include "bgs/matrix.hpp"
#include "bgs/norms.hpp"

#include <Eigen/Eigenvalues>

#include <optional>
#include <string>
#include <vector>

namespace bgs {

/// Audit quantities for block k of a factorization.
struct BlockRecord {
  std::size_t k = 0;      ///< 1-based block index
  std::size_t t_prev = 0; ///< columns before this block
  std::size_t width = 0;
  double a_block_norm = 0.0;                   ///< ||A_k||_2
  double rkk_inverse_norm = 0.0;               ///< ||R_kk^{-1}||_2
  std::optional<double> r2_inverse_norm;       ///< ||(R_2^{(k)})^{-1}||_2, reorthogonalized methods, k >= 2
  std::optional<double> running_defect;        ///< ||I - Q_hat_k^T Q_hat_k||_2 when tracked
};

struct FactorizationTrace {
  QRFactorization factorization;
  BlockPartition partition;
  std::vector<BlockRecord> per_block;
};

struct DriverOptions {
  /// Track ||I - Q_hat_k^T Q_hat_k||_2 after every block. Costs a t_k x t_k
  /// symmetric eigenvalue problem per block.
  bool track_running_defect = true;
};

/// ||S||_2 for symmetric S, from its eigenvalues.
inline double symmetric_spectral_norm(const Matrix& s)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::as_eigen(s), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return spectral_norm(s);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

namespace detail {

/// Assembles Q and R block by block and records the audit trail. The Gram
/// matrix Q^T Q is grown incrementally so the running defect costs no extra
/// products.
class TraceBuilder {
public:
  TraceBuilder(const Matrix& a, BlockPartition partition, DriverOptions options)
      : a_(a), partition_(std::move(partition)), options_(options), q_(a.rows(), a.cols()), r_(a.cols(), a.cols())
  {
    if (a.rows() < a.cols()) throw std::invalid_argument("factorization: expected m >= n, got " + a.shape());
    partition_.require_sums_to(a.cols());
    if (options_.track_running_defect) gram_ = Matrix(a.cols(), a.cols());
  }

  const BlockPartition& partition() const noexcept { return partition_; }
  std::size_t blocks() const noexcept { return partition_.blocks(); }
  std::size_t offset(std::size_t k) const { return partition_.offset(k); }

  Matrix block_of_a(std::size_t k) const { return a_.cols_range(offset(k), partition_.width(k)); }

  /// Q_hat over the first t columns.
  Matrix basis(std::size_t t) const { return q_.cols_range(0, t); }

  /// Appends block k (0-based) given its Q panel, diagonal R block, and the
  /// coupling S with the previous columns (absent for k = 0).
  void append(std::size_t k, const Matrix& q, const Matrix& r_diag, const Matrix* s, std::optional<double> r2_inv)
  {
    const std::size_t t = offset(k);
    const std::size_t p = partition_.width(k);
    q_.assign_block(0, t, q);
    if (s != nullptr) r_.assign_block(0, t, *s);
    r_.assign_block(t, t, r_diag);

    BlockRecord rec;
    rec.k = k + 1;
    rec.t_prev = t;
    rec.width = p;
    rec.a_block_norm = spectral_norm(block_of_a(k));
    rec.rkk_inverse_norm = triangular_inverse_norm(r_diag);
    rec.r2_inverse_norm = r2_inv;
    if (options_.track_running_defect) rec.running_defect = grow_gram(t, q);
    records_.push_back(rec);
  }

  FactorizationTrace finish() &&
  {
    return {QRFactorization(std::move(q_), std::move(r_)), std::move(partition_), std::move(records_)};
  }

private:
  double grow_gram(std::size_t t, const Matrix& q)
  {
    const std::size_t p = q.cols();
    if (t > 0) {
      const Matrix cross = matmul_tn(basis(t), q);
      gram_.assign_block(0, t, cross);
      gram_.assign_block(t, 0, transpose(cross));
    }
    gram_.assign_block(t, t, matmul_tn(q, q));
    Matrix defect = gram_.leading(t + p, t + p);
    for (double& v : defect.data()) v = -v;
    for (std::size_t i = 0; i < t + p; ++i) defect(i, i) += 1.0;
    return symmetric_spectral_norm(defect);
  }

  const Matrix& a_;
  BlockPartition partition_;
  DriverOptions options_;
  Matrix q_;
  Matrix r_;
  Matrix gram_;
  std::vector<BlockRecord> records_;
};

[[noreturn]] inline void rethrow_at(const BreakdownError& e, const char* method, std::size_t k, std::size_t column)
{
  throw BreakdownError(std::string(method) + ": breakdown at block " + std::to_string(k + 1) + " (column " +
                           std::to_string(column + 1) + "): " + e.what(),
                       column, e.magnitude());
}

template <class Step>
FactorizationTrace run_blocked(const Matrix& a, BlockPartition blocks, DriverOptions options, const char* method,
                               Step&& step)
{
  TraceBuilder tb(a, std::move(blocks), options);
  try {
    auto [q, r] = local_qr(tb.block_of_a(0));
    tb.append(0, q, r, nullptr, std::nullopt);
  }
  catch (const BreakdownError& e) {
    rethrow_at(e, method, 0, e.index());
  }
  for (std::size_t k = 1; k < tb.blocks(); ++k) {
    const std::size_t t = tb.offset(k);
    try {
      step(tb, k, tb.basis(t), tb.block_of_a(k));
    }
    catch (const BreakdownError& e) {
      rethrow_at(e, method, k, t + e.index());
    }
  }
  return std::move(tb).finish();
}

inline BlockPartition unit_partition(std::size_t n) { return BlockPartition(std::vector<std::size_t>(n, 1)); }

} // namespace detail

/// Block classical Gram-Schmidt with reorthogonalization (BCGS2).
/// The first block is factored by local_qr; every later block goes through
/// block_cgs2_step against all previous columns and R grows by the bordered
/// update [[R, S_B], [0, R_B]].
inline FactorizationTrace bcgs2(const Matrix& a, const BlockPartition& blocks, DriverOptions options = {})
{
  return detail::run_blocked(a, blocks, options, "bcgs2",
                             [](detail::TraceBuilder& tb, std::size_t k, const Matrix& u, const Matrix& ak) {
                               auto st = block_cgs2_step(u, ak);
                               tb.append(k, st.q, st.r, &st.s, st.r2_inverse_norm);
                             });
}

/// Classical Gram-Schmidt with reorthogonalization, one column at a time.
/// Bitwise identical to bcgs2 with all block widths equal to 1.
inline FactorizationTrace cgs2(const Matrix& a, DriverOptions options = {})
{
  return detail::run_blocked(a, detail::unit_partition(a.cols()), options, "cgs2",
                             [](detail::TraceBuilder& tb, std::size_t k, const Matrix& u, const Matrix& ak) {
                               auto st = cgs2_step(u, ak);
                               Matrix r(1, 1), r2(1, 1);
                               r(0, 0) = st.r_b;
                               r2(0, 0) = st.r2;
                               tb.append(k, st.q_b, r, &st.s_b, triangular_inverse_norm(r2));
                             });
}

/// One-pass block CGS (no reorthogonalization). Comparison baseline.
inline FactorizationTrace bcgs(const Matrix& a, const BlockPartition& blocks, DriverOptions options = {})
{
  return detail::run_blocked(a, blocks, options, "bcgs",
                             [](detail::TraceBuilder& tb, std::size_t k, const Matrix& u, const Matrix& ak) {
                               auto st = block_cgs_step(u, ak);
                               tb.append(k, st.q, st.r, &st.s, std::nullopt);
                             });
}

/// One-pass classical Gram-Schmidt. Comparison baseline.
inline FactorizationTrace cgs(const Matrix& a, DriverOptions options = {})
{
  return bcgs(a, detail::unit_partition(a.cols()), options);
}

/// Column-oriented modified Gram-Schmidt. Comparison baseline.
inline FactorizationTrace mgs(const Matrix& a, DriverOptions options = {})
{
  detail::TraceBuilder tb(a, detail::unit_partition(a.cols()), options);
  const std::size_t m = a.rows();
  std::vector<Matrix> qs;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    Matrix v = a.cols_range(k, 1);
    auto vc = v.col(0);
    std::optional<Matrix> s;
    if (k > 0) s.emplace(k, 1);
    for (std::size_t j = 0; j < k; ++j) {
      const auto qj = qs[j].col(0);
      const double rjk = dot(qj, vc);
      (*s)(j, 0) = rjk;
      for (std::size_t i = 0; i < m; ++i) vc[i] -= rjk * qj[i];
    }
    try {
      auto [q, r] = local_qr(v);
      qs.push_back(q);
      tb.append(k, q, r, s ? &*s : nullptr, std::nullopt);
    }
    catch (const BreakdownError& e) {
      detail::rethrow_at(e, "mgs", k, k);
    }
  }
  return std::move(tb).finish();
}

/// Householder QR of the whole matrix as a single panel. Reference method.
inline FactorizationTrace householder(const Matrix& a, DriverOptions options = {})
{
  return detail::run_blocked(a, BlockPartition({a.cols()}), options, "householder",
                             [](detail::TraceBuilder&, std::size_t, const Matrix&, const Matrix&) {});
}

} // namespace bgs
