#include "bgs/bounds.hpp"
#include "bgs/generators.hpp"
#include "bgs/gs_kernels.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstring>

using bgs::Matrix;

namespace {

Matrix e(std::size_t m, std::size_t i)
{
  Matrix v(m, 1);
  v(i, 0) = 1.0;
  return v;
}

bool bitwise_equal(const Matrix& a, const Matrix& b)
{
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data().data(), b.data().data(), sizeof(double) * a.data().size()) == 0;
}

// ||b - u s - q r||_2 computed with the naive product.
double step_residual(const Matrix& u, const Matrix& b, const Matrix& s, const Matrix& q, const Matrix& r)
{
  const Matrix us = bgs::oracle::naive_matmul(u, s);
  const Matrix qr = bgs::oracle::naive_matmul(q, r);
  Matrix d = b;
  for (std::size_t i = 0; i < d.data().size(); ++i) d.data()[i] -= us.data()[i] + qr.data()[i];
  return bgs::oracle::spectral_norm(d);
}

} // namespace

TEST(Cgs2Step, AlreadyOrthogonal)
{
  const auto st = bgs::cgs2_step(e(3, 0), e(3, 1));
  EXPECT_EQ(st.q_b, e(3, 1));
  EXPECT_EQ(st.r_b, 1.0);
  EXPECT_EQ(st.s_b, Matrix(1, 1));
}

TEST(Cgs2Step, ExactProjection)
{
  const auto st = bgs::cgs2_step(e(3, 0), Matrix::from_rows({{1}, {1}, {0}}));
  EXPECT_EQ(st.q_b, e(3, 1));
  EXPECT_EQ(st.r_b, 1.0);
  EXPECT_EQ(st.s_b, Matrix::from_rows({{1}}));
}

TEST(Cgs2Step, UnitNorm)
{
  bgs::Rng rng(1);
  const Matrix u = bgs::random_orthonormal(40, 6, rng);
  for (int rep = 0; rep < 20; ++rep) {
    const auto st = bgs::cgs2_step(u, bgs::gaussian_matrix(40, 1, rng));
    double s = 0.0;
    for (double v : st.q_b.data()) s += v * v;
    EXPECT_NEAR(std::sqrt(s), 1.0, 4.0 * bgs::kUnitRoundoff);
    EXPECT_GE(st.r_b, 0.0);
  }
}

TEST(Cgs2Step, VectorInSpanBreaksDown)
{
  try {
    (void)bgs::cgs2_step(e(3, 0), Matrix::from_rows({{2}, {0}, {0}}));
    FAIL() << "expected breakdown";
  }
  catch (const bgs::BreakdownError& err) {
    EXPECT_NE(std::string(err.what()).find("first normalization"), std::string::npos);
  }
}

TEST(Cgs2Step, ShapeChecks)
{
  EXPECT_THROW((void)bgs::cgs2_step(e(3, 0), Matrix(3, 2)), std::invalid_argument);
  EXPECT_THROW((void)bgs::cgs2_step(e(3, 0), Matrix(4, 1)), std::invalid_argument);
  EXPECT_THROW((void)bgs::cgs2_step(Matrix::identity(3), e(3, 0)), std::invalid_argument);
}

TEST(BlockCgsStep, OrthogonalInput)
{
  Matrix b(4, 2);
  b(1, 0) = 1.0;
  b(2, 1) = 1.0;
  const auto st = bgs::block_cgs_step(e(4, 0), b);
  EXPECT_EQ(st.s, Matrix(1, 2));
  EXPECT_EQ(st.q, b);
  EXPECT_EQ(st.r, Matrix::identity(2));
}

TEST(BlockCgsStep, BlockInSpanBreaksDown)
{
  bgs::Rng rng(2);
  const Matrix u = bgs::random_orthonormal(20, 4, rng);
  const Matrix b = bgs::matmul(u, bgs::gaussian_matrix(4, 3, rng));
  EXPECT_THROW((void)bgs::block_cgs_step(u, b), bgs::BreakdownError);
}

TEST(BlockCgsStep, RequiresRoom)
{
  EXPECT_THROW((void)bgs::block_cgs_step(Matrix::identity(4, 3), Matrix(4, 2)), std::invalid_argument);
}

TEST(BlockCgs2Step, TrivialCase)
{
  const auto st = bgs::block_cgs2_step(e(3, 0), e(3, 1));
  EXPECT_EQ(st.q, e(3, 1));
  EXPECT_EQ(st.r, Matrix::from_rows({{1}}));
  EXPECT_EQ(st.s, Matrix(1, 1));
  EXPECT_EQ(st.r2_inverse_norm, 1.0);
}

TEST(BlockCgs2Step, RIsUpperTriangularExactly)
{
  bgs::Rng rng(3);
  const Matrix u = bgs::random_orthonormal(50, 10, rng);
  const auto st = bgs::block_cgs2_step(u, bgs::gaussian_matrix(50, 6, rng));
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = j + 1; i < 6; ++i) EXPECT_EQ(st.r(i, j), 0.0);
}

TEST(BlockCgs2Step, IllConditionedBlockAgainstOrthonormalBasis)
{
  bgs::Rng rng(4);
  const Matrix u = bgs::random_orthonormal(100, 20, rng);
  const Matrix b = bgs::gen_svd_spectrum(100, 10, 1e8, 99);
  const auto st = bgs::block_cgs2_step(u, b);
  EXPECT_LE(bgs::oracle::spectral_norm(bgs::oracle::naive_matmul(bgs::oracle::naive_transpose(u), st.q)), 1e-13);
  EXPECT_LE(bgs::orthogonality_defect(st.q), 1e-13);
}

TEST(BlockCgs2Step, LinearSystemIdentityAndRNorm)
{
  bgs::Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t m = 30 + rng.next() % 100;
    const std::size_t t = 1 + rng.next() % 12;
    const std::size_t p = 1 + rng.next() % 8;
    const Matrix u = bgs::random_orthonormal(m, t, rng);
    const Matrix b = bgs::gen_svd_spectrum(m, p, 1e4, rng.next());
    const auto st = bgs::block_cgs2_step(u, b);
    const bgs::bounds::BoundContext ctx(m, p);
    const double bnorm = bgs::oracle::spectral_norm(b);
    EXPECT_LE(step_residual(u, b, st.s, st.q, st.r),
              10.0 * ctx.eps() * bgs::bounds::f_resid(m, t, p, ctx) * bnorm);
    EXPECT_LE(bgs::oracle::spectral_norm(st.r), bnorm * (1.0 + 1e-10));
  }
}

TEST(BlockCgs2Step, MatchesCgs2StepAtUnitWidth)
{
  bgs::Rng rng(6);
  for (int rep = 0; rep < 30; ++rep) {
    const Matrix u = bgs::random_orthonormal(25, 5, rng);
    const Matrix b = bgs::gaussian_matrix(25, 1, rng);
    const auto a = bgs::cgs2_step(u, b);
    const auto c = bgs::block_cgs2_step(u, b);
    EXPECT_TRUE(bitwise_equal(a.q_b, c.q));
    EXPECT_EQ(a.r_b, c.r(0, 0));
    EXPECT_TRUE(bitwise_equal(a.s_b, c.s));
  }
}

TEST(BlockCgs2Step, SecondPassRepairsOrthogonality)
{
  // Near-dependent blocks: b = u C + delta G. One pass leaves a visible
  // component along u; two passes do not.
  bgs::Rng rng(7);
  int separated = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix u = bgs::random_orthonormal(60, 8, rng);
    Matrix b = bgs::matmul(u, bgs::gaussian_matrix(8, 4, rng)) + 1e-10 * bgs::gaussian_matrix(60, 4, rng);
    const auto one = bgs::block_cgs_step(u, b);
    const double one_pass = bgs::spectral_norm(bgs::matmul_tn(u, one.q));
    if (one_pass <= 1e-8) continue;
    ++separated;
    const auto two = bgs::block_cgs2_step(u, b);
    EXPECT_LE(bgs::spectral_norm(bgs::matmul_tn(u, two.q)), 1e-13);
  }
  EXPECT_GT(separated, 0);
}

TEST(TriangularInverseNorm, Values)
{
  EXPECT_DOUBLE_EQ(bgs::triangular_inverse_norm(Matrix::from_rows({{2, 0}, {0, 4}})), 0.5);
  EXPECT_TRUE(std::isinf(bgs::triangular_inverse_norm(Matrix::from_rows({{1, 1}, {0, 0}}))));
}
