#include "bgs/bounds.hpp"
#include "bgs/drivers.hpp"
#include "bgs/generators.hpp"
#include "bgs/norms.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using bgs::Matrix;

TEST(SpectralNorm, Diagonal)
{
  EXPECT_DOUBLE_EQ(bgs::spectral_norm(Matrix::from_rows({{3, 0}, {0, 1}})), 3.0);
}

TEST(SpectralNorm, Zero) { EXPECT_EQ(bgs::spectral_norm(Matrix(2, 2)), 0.0); }

TEST(SpectralNorm, MatchesEigensolverOracle)
{
  bgs::Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix a = bgs::gaussian_matrix(5, 3, rng);
    const double ref = bgs::oracle::spectral_norm(a);
    EXPECT_NEAR(bgs::spectral_norm(a), ref, 1e-12 * ref);
  }
}

TEST(SpectralNorm, TransposeInvariant)
{
  bgs::Rng rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix a = bgs::gaussian_matrix(17, 6, rng);
    const double s = bgs::spectral_norm(a);
    EXPECT_NEAR(bgs::spectral_norm(bgs::transpose(a)), s, 1e-12 * s);
  }
}

TEST(SpectralNorm, Submultiplicative)
{
  bgs::Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix a = bgs::gaussian_matrix(8, 5, rng);
    const Matrix b = bgs::gaussian_matrix(5, 7, rng);
    EXPECT_LE(bgs::spectral_norm(bgs::matmul(a, b)),
              bgs::spectral_norm(a) * bgs::spectral_norm(b) * (1.0 + 1e-10));
  }
}

TEST(SpectralNorm, PowerIterationAgreesWithSvd)
{
  const Matrix a = bgs::gen_svd_spectrum(40, 10, 1e3, 5);
  const auto pi = bgs::detail::power_iteration(a);
  ASSERT_TRUE(pi.converged);
  EXPECT_NEAR(pi.sigma, 1.0, 1e-8);
}

TEST(SpectralNorm, LargeMatrixUsesPowerIteration)
{
  // min(m, n) above the SVD limit.
  bgs::Rng rng(14);
  Matrix a(600, 520);
  for (std::size_t j = 0; j < a.cols(); ++j) a(j, j) = 1.0 + 1e-3 * static_cast<double>(j % 7);
  a(3, 3) = 5.0;
  EXPECT_NEAR(bgs::spectral_norm(a), 5.0, 5e-8);
}

TEST(OrthogonalityDefect, Identity) { EXPECT_EQ(bgs::orthogonality_defect(Matrix::identity(4)), 0.0); }

TEST(OrthogonalityDefect, DuplicatedColumn)
{
  const Matrix q = Matrix::from_rows({{1, 1}, {0, 0}});
  EXPECT_DOUBLE_EQ(bgs::orthogonality_defect(q), 1.0);
}

TEST(OrthogonalityDefect, HouseholderQ)
{
  bgs::Rng rng(15);
  const Matrix q = bgs::local_qr(bgs::gaussian_matrix(50, 10, rng)).q;
  EXPECT_LE(bgs::orthogonality_defect(q), 1e-14);
}

TEST(OrthogonalityDefect, MatchesOracle)
{
  const Matrix q = bgs::cgs(bgs::gen_svd_spectrum(30, 8, 1e6, 3)).factorization.q();
  Matrix g = bgs::oracle::naive_matmul(bgs::oracle::naive_transpose(q), q);
  for (double& v : g.data()) v = -v;
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) += 1.0;
  const double ref = bgs::oracle::symmetric_norm(g);
  EXPECT_NEAR(bgs::orthogonality_defect(q), ref, 1e-10 * ref);
}

TEST(OrthogonalityDefect, ColumnPermutationInvariant)
{
  const Matrix q = bgs::cgs(bgs::gen_svd_spectrum(30, 6, 1e6, 4)).factorization.q();
  Matrix perm(q.rows(), q.cols());
  const std::size_t order[] = {3, 0, 5, 1, 4, 2};
  for (std::size_t j = 0; j < q.cols(); ++j) perm.assign_block(0, j, q.cols_range(order[j], 1));
  EXPECT_NEAR(bgs::orthogonality_defect(perm), bgs::orthogonality_defect(q), 1e-15);
}

TEST(OrthogonalityDefect, RejectsWideInput)
{
  EXPECT_THROW((void)bgs::orthogonality_defect(Matrix(2, 3)), std::invalid_argument);
}

TEST(RelativeResidual, IdentityFactorization)
{
  const bgs::QRFactorization f(Matrix::identity(3), Matrix::identity(3));
  const auto r = bgs::relative_residual(Matrix::identity(3), f);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_FALSE(r.zero_input);
}

TEST(RelativeResidual, ExactProduct)
{
  bgs::Rng rng(16);
  const Matrix q = bgs::random_orthonormal(12, 4, rng);
  Matrix r = bgs::gaussian_matrix(4, 4, rng);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = j + 1; i < 4; ++i) r(i, j) = 0.0;
  const bgs::QRFactorization f(q, r);
  const Matrix a = bgs::matmul(f.q(), f.r());
  EXPECT_LE(bgs::relative_residual(a, f).value, 2.0 * bgs::kUnitRoundoff * 4);
}

TEST(RelativeResidual, ZeroInputConvention)
{
  const bgs::QRFactorization f(Matrix::identity(3, 2), Matrix::identity(2));
  const auto r = bgs::relative_residual(Matrix(3, 2), f);
  EXPECT_TRUE(r.zero_input);
  EXPECT_EQ(r.value, 0.0);
}

TEST(RelativeResidual, Bcgs2WithinResidualBound)
{
  bgs::Rng rng(17);
  const Matrix a = bgs::gaussian_matrix(30, 6, rng);
  const auto part = bgs::BlockPartition::uniform(6, 2);
  const auto trace = bgs::bcgs2(a, part);
  const bgs::bounds::BoundContext ctx(30, 2);
  const double bound = ctx.eps() * bgs::bounds::f2(30, 4, 2, 3, ctx);
  EXPECT_LE(bgs::relative_residual(a, trace.factorization).value, bound);
}

TEST(RelativeResidual, ShapeMismatch)
{
  const bgs::QRFactorization f(Matrix::identity(3), Matrix::identity(3));
  EXPECT_THROW((void)bgs::relative_residual(Matrix(4, 3), f), std::invalid_argument);
}

TEST(ConditionNumber, Basics)
{
  EXPECT_DOUBLE_EQ(bgs::condition_number(Matrix::from_rows({{4, 0}, {0, 2}})), 2.0);
  EXPECT_GT(bgs::condition_number(Matrix::from_rows({{1, 1}, {1, 1}})), 1e15);
}
