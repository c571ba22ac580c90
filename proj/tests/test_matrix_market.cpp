#include "bgs/generators.hpp"
#include "bgs/matrix_market.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using bgs::Matrix;

TEST(MatrixMarket, ArrayRoundTripIsExact)
{
  bgs::Rng rng(1);
  Matrix a = bgs::gaussian_matrix(7, 3, rng);
  a(0, 0) = 1e-310; // subnormal
  a(1, 0) = -0.1;
  std::stringstream ss;
  bgs::write_matrix_market(ss, a);
  EXPECT_EQ(bgs::read_matrix_market(ss), a);
}

TEST(MatrixMarket, HeaderLine)
{
  std::stringstream ss;
  bgs::write_matrix_market(ss, Matrix::identity(2));
  std::string first;
  std::getline(ss, first);
  EXPECT_EQ(first, "%%MatrixMarket matrix array real general");
}

TEST(MatrixMarket, CoordinateGeneralAndSymmetric)
{
  std::istringstream gen("%%MatrixMarket matrix coordinate real general\n% comment\n3 2 2\n1 1 2.5\n3 2 -1\n");
  const Matrix g = bgs::read_matrix_market(gen);
  EXPECT_EQ(g, Matrix::from_rows({{2.5, 0}, {0, 0}, {0, -1}}));

  std::istringstream sym("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 1 4\n");
  EXPECT_EQ(bgs::read_matrix_market(sym), Matrix::from_rows({{1, 4}, {4, 0}}));
}

TEST(MatrixMarket, ArraySymmetricStoresLowerTriangle)
{
  std::istringstream in("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n");
  EXPECT_EQ(bgs::read_matrix_market(in), Matrix::from_rows({{1, 2}, {2, 3}}));
}

TEST(MatrixMarket, RejectsMalformedInput)
{
  std::istringstream bad_header("%%NotMatrixMarket matrix array real general\n1 1\n1\n");
  EXPECT_THROW(bgs::read_matrix_market(bad_header), std::runtime_error);
  std::istringstream complex_field("%%MatrixMarket matrix array complex general\n1 1\n1 0\n");
  EXPECT_THROW(bgs::read_matrix_market(complex_field), std::runtime_error);
  std::istringstream truncated("%%MatrixMarket matrix array real general\n2 1\n1\n");
  EXPECT_THROW(bgs::read_matrix_market(truncated), std::runtime_error);
  std::istringstream out_of_range("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
  EXPECT_THROW(bgs::read_matrix_market(out_of_range), std::runtime_error);
  std::istringstream nan("%%MatrixMarket matrix array real general\n1 1\nnan\n");
  EXPECT_THROW(bgs::read_matrix_market(nan), std::invalid_argument);
}

TEST(MatrixMarket, FileRoundTrip)
{
  const auto path = std::filesystem::temp_directory_path() / "bgs_mm_roundtrip.mtx";
  const Matrix a = bgs::gen_hilbert_like(5, 3);
  bgs::write_matrix_market(path.string(), a);
  EXPECT_EQ(bgs::read_matrix_market(path.string()), a);
  std::filesystem::remove(path);
  EXPECT_THROW(bgs::read_matrix_market("/nonexistent/x.mtx"), std::runtime_error);
}
