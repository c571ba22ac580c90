#pragma once

#include "bgs/local_qr.hpp"
#include "bgs/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

namespace bgs {

/// Seeded source of reproducible variates. The engine is std::mt19937_64,
/// whose output sequence is fixed by the standard; uniforms take the top 53
/// bits and normals use the Box-Muller transform, so corpora do not depend on
/// the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal()
  {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

inline Matrix gaussian_matrix(std::size_t m, std::size_t n, Rng& rng)
{
  Matrix a(m, n);
  for (double& v : a.data()) v = rng.normal();
  return a;
}

/// m x n with orthonormal columns: the Q factor of a Gaussian matrix.
inline Matrix random_orthonormal(std::size_t m, std::size_t n, Rng& rng)
{
  return local_qr(gaussian_matrix(m, n, rng)).q;
}

/// A = U diag(sigma) V^T with U (m x n) and V (n x n) random orthonormal.
inline Matrix with_singular_values(std::size_t m, const std::vector<double>& sigma, Rng& rng)
{
  const std::size_t n = sigma.size();
  if (n == 0 || n > m) throw std::invalid_argument("with_singular_values: need 1 <= n <= m");
  Matrix u = random_orthonormal(m, n, rng);
  const Matrix v = random_orthonormal(n, n, rng);
  for (std::size_t j = 0; j < n; ++j)
    for (double& x : u.col(j)) x *= sigma[j];
  return matmul(u, transpose(v));
}

/// Geometric singular values from 1 down to 1 / kappa.
inline std::vector<double> geometric_spectrum(std::size_t n, double kappa)
{
  std::vector<double> sigma(n, 1.0);
  if (n > 1)
    for (std::size_t i = 0; i < n; ++i)
      sigma[i] = std::pow(kappa, -static_cast<double>(i) / static_cast<double>(n - 1));
  return sigma;
}

/// Dense m x n matrix with 2-norm condition number kappa and a geometrically
/// graded spectrum.
inline Matrix gen_svd_spectrum(std::size_t m, std::size_t n, double kappa, std::uint64_t seed)
{
  if (n == 0 || n > m) throw std::invalid_argument("gen_svd_spectrum: need 1 <= n <= m");
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw std::invalid_argument("gen_svd_spectrum: kappa must be >= 1");
  Rng rng(seed);
  Matrix a = with_singular_values(m, geometric_spectrum(n, kappa), rng);
  require_finite(a, "gen_svd_spectrum");
  return a;
}

/// (n + 1) x n: a row of ones above eps_val * I_n.
inline Matrix gen_lauchli(std::size_t n, double eps_val)
{
  if (n == 0) throw std::invalid_argument("gen_lauchli: n must be positive");
  if (!(eps_val > 0.0)) throw std::invalid_argument("gen_lauchli: eps_val must be positive");
  Matrix a(n + 1, n);
  for (std::size_t j = 0; j < n; ++j) {
    a(0, j) = 1.0;
    a(j + 1, j) = eps_val;
  }
  require_finite(a, "gen_lauchli");
  return a;
}

/// Entries 1 / (i + j - 1) with 1-based i, j.
inline Matrix gen_hilbert_like(std::size_t m, std::size_t n)
{
  Matrix a(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) a(i, j) = 1.0 / static_cast<double>(i + j + 1);
  return a;
}

/// Stress matrix whose block `bad` (0-based, >= 1, uniform width p) is an
/// exact combination of the columns before it. Those leading t = bad * p
/// columns are well conditioned and supported on the first t rows only, so
/// every rounding error made while projecting the dependent block stays in
/// their span. All other columns are Gaussian.
inline Matrix gen_dependent_block(std::size_t m, std::size_t n, std::size_t p, std::size_t bad, std::uint64_t seed)
{
  const std::size_t t = bad * p;
  if (p == 0 || bad == 0 || t + p > n || n > m) {
    throw std::invalid_argument("gen_dependent_block: need bad >= 1, (bad + 1) p <= n <= m");
  }
  Rng rng(seed);
  Matrix a = gaussian_matrix(m, n, rng);
  Matrix lead(m, t);
  lead.assign_block(0, 0, with_singular_values(t, geometric_spectrum(t, 10.0), rng));
  a.assign_block(0, 0, lead);
  a.assign_block(0, t, matmul(lead, gaussian_matrix(t, p, rng)));
  require_finite(a, "gen_dependent_block");
  return a;
}

} // namespace bgs
