#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pls/generator.hpp"
#include "pls/rng.hpp"
#include "pls/system.hpp"

namespace pls {

enum class GhcVerdict { plausible, inconclusive };

/// Outcome of the randomized GHC certification. `plausible` means some
/// sampled point tuple produced |det| above the tolerance, which certifies
/// linear independence of the system; it is a numerical surrogate, not a
/// proof of the measure-zero condition itself.
struct GhcReport {
  int tuples_tested = 0;
  /// Largest |det| seen, after normalizing the matrix by its largest entry.
  double max_abs_determinant = 0.0;
  std::optional<std::vector<double>> passing_tuple;
  GhcVerdict verdict = GhcVerdict::inconclusive;
};

namespace detail {

/// |det| via Gaussian elimination with partial pivoting. Destroys `m`.
inline double abs_det(std::vector<std::vector<cx>>& m) {
  const std::size_t n = m.size();
  double result = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) == 0.0) return 0.0;
    if (pivot != col) std::swap(m[pivot], m[col]);
    result *= std::abs(m[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const cx factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return result;
}

}  // namespace detail

/// Randomized linear-independence certification: draws `num_tuples` point
/// tuples uniformly from (0,1)^m, evaluates the members at each tuple and
/// tests |det[g_j(x_i)]| against `tol`. Stops at the first passing tuple.
/// The determinant is computed on the matrix scaled by its largest entry
/// magnitude, so `tol` is relative to the system's local scale.
inline GhcReport check_ghc(const FunctionSystem& sys, int num_tuples,
                           std::uint64_t rng_seed, double tol = 1e-10) {
  const std::size_t m = sys.members.size();
  if (m == 0) throw std::invalid_argument("check_ghc: empty system");
  if (num_tuples < 1) throw std::invalid_argument("check_ghc: num_tuples must be >= 1");

  RngStream rng(rng_seed);
  GhcReport rep;
  std::vector<double> tuple(m);
  std::vector<std::vector<cx>> mat(m, std::vector<cx>(m));
  for (int t = 0; t < num_tuples; ++t) {
    for (std::size_t i = 0; i < m; ++i) tuple[i] = rng.uniform_open01();
    double amax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        mat[i][j] = sys.members[j](tuple[i]);
        amax = std::max(amax, std::abs(mat[i][j]));
      }
    }
    double d = 0.0;
    if (amax > 0.0) {
      for (auto& row : mat) {
        for (auto& v : row) v /= amax;
      }
      d = detail::abs_det(mat);
    }
    rep.tuples_tested = t + 1;
    rep.max_abs_determinant = std::max(rep.max_abs_determinant, d);
    if (d > tol) {
      rep.passing_tuple = tuple;
      rep.verdict = GhcVerdict::plausible;
      break;
    }
  }
  return rep;
}

}  // namespace pls
