#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pls/generator.hpp"
#include "pls/rng.hpp"
#include "pls/signal.hpp"

namespace pls {

/// Random sample layout: one point t_0 in (0,1) plus `density` points per
/// unit interval (n, n+1) for n = 1..n_max. Density 3 serves the complex
/// reconstruction path, density 2 the real one.
struct SamplePlan {
  int density = 3;
  int n_max = 1;
  std::uint64_t rng_seed = 0;
};

inline void validate(const SamplePlan& plan) {
  if (plan.density != 2 && plan.density != 3) {
    throw std::invalid_argument("SamplePlan: density must be 2 or 3");
  }
  if (plan.n_max < 1) throw std::invalid_argument("SamplePlan: n_max must be >= 1");
}

/// Realized sample locations. `points` is n-major, j-minor: the offset of
/// the j-th point of interval n is points[(n-1)*density + j].
struct SampleDesign {
  double t0 = 0.5;
  int density = 3;
  std::vector<double> points;

  int n_max() const noexcept {
    return density == 0 ? 0 : static_cast<int>(points.size()) / density;
  }

  double point(int n, int j) const {
    return points.at(static_cast<std::size_t>(n - 1) * density + j);
  }

  std::size_t count() const noexcept { return points.size() + 1; }

  /// Absolute location of sample index i in design order (t0 first, then
  /// interval by interval).
  double location(std::size_t i) const {
    if (i == 0) return t0;
    const std::size_t p = i - 1;
    return static_cast<double>(p / density + 1) + points.at(p);
  }
};

/// Draws every offset i.i.d. uniform on the open interval (0,1),
/// deterministically from the plan's seed.
inline SampleDesign draw_points(const SamplePlan& plan) {
  validate(plan);
  RngStream rng(plan.rng_seed);
  SampleDesign d;
  d.density = plan.density;
  d.t0 = rng.uniform_open01();
  d.points.resize(static_cast<std::size_t>(plan.n_max) * plan.density);
  for (double& p : d.points) p = rng.uniform_open01();
  return d;
}

struct NoiseMeta {
  double snr_db = 0.0;
  double sigma2 = 0.0;
};

/// Magnitude measurements |f| over a design, in design order. Values of a
/// noiseless measurement are nonnegative; after noise injection they may
/// go negative and are deliberately left unclamped.
struct MagnitudeSamples {
  SampleDesign design;
  std::vector<double> values;
  std::optional<NoiseMeta> noise_meta;

  double value0() const { return values.at(0); }
  double value(int n, int j) const {
    return values.at(1 + static_cast<std::size_t>(n - 1) * design.density + j);
  }
};

inline MagnitudeSamples measure(const CausalSignal& f, const SampleDesign& design) {
  const int s = f.generator().support_len();
  if (design.n_max() > f.max_index() + s - 1) {
    throw std::invalid_argument("measure: design extends beyond the signal's support");
  }
  MagnitudeSamples out;
  out.design = design;
  out.values.resize(design.count());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = std::abs(evaluate(f, design.location(i)));
  }
  return out;
}

/// Adds i.i.d. N(0, sigma^2) to every value, with sigma^2 chosen so that
/// 10*log10(||F||^2 / (K*sigma^2)) equals `snr_db` for the K samples at
/// hand. Records the applied noise level in `noise_meta`.
inline MagnitudeSamples add_noise(const MagnitudeSamples& in, double snr_db,
                                  RngStream& rng) {
  if (in.noise_meta) throw std::invalid_argument("add_noise: samples already noisy");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("add_noise: snr_db must be finite");
  double energy = 0.0;
  for (double v : in.values) energy += v * v;
  const double k = static_cast<double>(in.values.size());
  const double sigma2 = energy / (k * std::pow(10.0, snr_db / 10.0));
  const double sigma = std::sqrt(sigma2);
  MagnitudeSamples out = in;
  for (double& v : out.values) v += rng.gaussian(sigma);
  out.noise_meta = NoiseMeta{snr_db, sigma2};
  return out;
}

}  // namespace pls
