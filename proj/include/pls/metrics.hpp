#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "pls/generator.hpp"

namespace pls {

namespace detail {

inline double l2_norm(std::span<const cx> v) {
  double acc = 0.0;
  for (const cx& c : v) acc += std::norm(c);
  return std::sqrt(acc);
}

}  // namespace detail

/// Alignment error log10(min_gamma ||c - e^{i gamma} c~|| / ||c||). The
/// minimizer is closed-form: e^{i gamma*} = d/|d| with d = sum c_k conj(c~_k).
/// Clamped below at -16 (an exact match would be -inf).
inline double error_complex(std::span<const cx> truth, std::span<const cx> recovered) {
  if (truth.size() != recovered.size()) {
    throw std::invalid_argument("error_complex: length mismatch");
  }
  const double nt = detail::l2_norm(truth);
  if (nt == 0.0) throw std::invalid_argument("error_complex: zero truth vector");
  cx d(0.0, 0.0);
  for (std::size_t k = 0; k < truth.size(); ++k) d += truth[k] * std::conj(recovered[k]);
  const double ad = std::abs(d);
  const cx rot = (ad > 0.0) ? d / ad : cx(1.0, 0.0);
  double diff2 = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    diff2 += std::norm(truth[k] - rot * recovered[k]);
  }
  return std::max(-16.0, std::log10(std::sqrt(diff2) / nt));
}

/// Real-signal alignment error: the global factor is just a sign.
inline double error_real(std::span<const cx> truth, std::span<const cx> recovered) {
  if (truth.size() != recovered.size()) {
    throw std::invalid_argument("error_real: length mismatch");
  }
  const double nt = detail::l2_norm(truth);
  if (nt == 0.0) throw std::invalid_argument("error_real: zero truth vector");
  double plus = 0.0, minus = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    plus += std::norm(truth[k] - recovered[k]);
    minus += std::norm(truth[k] + recovered[k]);
  }
  const double rel = std::sqrt(std::min(plus, minus)) / nt;
  return std::max(-16.0, std::log10(rel));
}

/// Empirical CDF: the fraction of errors at or below x.
inline double cdf(std::span<const double> errors, double x) {
  if (errors.empty()) throw std::invalid_argument("cdf: empty error list");
  std::size_t count = 0;
  for (double e : errors) {
    if (e <= x) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(errors.size());
}

}  // namespace pls
