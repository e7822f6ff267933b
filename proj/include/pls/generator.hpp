#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pls {

using cx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Phase of a complex value, with the convention phase(0) = 0.
inline double phase_of(cx v) noexcept {
  if (v.real() == 0.0 && v.imag() == 0.0) return 0.0;
  return std::arg(v);
}

enum class GeneratorKind { chirp, chirp_real_part, cubic_bspline, tabulated };

/// Compactly supported generator phi with supp(phi) contained in (0, s).
///
/// Built-in kinds:
///   chirp            (2/3)*sqrt(2*pi*|b|) * e^{-i[a(x-2)^2/(2b) + p(x-2)/b]}
///                    * cos^2(pi(x-2)/4) on (0, 4); requires a != 0, b != 0
///   chirp_real_part  the real part of the chirp above
///   cubic_bspline    the standard piecewise cubic B-spline on (0, 4)
///   tabulated        linear interpolation of caller-supplied values on a
///                    uniform grid over [0, s]
///
/// An optional linear-phase modulation wraps the base value as
/// e^{i*alpha*x} * phi(x); it leaves |phi| unchanged but makes the
/// generator complex-valued. Evaluation outside (0, s) is exactly zero.
class Generator {
 public:
  static Generator chirp(double a, double b, double p) {
    return Generator(GeneratorKind::chirp, a, b, p);
  }

  static Generator chirp_real_part(double a, double b, double p) {
    return Generator(GeneratorKind::chirp_real_part, a, b, p);
  }

  static Generator cubic_bspline() {
    return Generator(GeneratorKind::cubic_bspline, 0.0, 0.0, 0.0);
  }

  /// values[j] is the generator value at x = s*j/(values.size()-1); points
  /// between grid nodes interpolate linearly, points outside (0, s) are 0.
  static Generator tabulated(std::vector<cx> values, int support) {
    if (support < 2) throw std::invalid_argument("tabulated: support must be >= 2");
    if (values.size() < 2) throw std::invalid_argument("tabulated: need at least 2 grid values");
    Generator g(GeneratorKind::tabulated, 0.0, 0.0, 0.0);
    g.support_ = support;
    g.values_ = std::move(values);
    double peak = 0.0;
    for (const cx& v : g.values_) peak = std::max(peak, std::abs(v));
    g.peak_ = peak;
    return g;
  }

  /// Copy of this generator with e^{i*alpha*x} applied on top.
  Generator modulated(double alpha) const {
    Generator g = *this;
    g.modulation_ += alpha;
    return g;
  }

  cx eval(double x) const {
    if (!(x > 0.0 && x < static_cast<double>(support_))) return cx(0.0, 0.0);
    cx v = base_eval(x);
    if (modulation_ != 0.0) {
      v *= cx(std::cos(modulation_ * x), std::sin(modulation_ * x));
    }
    return v;
  }

  int support_len() const noexcept { return support_; }

  bool is_complex() const noexcept {
    if (kind_ == GeneratorKind::chirp || modulation_ != 0.0) return true;
    if (kind_ == GeneratorKind::tabulated) {
      for (const cx& v : values_) {
        if (v.imag() != 0.0) return true;
      }
    }
    return false;
  }

  /// Upper bound on |phi| over the support, attained for the built-in kinds.
  double peak_abs() const noexcept { return peak_; }

  GeneratorKind kind() const noexcept { return kind_; }
  double chirp_a() const noexcept { return a_; }
  double chirp_b() const noexcept { return b_; }
  double chirp_p() const noexcept { return p_; }
  double modulation() const noexcept { return modulation_; }
  const std::vector<cx>& grid_values() const noexcept { return values_; }

 private:
  Generator(GeneratorKind kind, double a, double b, double p)
      : kind_(kind), a_(a), b_(b), p_(p) {
    switch (kind_) {
      case GeneratorKind::chirp:
      case GeneratorKind::chirp_real_part:
        if (a_ == 0.0) throw std::invalid_argument("chirp: a must be nonzero");
        if (b_ == 0.0) throw std::invalid_argument("chirp: b must be nonzero");
        support_ = 4;
        amp_ = (2.0 / 3.0) * std::sqrt(2.0 * pi * std::abs(b_));
        peak_ = amp_;  // cos^2 envelope peaks at 1 (x = 2, where the phase is 0)
        break;
      case GeneratorKind::cubic_bspline:
        support_ = 4;
        peak_ = 2.0 / 3.0;
        break;
      case GeneratorKind::tabulated:
        support_ = 0;  // set by the factory
        break;
    }
  }

  cx base_eval(double x) const {
    switch (kind_) {
      case GeneratorKind::chirp: {
        const double xm = x - 2.0;
        const double env = std::cos(pi * xm / 4.0);
        const double theta = a_ * xm * xm / (2.0 * b_) + p_ * xm / b_;
        const double m = amp_ * env * env;
        return cx(m * std::cos(theta), -m * std::sin(theta));
      }
      case GeneratorKind::chirp_real_part: {
        const double xm = x - 2.0;
        const double env = std::cos(pi * xm / 4.0);
        const double theta = a_ * xm * xm / (2.0 * b_) + p_ * xm / b_;
        return cx(amp_ * env * env * std::cos(theta), 0.0);
      }
      case GeneratorKind::cubic_bspline:
        return cx(bspline3(x), 0.0);
      case GeneratorKind::tabulated: {
        const double pos = x / static_cast<double>(support_) *
                           static_cast<double>(values_.size() - 1);
        const std::size_t i =
            std::min(static_cast<std::size_t>(pos), values_.size() - 2);
        const double frac = pos - static_cast<double>(i);
        return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
      }
    }
    return cx(0.0, 0.0);
  }

  static double bspline3(double x) {
    if (x < 1.0) return x * x * x / 6.0;
    if (x < 2.0) return (-3.0 * x * x * x + 12.0 * x * x - 12.0 * x + 4.0) / 6.0;
    if (x < 3.0) return (3.0 * x * x * x - 24.0 * x * x + 60.0 * x - 44.0) / 6.0;
    const double t = 4.0 - x;
    return t * t * t / 6.0;
  }

  GeneratorKind kind_;
  double a_ = 0.0, b_ = 0.0, p_ = 0.0;
  double modulation_ = 0.0;
  int support_ = 4;
  double amp_ = 0.0;
  double peak_ = 0.0;
  std::vector<cx> values_;
};

}  // namespace pls
