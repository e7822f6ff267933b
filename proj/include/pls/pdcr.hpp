#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pls/generator.hpp"
#include "pls/sampling.hpp"
#include "pls/signal.hpp"

namespace pls {

// Phase decoding / coefficient recovery.
//
// Writing F_x = |f|(n+x) and v = v_n (the part of f on interval n carried
// by already-recovered coefficients), the unknown phase z = e^{i theta} of
// the sample f(n+x) and the pair of magnitudes at x, y are tied together by
// eliminating c_n from
//
//     f(n+x) = v(x) + c_n phi(x) = z F_x ,   |v(y) + c_n phi(y)| = F_y ,
//
// which after expanding |w + z q|^2 = F_y^2 with w = v(y) - v(x) phi(y)/phi(x)
// and q = F_x phi(y)/phi(x), and using |z| = 1, collapses to the quadratic
//
//     (A + iB) z^2 - C z + (A - iB) = 0 ,      A + iB = q conj(w) ,
//     C = F_y^2 - |w|^2 - |q|^2 .
//
// Two magnitude pairs (x, y2) and (x, y3) give two such quadratics that
// share exactly one root: the true phase. Once z is decoded,
// c_n = (z F_x - v(x)) / phi(x) and the recursion advances. The real-valued
// path is the same elimination with z restricted to {+1, -1}, where the
// quadratic A z^2 - C z + A has root product 1 and the sign pops out of a
// single pair as sgn(C/A).

/// Coefficients of the phase quadratic (A+iB) z^2 - C z + (A-iB) = 0.
/// `ab_scale` is the magnitude sum of the terms that formed `ab`; it is the
/// natural reference scale when testing |ab| for degeneracy.
struct QuadraticData {
  cx ab;
  double c = 0.0;
  double ab_scale = 0.0;
};

/// Real-path analogue holding A and C of A z^2 - C z + A = 0.
struct RealQuadraticData {
  double a = 0.0;
  double c = 0.0;
  double a_scale = 0.0;
};

/// Assembles the quadratic tying the phase of f(n+x) to the magnitudes
/// F_x = mag_nx and F_y = mag_ny. Requires phi(x) != 0.
inline QuadraticData quad_data(std::span<const cx> coeffs, const Generator& gen,
                               int n, double x, double y, double mag_nx,
                               double mag_ny) {
  const cx px = gen.eval(x);
  if (px == cx(0.0, 0.0)) throw std::domain_error("quad_data: phi(x) = 0");
  const cx py = gen.eval(y);
  const cx vx = aux_v(coeffs, gen, n, x);
  const cx vy = aux_v(coeffs, gen, n, y);
  const double apx2 = std::norm(px);
  const double apy2 = std::norm(py);

  const cx term1 = std::conj(px) * py * std::conj(vy);
  const cx term2 = std::conj(vx) * apy2;
  const double w = mag_nx / apx2;

  QuadraticData q;
  q.ab = w * (term1 - term2);
  q.ab_scale = std::abs(w) * (std::abs(term1) + std::abs(term2));
  q.c = mag_ny * mag_ny - std::norm(vy) +
        2.0 * std::real(vx * std::conj(vy) * py / px) -
        (apy2 / apx2) * (mag_nx * mag_nx + std::norm(vx));
  return q;
}

/// Real-generator counterpart of quad_data. Coefficients and generator
/// values must be real (zero imaginary parts).
inline RealQuadraticData quad_data_real(std::span<const cx> coeffs,
                                        const Generator& gen, int n, double x,
                                        double y, double mag_nx, double mag_ny) {
  const double px = gen.eval(x).real();
  if (px == 0.0) throw std::domain_error("quad_data_real: phi(x) = 0");
  const double py = gen.eval(y).real();
  const double vx = aux_v(coeffs, gen, n, x).real();
  const double vy = aux_v(coeffs, gen, n, y).real();

  const double term1 = px * py * vy;
  const double term2 = vx * py * py;
  const double w = mag_nx / (px * px);

  RealQuadraticData q;
  q.a = w * (term1 - term2);
  q.a_scale = std::abs(w) * (std::abs(term1) + std::abs(term2));
  q.c = mag_ny * mag_ny - vy * vy + 2.0 * vx * vy * py / px -
        (py * py) / (px * px) * (mag_nx * mag_nx + vx * vx);
  return q;
}

/// The two roots (C +- sqrt(C^2 - 4|A+iB|^2)) / (2(A+iB)). The discriminant
/// is real; a negative value (the noiseless regime) takes the principal
/// complex square root, putting both roots on the unit circle. The root
/// product is (A-iB)/(A+iB), always unimodular.
inline std::pair<cx, cx> solve_phase_quadratic(const QuadraticData& q) {
  if (q.ab == cx(0.0, 0.0)) {
    throw std::domain_error("solve_phase_quadratic: A + iB = 0");
  }
  const double disc = q.c * q.c - 4.0 * std::norm(q.ab);
  const cx sq = std::sqrt(cx(disc, 0.0));
  const cx den = 2.0 * q.ab;
  return {(q.c + sq) / den, (q.c - sq) / den};
}

struct RootSelection {
  cx root;          ///< winning root, renormalized to unit modulus
  double d_win = 0.0;     ///< its distance to the nearest reference root
  double d_runner = 0.0;  ///< same for the losing candidate
  bool ambiguous = false;
};

/// Picks from `cand` the root closest to either member of `ref` -- the
/// common root of the two quadratics. The match is accepted only when the
/// winning distance is at most `tie_factor` times the runner-up distance;
/// otherwise the step is flagged ambiguous. Candidates closer than
/// `split_tol` are a double root: either one is the root, so the margin
/// rule does not apply (real-valued signals pushed through the complex
/// path live exactly on that boundary).
///
/// The returned value is taken from whichever pair is better separated:
/// a quadratic near a double root determines its roots only to
/// error/separation, and the two pairs agree on the common root in exact
/// arithmetic, so the wider pair is the numerically trustworthy one.
inline RootSelection select_root(const std::pair<cx, cx>& cand,
                                 const std::pair<cx, cx>& ref,
                                 double tie_factor = 0.5,
                                 double split_tol = 1e-6) {
  const auto dist = [&ref](cx z) {
    return std::min(std::abs(z - ref.first), std::abs(z - ref.second));
  };
  const double d1 = dist(cand.first);
  const double d2 = dist(cand.second);
  RootSelection sel;
  cx win = (d1 <= d2) ? cand.first : cand.second;
  sel.d_win = std::min(d1, d2);
  sel.d_runner = std::max(d1, d2);
  if (std::abs(cand.first - cand.second) <= split_tol) {
    sel.ambiguous = false;
  } else {
    sel.ambiguous = !(sel.d_runner > 0.0) || sel.d_win > tie_factor * sel.d_runner;
  }
  if (std::abs(ref.first - ref.second) > std::abs(cand.first - cand.second)) {
    win = (std::abs(win - ref.first) <= std::abs(win - ref.second)) ? ref.first
                                                                    : ref.second;
  }
  const double m = std::abs(win);
  sel.root = (m > 0.0) ? win / m : cx(1.0, 0.0);
  return sel;
}

/// c_n = (z * F_x - v_n(x)) / phi(x) once the phase z of f(n+x) is known.
inline cx recover_coefficient(cx z, double mag_nx, cx v_x, cx phi_x) {
  return (z * mag_nx - v_x) / phi_x;
}

/// Sign of C/A, the unique root of A z^2 - C z + A = 0 in {+1, -1}
/// (the two roots multiply to 1). Returns 0 when C vanishes; callers must
/// reject |A| ~ 0 before asking.
inline int sign_decode(double a_re, double c_re) {
  const double r = c_re / a_re;
  return (r > 0.0) ? 1 : (r < 0.0 ? -1 : 0);
}

enum class ReconMode { complex_path, real_path };
enum class ReconStatus { ok, degenerate_sample, ambiguous_root };

inline const char* to_string(ReconStatus s) {
  switch (s) {
    case ReconStatus::ok: return "ok";
    case ReconStatus::degenerate_sample: return "degenerate_sample";
    case ReconStatus::ambiguous_root: return "ambiguous_root";
  }
  return "?";
}

struct ReconOpts {
  /// Degeneracy threshold, relative to the local scale of each quantity.
  double degeneracy_tol = 1e-12;
  /// Root-match margin of select_root.
  double tie_factor = 0.5;
  /// Candidate separation below which a pair counts as a double root.
  double root_split_tol = 1e-6;
  /// Assigned phase of f(t_0) on the complex path.
  double initial_phase = 0.0;
  /// Assigned sign of f(t_0) on the real path.
  int initial_sign = 1;
};

/// Per-step diagnostics. Fields that do not apply to the active path stay NaN.
struct StepDiag {
  int n = 0;
  double abs_ab2 = std::numeric_limits<double>::quiet_NaN();  ///< |A+iB| of pair (t1,t2); |A| on the real path
  double abs_ab3 = std::numeric_limits<double>::quiet_NaN();  ///< |A+iB| of pair (t1,t3)
  double disc2 = std::numeric_limits<double>::quiet_NaN();
  double disc3 = std::numeric_limits<double>::quiet_NaN();
  double d_win = std::numeric_limits<double>::quiet_NaN();
  double d_runner = std::numeric_limits<double>::quiet_NaN();
  double root_product_err = std::numeric_limits<double>::quiet_NaN();  ///< real path: |z1*z2 - 1|
  cx selected_root;
};

struct ReconstructionResult {
  ReconStatus status = ReconStatus::ok;
  std::vector<cx> coeffs;       ///< recovered c_0.. (tail-trimmed on the full paths)
  std::vector<double> phases;   ///< decoded sample phases, design order
  std::vector<StepDiag> steps;
  int failed_step = -1;
  std::optional<CausalSignal> signal;  ///< populated when status == ok
};

namespace detail {

/// Solves min ||A x - b||_2 by Householder QR (complex, m >= n). Returns
/// false when R is numerically rank deficient.
inline bool lstsq(std::vector<std::vector<cx>> a, std::vector<cx> b,
                  std::vector<cx>& x, double rank_tol = 1e-12) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  if (m < n || n == 0) return false;
  std::vector<cx> v(m);
  for (std::size_t k = 0; k < n; ++k) {
    double nrm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) nrm2 += std::norm(a[i][k]);
    const double nrm = std::sqrt(nrm2);
    if (nrm == 0.0) return false;
    const cx akk = a[k][k];
    const cx alpha = (std::abs(akk) == 0.0) ? cx(-nrm, 0.0)
                                            : -(akk / std::abs(akk)) * nrm;
    v[k] = akk - alpha;
    for (std::size_t i = k + 1; i < m; ++i) v[i] = a[i][k];
    double vn2 = 0.0;
    for (std::size_t i = k; i < m; ++i) vn2 += std::norm(v[i]);
    if (vn2 == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      cx dot(0.0, 0.0);
      for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i]) * a[i][j];
      const cx factor = 2.0 * dot / vn2;
      for (std::size_t i = k; i < m; ++i) a[i][j] -= factor * v[i];
    }
    cx dot(0.0, 0.0);
    for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i]) * b[i];
    const cx factor = 2.0 * dot / vn2;
    for (std::size_t i = k; i < m; ++i) b[i] -= factor * v[i];
  }
  double rmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) rmax = std::max(rmax, std::abs(a[k][k]));
  x.assign(n, cx(0.0, 0.0));
  for (std::size_t k = n; k-- > 0;) {
    if (std::abs(a[k][k]) <= rank_tol * rmax) return false;
    cx acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= a[k][j] * x[j];
    x[k] = acc / a[k][k];
  }
  return true;
}

/// One decoded sample: magnitude from the measurement, phase from the
/// recursion. `assigned` marks the t_0 row whose phase is the global gauge.
/// `k0`/`weights` cache the nonzero generator values phi(location - k),
/// k = k0..k0+weights-1 (the row of the linear system, fixed by the design).
struct DecodedRow {
  int interval = 0;
  double location = 0.0;
  double magnitude = 0.0;
  cx unit{1.0, 0.0};
  bool assigned = false;
  int k0 = 0;
  std::vector<cx> weights;
};

/// Growing system of decoded samples: each row fixes
/// sum_k c_k phi(x_i - k) = unit_i * magnitude_i.
///
/// Re-solving it after every interval keeps the running coefficients at
/// solver accuracy; the per-interval recovery formula is algebraically
/// exact but compounds rounding through its division by phi, which grows
/// exponentially along the recursion (the system view does not). For the
/// same reason, row phases of the trailing intervals are re-decoded from
/// the refreshed coefficients while those coefficients are still settling
/// (a coefficient is pinned loosely by its first interval and tightens as
/// the next s-1 intervals arrive).
struct DecodedSystem {
  std::vector<DecodedRow> rows;

  void add(const Generator& gen, int interval, double location, double magnitude,
           cx unit, bool assigned = false) {
    DecodedRow r{interval, location, magnitude, unit, assigned, 0, {}};
    const int kf = static_cast<int>(std::floor(location));
    r.k0 = std::max(0, kf - gen.support_len());
    for (int k = r.k0; k <= kf + 1; ++k) r.weights.push_back(gen.eval(location - k));
    rows.push_back(std::move(r));
  }

  /// Signal estimate at a row's location under the given coefficients.
  static cx predict(const DecodedRow& r, std::span<const cx> coeffs) {
    cx w(0.0, 0.0);
    for (std::size_t j = 0; j < r.weights.size(); ++j) {
      const std::size_t k = static_cast<std::size_t>(r.k0) + j;
      if (k >= coeffs.size()) break;
      w += coeffs[k] * r.weights[j];
    }
    return w;
  }

  /// Re-decodes the phase of every non-gauge row against the current
  /// coefficient estimate.
  void refresh_phases(std::span<const cx> coeffs, bool real_mode) {
    for (DecodedRow& r : rows) {
      if (r.assigned) continue;
      const cx w = predict(r, coeffs);
      if (real_mode) {
        r.unit = cx(w.real() >= 0.0 ? 1.0 : -1.0, 0.0);
      } else {
        const double aw = std::abs(w);
        if (aw > 0.0) r.unit = w / aw;
      }
    }
  }

  /// Least-squares coefficients c_0..c_{count-1}; false on rank failure.
  bool solve(std::size_t count, std::vector<cx>& out) const {
    std::vector<std::vector<cx>> a(rows.size(), std::vector<cx>(count));
    std::vector<cx> b(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const DecodedRow& r = rows[i];
      for (std::size_t j = 0; j < r.weights.size(); ++j) {
        const std::size_t k = static_cast<std::size_t>(r.k0) + j;
        if (k < count) a[i][k] = r.weights[j];
      }
      b[i] = r.unit * r.magnitude;
    }
    return lstsq(std::move(a), std::move(b), out);
  }
};

/// Gauss-Newton settlement of the coefficients against the measured
/// magnitudes (the gauge row enters linearly and pins the global phase or
/// sign). The decoded phases seed the iteration and fix the branch; the
/// solve itself consumes only the exact magnitudes, so state errors do not
/// carry over from one interval to the next. Plain alternating re-decoding
/// stalls here: its contraction rate degrades to 1 wherever a phase
/// direction is nearly consistent with the range of the system, which for
/// chirp generators happens routinely.
inline bool magnitude_newton(const DecodedSystem& sys, bool real_mode,
                             std::vector<cx>& coeffs, int max_iter = 8) {
  const std::size_t m = coeffs.size();
  const std::size_t vars = real_mode ? m : 2 * m;
  std::vector<std::vector<cx>> jac;
  std::vector<cx> rhs;
  for (int iter = 0; iter < max_iter; ++iter) {
    jac.clear();
    rhs.clear();
    for (const DecodedRow& r : sys.rows) {
      const cx w = DecodedSystem::predict(r, coeffs);
      if (r.assigned) {
        // linear rows Re/Im( sum c_k W_k ) = Re/Im( unit * magnitude )
        std::vector<cx> row_re(vars, cx(0.0, 0.0)), row_im(vars, cx(0.0, 0.0));
        for (std::size_t j = 0; j < r.weights.size(); ++j) {
          const std::size_t k = static_cast<std::size_t>(r.k0) + j;
          if (k >= m) break;
          const cx wk = r.weights[j];
          row_re[k] = cx(wk.real(), 0.0);
          row_im[k] = cx(wk.imag(), 0.0);
          if (!real_mode) {
            row_re[m + k] = cx(-wk.imag(), 0.0);
            row_im[m + k] = cx(wk.real(), 0.0);
          }
        }
        const cx target = r.unit * r.magnitude;
        jac.push_back(std::move(row_re));
        rhs.emplace_back(-(w.real() - target.real()), 0.0);
        if (!real_mode) {
          jac.push_back(std::move(row_im));
          rhs.emplace_back(-(w.imag() - target.imag()), 0.0);
        }
        continue;
      }
      const double aw = std::abs(w);
      const cx u = (aw > 0.0) ? w / aw : cx(1.0, 0.0);
      std::vector<cx> row(vars, cx(0.0, 0.0));
      for (std::size_t j = 0; j < r.weights.size(); ++j) {
        const std::size_t k = static_cast<std::size_t>(r.k0) + j;
        if (k >= m) break;
        const cx uw = std::conj(u) * r.weights[j];
        row[k] = cx(uw.real(), 0.0);
        if (!real_mode) row[m + k] = cx(-uw.imag(), 0.0);
      }
      jac.push_back(std::move(row));
      rhs.emplace_back(-(aw - r.magnitude), 0.0);
    }
    std::vector<cx> delta;
    if (!lstsq(std::move(jac), std::move(rhs), delta)) return false;
    double step = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double dre = delta[k].real();
      const double dim = real_mode ? 0.0 : delta[m + k].real();
      coeffs[k] += cx(dre, dim);
      step = std::max(step, std::abs(cx(dre, dim)));
      scale = std::max(scale, std::abs(coeffs[k]));
    }
    if (step <= 1e-14 * std::max(scale, 1e-300)) break;
  }
  return true;
}

inline ReconstructionResult run_pdcr(const MagnitudeSamples& samples,
                                     const Generator& gen, const ReconOpts& opts,
                                     ReconMode mode, bool trim_tail) {
  const SampleDesign& d = samples.design;
  const int s = gen.support_len();
  const int n_max = d.n_max();
  const double phi_floor = opts.degeneracy_tol * gen.peak_abs();

  ReconstructionResult res;
  const auto fail = [&res](ReconStatus st, int step) {
    res.status = st;
    res.failed_step = step;
    return res;
  };

  double mag_scale = 0.0;
  for (double v : samples.values) mag_scale = std::max(mag_scale, std::abs(v));

  const cx phi0 = gen.eval(d.t0);
  if (std::abs(phi0) <= phi_floor) return fail(ReconStatus::degenerate_sample, 0);
  if (std::abs(samples.value0()) <= opts.degeneracy_tol * mag_scale) {
    return fail(ReconStatus::degenerate_sample, 0);
  }

  DecodedSystem system;
  if (mode == ReconMode::complex_path) {
    res.coeffs.push_back(std::polar(1.0, opts.initial_phase) * samples.value0() / phi0);
    system.add(gen, 0, d.t0, samples.value0(), std::polar(1.0, opts.initial_phase),
               true);
  } else {
    const double z0 = (opts.initial_sign >= 0) ? 1.0 : -1.0;
    res.coeffs.push_back(cx(z0 * samples.value0() / phi0.real(), 0.0));
    system.add(gen, 0, d.t0, samples.value0(), cx(z0, 0.0), true);
  }

  for (int n = 1; n <= n_max; ++n) {
    const double t1 = d.point(n, 0);
    const cx phi1 = gen.eval(t1);
    if (std::abs(phi1) <= phi_floor) return fail(ReconStatus::degenerate_sample, n);
    const double f1 = samples.value(n, 0);

    StepDiag diag;
    diag.n = n;
    cx z;

    if (mode == ReconMode::complex_path) {
      const double t2 = d.point(n, 1);
      const double t3 = d.point(n, 2);
      const QuadraticData q2 =
          quad_data(res.coeffs, gen, n, t1, t2, f1, samples.value(n, 1));
      const QuadraticData q3 =
          quad_data(res.coeffs, gen, n, t1, t3, f1, samples.value(n, 2));
      diag.abs_ab2 = std::abs(q2.ab);
      diag.abs_ab3 = std::abs(q3.ab);
      diag.disc2 = q2.c * q2.c - 4.0 * std::norm(q2.ab);
      diag.disc3 = q3.c * q3.c - 4.0 * std::norm(q3.ab);
      if (diag.abs_ab2 <= opts.degeneracy_tol * q2.ab_scale ||
          diag.abs_ab3 <= opts.degeneracy_tol * q3.ab_scale) {
        res.steps.push_back(diag);
        return fail(ReconStatus::ambiguous_root, n);
      }
      const RootSelection sel = select_root(solve_phase_quadratic(q2),
                                            solve_phase_quadratic(q3),
                                            opts.tie_factor, opts.root_split_tol);
      diag.d_win = sel.d_win;
      diag.d_runner = sel.d_runner;
      diag.selected_root = sel.root;
      if (sel.ambiguous) {
        res.steps.push_back(diag);
        return fail(ReconStatus::ambiguous_root, n);
      }
      z = sel.root;
    } else {
      const double t2 = d.point(n, 1);
      const RealQuadraticData q =
          quad_data_real(res.coeffs, gen, n, t1, t2, f1, samples.value(n, 1));
      diag.abs_ab2 = std::abs(q.a);
      diag.disc2 = q.c * q.c - 4.0 * q.a * q.a;
      if (std::abs(q.a) <= opts.degeneracy_tol * q.a_scale) {
        res.steps.push_back(diag);
        return fail(ReconStatus::ambiguous_root, n);
      }
      const cx sq = std::sqrt(cx(diag.disc2, 0.0));
      const cx r1 = (q.c + sq) / (2.0 * q.a);
      const cx r2 = (q.c - sq) / (2.0 * q.a);
      diag.root_product_err = std::abs(r1 * r2 - cx(1.0, 0.0));
      const int sign = sign_decode(q.a, q.c);
      if (sign == 0) {
        res.steps.push_back(diag);
        return fail(ReconStatus::ambiguous_root, n);
      }
      z = cx(static_cast<double>(sign), 0.0);
      diag.selected_root = z;
    }

    system.add(gen, n, n + t1, f1, z);

    // Refresh the coefficients (now including c_n) from the decoded system
    // before touching the remaining phases of this interval. The closed-form
    // c_n = (z f1 - v1)/phi(t1) is the same value in exact arithmetic, but
    // its division amplifies rounding wherever phi(t1) is small, and any
    // such error would be frozen into the decoded values below.
    const auto refresh = [&](std::size_t count) {
      std::vector<cx> refined;
      if (!system.solve(count, refined)) return false;
      if (mode == ReconMode::real_path) {
        for (cx& c : refined) c = cx(c.real(), 0.0);
      }
      res.coeffs = std::move(refined);
      return true;
    };
    if (!refresh(res.coeffs.size() + 1)) {
      return fail(ReconStatus::degenerate_sample, n);
    }

    for (int j = 1; j < d.density; ++j) {
      const double tj = d.point(n, j);
      const cx w = aux_v(res.coeffs, gen, n, tj) + res.coeffs[n] * gen.eval(tj);
      if (mode == ReconMode::real_path) {
        system.add(gen, n, n + tj, samples.value(n, j),
                   cx(w.real() >= 0.0 ? 1.0 : -1.0, 0.0));
      } else {
        const double aw = std::abs(w);
        system.add(gen, n, n + tj, samples.value(n, j),
                   (aw > 0.0) ? w / aw : cx(1.0, 0.0));
      }
    }
    // Settle the state on the measured magnitudes. The decode above fixed
    // the branch; the Newton step keeps the coefficient error at solver
    // level instead of letting it compound into later intervals.
    if (!magnitude_newton(system, mode == ReconMode::real_path, res.coeffs)) {
      return fail(ReconStatus::degenerate_sample, n);
    }
    system.refresh_phases(res.coeffs, mode == ReconMode::real_path);
    res.steps.push_back(diag);
  }

  res.phases.reserve(system.rows.size());
  for (const DecodedRow& r : system.rows) {
    res.phases.push_back(phase_of(r.unit * r.magnitude));
  }

  if (trim_tail) {
    const std::size_t keep =
        static_cast<std::size_t>(std::max(1, n_max + 1 - (s - 1)));
    if (res.coeffs.size() > keep) res.coeffs.resize(keep);
  }
  res.status = ReconStatus::ok;
  res.signal.emplace(gen, res.coeffs);
  return res;
}

}  // namespace detail

/// Full reconstruction from density-3 samples covering n = 1..N+s-1: the
/// result carries c_0..c_N, equal to the ground truth up to one global
/// unimodular factor (fixed by opts.initial_phase).
inline ReconstructionResult reconstruct_complex(const MagnitudeSamples& samples,
                                                const Generator& gen,
                                                const ReconOpts& opts = {}) {
  if (samples.design.density != 3) {
    throw std::invalid_argument("reconstruct_complex: density-3 samples required");
  }
  return detail::run_pdcr(samples, gen, opts, ReconMode::complex_path, true);
}

/// Real counterpart: density-2 samples, real generator, result determined
/// up to one global sign (fixed by opts.initial_sign).
inline ReconstructionResult reconstruct_real(const MagnitudeSamples& samples,
                                             const Generator& gen,
                                             const ReconOpts& opts = {}) {
  if (samples.design.density != 2) {
    throw std::invalid_argument("reconstruct_real: density-2 samples required");
  }
  if (gen.is_complex()) {
    throw std::invalid_argument("reconstruct_real: real generator required");
  }
  return detail::run_pdcr(samples, gen, opts, ReconMode::real_path, true);
}

/// Local reconstruction: samples covering n = 1..L-1 recover c_0..c_{L-1},
/// which determine f on [0, L]. No tail trimming.
inline ReconstructionResult reconstruct_local(const MagnitudeSamples& samples,
                                              const Generator& gen, ReconMode mode,
                                              const ReconOpts& opts = {}) {
  const int want = (mode == ReconMode::complex_path) ? 3 : 2;
  if (samples.design.density != want) {
    throw std::invalid_argument("reconstruct_local: sample density does not match mode");
  }
  if (mode == ReconMode::real_path && gen.is_complex()) {
    throw std::invalid_argument("reconstruct_local: real generator required");
  }
  return detail::run_pdcr(samples, gen, opts, mode, false);
}

}  // namespace pls
