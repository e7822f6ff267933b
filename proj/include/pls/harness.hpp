#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pls/generator.hpp"
#include "pls/metrics.hpp"
#include "pls/pdcr.hpp"
#include "pls/sampling.hpp"
#include "pls/signal.hpp"

namespace pls {

/// One Monte Carlo experiment: `trials` independent draws of (coefficients,
/// design, noise), each reconstructed and scored with the mode's alignment
/// error. Trial k consumes RngStream(master_seed, k), so runs are
/// reproducible and independent of the worker-thread count.
struct TrialConfig {
  Generator gen = Generator::chirp(4.0, 0.8, 1.0);
  ReconMode mode = ReconMode::complex_path;
  /// Fixed ground truth; when absent, each trial draws `coeff_count`
  /// random coefficients (complex: uniform on the unit disk; real: uniform
  /// on [-1,1] with |c_0| >= 0.1).
  std::optional<std::vector<cx>> fixed_coeffs;
  std::size_t coeff_count = 16;
  std::size_t trials = 1000;
  /// Last sampled unit interval; -1 means N + s - 1 (full reconstruction).
  /// Anything smaller runs local reconstruction of the prefix c_0..c_n_max.
  int n_max = -1;
  std::optional<double> snr_db;  ///< absent = noiseless
  double success_threshold = -1.8;
  std::uint64_t master_seed = 0;
  int jobs = 0;  ///< worker threads; 0 = hardware concurrency
};

struct TrialDiagnostics {
  std::size_t failures_degenerate = 0;
  std::size_t failures_ambiguous = 0;
  std::size_t steps_total = 0;
  /// Steps whose |A+iB| (|A| on the real path) fell below 1e-12 absolute.
  std::size_t steps_ab_below_1e12 = 0;
  double min_abs_ab = std::numeric_limits<double>::infinity();
  double max_root_product_err = 0.0;  ///< real path, noiseless quadratics
  /// Worst re-synthesis mismatch of successful reconstructions against the
  /// noiseless input magnitudes, relative to the design's magnitude scale.
  /// Tracked for noiseless runs only.
  double max_resynth_rel = 0.0;
};

struct TrialReport {
  std::vector<double> errors;  ///< per trial, trial order
  double success_rate = 0.0;
  double threshold = -1.8;
  std::size_t trials = 0;
  double wall_ms = 0.0;
  TrialDiagnostics diag;

  /// Plot-ready empirical CDF: (x, fraction of errors <= x) at each sorted error.
  std::vector<std::pair<double, double>> cdf_curve() const {
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, double>> curve;
    curve.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      curve.emplace_back(sorted[i],
                         static_cast<double>(i + 1) / static_cast<double>(sorted.size()));
    }
    return curve;
  }
};

/// Coefficients uniform on the complex unit disk.
inline std::vector<cx> draw_complex_coeffs(std::size_t count, RngStream& rng) {
  std::vector<cx> c(count);
  for (auto& v : c) {
    for (;;) {
      const double re = 2.0 * rng.uniform_open01() - 1.0;
      const double im = 2.0 * rng.uniform_open01() - 1.0;
      if (re * re + im * im <= 1.0 && (re != 0.0 || im != 0.0)) {
        v = cx(re, im);
        break;
      }
    }
  }
  return c;
}

/// Coefficients uniform on [-1, 1]; c_0 redrawn until |c_0| >= 0.1.
inline std::vector<cx> draw_real_coeffs(std::size_t count, RngStream& rng) {
  std::vector<cx> c(count);
  for (std::size_t k = 0; k < count; ++k) {
    double v = 2.0 * rng.uniform_open01() - 1.0;
    if (k == 0) {
      while (std::abs(v) < 0.1) v = 2.0 * rng.uniform_open01() - 1.0;
    }
    c[k] = cx(v, 0.0);
  }
  return c;
}

namespace detail {

/// Draws a design for a known signal, redrawing any point that lands on a
/// floating-point-degenerate spot (|phi| or the noiseless |f| below
/// tol * scale). Such spots have probability zero in exact arithmetic.
inline SampleDesign draw_design_for(const CausalSignal& f, int density, int n_max,
                                    RngStream& rng, double tol = 1e-12) {
  const Generator& g = f.generator();
  const double phi_floor = tol * g.peak_abs();
  const double f_floor = tol * l2_norm(f.coeffs()) * g.peak_abs();
  const auto admissible = [&](double base, double t) {
    return std::abs(g.eval(t)) > phi_floor &&
           std::abs(evaluate(f, base + t)) > f_floor;
  };
  const auto draw_one = [&](double base) {
    for (int tries = 0; tries < 10000; ++tries) {
      const double t = rng.uniform_open01();
      if (admissible(base, t)) return t;
    }
    throw std::runtime_error("draw_design_for: could not find an admissible point");
  };

  SampleDesign d;
  d.density = density;
  d.t0 = draw_one(0.0);
  d.points.resize(static_cast<std::size_t>(n_max) * density);
  for (int n = 1; n <= n_max; ++n) {
    for (int j = 0; j < density; ++j) {
      d.points[static_cast<std::size_t>(n - 1) * density + j] =
          draw_one(static_cast<double>(n));
    }
  }
  return d;
}

struct TrialOutcome {
  double error = 0.0;
  ReconStatus status = ReconStatus::ok;
  double min_abs_ab = std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  std::size_t ab_below = 0;
  double max_rpe = 0.0;
  double resynth_rel = 0.0;
};

inline TrialOutcome run_one_trial(const TrialConfig& cfg, std::size_t trial) {
  RngStream rng(cfg.master_seed, trial);
  const int s = cfg.gen.support_len();
  const bool real_mode = cfg.mode == ReconMode::real_path;
  const int density = real_mode ? 2 : 3;

  std::vector<cx> truth =
      cfg.fixed_coeffs ? *cfg.fixed_coeffs
                       : (real_mode ? draw_real_coeffs(cfg.coeff_count, rng)
                                    : draw_complex_coeffs(cfg.coeff_count, rng));
  const CausalSignal f(cfg.gen, truth);
  const int n_full = f.max_index() + s - 1;
  const int n_max = (cfg.n_max < 0) ? n_full : cfg.n_max;
  const bool local = n_max < n_full;

  const SampleDesign design = draw_design_for(f, density, n_max, rng);
  const MagnitudeSamples clean = measure(f, design);
  const MagnitudeSamples& input =
      cfg.snr_db ? add_noise(clean, *cfg.snr_db, rng) : clean;
  MagnitudeSamples noisy_storage;
  const MagnitudeSamples* in_ptr = &clean;
  if (cfg.snr_db) {
    noisy_storage = input;  // keep `clean` alive alongside the noisy copy
    in_ptr = &noisy_storage;
  }

  ReconstructionResult rec;
  if (local) {
    rec = reconstruct_local(*in_ptr, cfg.gen, cfg.mode);
  } else {
    rec = real_mode ? reconstruct_real(*in_ptr, cfg.gen)
                    : reconstruct_complex(*in_ptr, cfg.gen);
  }

  TrialOutcome out;
  out.status = rec.status;
  out.steps = rec.steps.size();
  for (const StepDiag& sd : rec.steps) {
    double ab = sd.abs_ab2;
    if (!real_mode) ab = std::min(ab, sd.abs_ab3);
    out.min_abs_ab = std::min(out.min_abs_ab, ab);
    if (ab < 1e-12) ++out.ab_below;
    if (real_mode && !std::isnan(sd.root_product_err)) {
      out.max_rpe = std::max(out.max_rpe, sd.root_product_err);
    }
  }
  if (rec.status != ReconStatus::ok) {
    out.error = 0.0;  // total failure under the relative-error metric
    return out;
  }

  std::span<const cx> cmp(truth.data(), local ? static_cast<std::size_t>(n_max) + 1
                                              : truth.size());
  out.error = real_mode ? error_real(cmp, rec.coeffs) : error_complex(cmp, rec.coeffs);

  if (!cfg.snr_db) {
    const MagnitudeSamples resynth = measure(*rec.signal, design);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < clean.values.size(); ++i) {
      num = std::max(num, std::abs(resynth.values[i] - clean.values[i]));
      den = std::max(den, clean.values[i]);
    }
    out.resynth_rel = (den > 0.0) ? num / den : 0.0;
  }
  return out;
}

}  // namespace detail

inline TrialReport run_trials(const TrialConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  if (cfg.fixed_coeffs) {
    const CausalSignal probe(cfg.gen, *cfg.fixed_coeffs);  // validates c_0 != 0
    const int n_full = probe.max_index() + cfg.gen.support_len() - 1;
    if (cfg.n_max > n_full) {
      throw std::invalid_argument("run_trials: n_max exceeds N + s - 1");
    }
  } else {
    if (cfg.coeff_count < 1) throw std::invalid_argument("run_trials: coeff_count must be >= 1");
    const int n_full = static_cast<int>(cfg.coeff_count) - 1 + cfg.gen.support_len() - 1;
    if (cfg.n_max > n_full) {
      throw std::invalid_argument("run_trials: n_max exceeds N + s - 1");
    }
  }
  if (cfg.mode == ReconMode::real_path && cfg.gen.is_complex()) {
    throw std::invalid_argument("run_trials: real mode requires a real generator");
  }

  const auto start = std::chrono::steady_clock::now();
  std::vector<detail::TrialOutcome> outcomes(cfg.trials);

  unsigned jobs = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                               : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, cfg.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.trials) return;
      try {
        outcomes[i] = detail::run_one_trial(cfg, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  TrialReport rep;
  rep.trials = cfg.trials;
  rep.threshold = cfg.success_threshold;
  rep.errors.reserve(cfg.trials);
  std::size_t ok = 0;
  for (const auto& o : outcomes) {
    rep.errors.push_back(o.error);
    if (o.error <= cfg.success_threshold) ++ok;
    if (o.status == ReconStatus::degenerate_sample) ++rep.diag.failures_degenerate;
    if (o.status == ReconStatus::ambiguous_root) ++rep.diag.failures_ambiguous;
    rep.diag.steps_total += o.steps;
    rep.diag.steps_ab_below_1e12 += o.ab_below;
    rep.diag.min_abs_ab = std::min(rep.diag.min_abs_ab, o.min_abs_ab);
    rep.diag.max_root_product_err = std::max(rep.diag.max_root_product_err, o.max_rpe);
    rep.diag.max_resynth_rel = std::max(rep.diag.max_resynth_rel, o.resynth_rel);
  }
  rep.success_rate = static_cast<double>(ok) / static_cast<double>(cfg.trials);
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rep;
}

struct SweepResult {
  std::vector<double> snrs;
  std::vector<TrialReport> reports;
};

/// Runs run_trials once per SNR. The master seed is shared across columns
/// (common random numbers), which keeps the success-rate curve smooth.
inline SweepResult snr_sweep(const TrialConfig& cfg, std::span<const double> snr_list) {
  SweepResult out;
  for (double snr : snr_list) {
    TrialConfig c = cfg;
    c.snr_db = snr;
    out.snrs.push_back(snr);
    out.reports.push_back(run_trials(c));
  }
  return out;
}

}  // namespace pls
