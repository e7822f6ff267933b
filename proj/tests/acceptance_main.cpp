// Acceptance suite: runs the protocol-level checks end to end and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pls/ghc.hpp"
#include "pls/harness.hpp"
#include "pls/metrics.hpp"
#include "pls/pdcr.hpp"
#include "pls/sampling.hpp"
#include "pls/signal.hpp"
#include "pls/system.hpp"

using pls::CausalSignal;
using pls::cx;
using pls::Generator;
using pls::ReconMode;
using pls::TrialConfig;
using pls::TrialReport;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& text) {
  std::printf("%s  criterion %2d: %s\n", pass ? "PASS" : "FAIL", idx, text.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

constexpr std::uint64_t kSeed = 20250809;

TrialConfig complex_protocol(double a) {
  TrialConfig cfg;
  cfg.gen = Generator::chirp(a, 0.8, 1.0);
  cfg.mode = ReconMode::complex_path;
  cfg.coeff_count = 16;  // n_max = 18, 55 samples
  cfg.trials = 1000;
  cfg.master_seed = kSeed;
  return cfg;
}

TrialConfig real_protocol(double a) {
  TrialConfig cfg;
  cfg.gen = Generator::chirp_real_part(a, -0.238, 1.0);
  cfg.mode = ReconMode::real_path;
  cfg.coeff_count = 21;  // n_max = 23, 47 samples
  cfg.trials = 1000;
  cfg.master_seed = kSeed;
  return cfg;
}

}  // namespace

int main() {
  std::vector<TrialReport> noiseless_reports;  // feeds criteria 7 and 10

  // 1. noiseless complex reconstruction, success at threshold -6
  {
    const auto start = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    for (double a : {4.0, 50.0}) {
      TrialConfig cfg = complex_protocol(a);
      cfg.success_threshold = -6.0;
      const TrialReport rep = pls::run_trials(cfg);
      noiseless_reports.push_back(rep);
      pass = pass && rep.success_rate >= 0.99;
      detail += "a=" + fmt(a) + ": " + fmt(rep.success_rate) + "  ";
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    pass = pass && secs < 60.0;
    report(1, pass,
           "noiseless complex success_rate >= 0.99 at -6  [" + detail + "in " +
               fmt(secs) + " s]");
  }

  // 2. noiseless real reconstruction
  {
    bool pass = true;
    std::string detail;
    for (double a : {10.0, 50.0}) {
      TrialConfig cfg = real_protocol(a);
      cfg.success_threshold = -6.0;
      const TrialReport rep = pls::run_trials(cfg);
      noiseless_reports.push_back(rep);
      pass = pass && rep.success_rate >= 0.99;
      detail += "a=" + fmt(a) + ": " + fmt(rep.success_rate) + "  ";
    }
    report(2, pass, "noiseless real success_rate >= 0.99 at -6  [" + detail + "]");
  }

  // 3. noisy complex sweep: pinned cells and monotonicity
  {
    const std::vector<double> snrs = {50, 60, 70, 80, 90, 100, 110, 120, 130};
    double rate_4_130 = 0.0, rate_50_90 = 0.0;
    bool monotone = true;
    std::string rows;
    for (double a : {4.0, 50.0}) {
      TrialConfig cfg = complex_protocol(a);
      cfg.success_threshold = -1.8;
      const auto sweep = pls::snr_sweep(cfg, snrs);
      rows += "a=" + fmt(a) + ": ";
      for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
        const double r = sweep.reports[i].success_rate;
        rows += fmt(r) + " ";
        if (i > 0 && r < sweep.reports[i - 1].success_rate - 0.05) monotone = false;
        if (a == 4.0 && snrs[i] == 130.0) rate_4_130 = r;
        if (a == 50.0 && snrs[i] == 90.0) rate_50_90 = r;
      }
      rows += " ";
    }
    const bool cell_a = std::abs(rate_4_130 - 0.997) <= 0.05;
    const bool cell_b = std::abs(rate_50_90 - 0.733) <= 0.07;
    report(3, cell_a && cell_b && monotone,
           "noisy complex sweep: (a=4,130dB)=" + fmt(rate_4_130) +
               " vs 0.997+-0.05, (a=50,90dB)=" + fmt(rate_50_90) +
               " vs 0.733+-0.07, monotone within 0.05  [" + rows + "]");
  }

  // 4. noisy real cells
  {
    TrialConfig cfg10 = real_protocol(10.0);
    cfg10.success_threshold = -1.8;
    cfg10.snr_db = 120.0;
    const double r10 = pls::run_trials(cfg10).success_rate;

    TrialConfig cfg50 = real_protocol(50.0);
    cfg50.success_threshold = -1.8;
    cfg50.snr_db = 80.0;
    const double r50 = pls::run_trials(cfg50).success_rate;

    report(4, std::abs(r10 - 0.996) <= 0.05 && std::abs(r50 - 0.674) <= 0.07,
           "noisy real cells: (a=10,120dB)=" + fmt(r10) +
               " vs 0.996+-0.05, (a=50,80dB)=" + fmt(r50) + " vs 0.674+-0.07");
  }

  // 5. local reconstruction of the two-coefficient restriction from 3 samples
  {
    bool pass = true;
    std::string detail;
    const struct {
      double a;
      cx c0, c1;
    } cases[] = {{10.0, cx(0.7064, 0.0), cx(-0.6183, 0.0)},
                 {50.0, cx(-0.5874, 0.0), cx(0.2659, 0.0)}};
    for (const auto& tc : cases) {
      TrialConfig cfg;
      cfg.gen = Generator::chirp_real_part(tc.a, -0.238, 1.0);
      cfg.mode = ReconMode::real_path;
      cfg.fixed_coeffs = std::vector<cx>{tc.c0, tc.c1};
      cfg.trials = 1000;
      cfg.n_max = 1;  // 1 + 2 = 3 samples
      cfg.success_threshold = -6.0;
      cfg.master_seed = kSeed;
      const TrialReport rep = pls::run_trials(cfg);
      noiseless_reports.push_back(rep);
      pass = pass && rep.success_rate >= 0.99;
      detail += "a=" + fmt(tc.a) + ": " + fmt(rep.success_rate) + "  ";
    }
    report(5, pass, "local recovery from 3 samples, success >= 0.99  [" + detail + "]");
  }

  // 6. magnitude-equal but inequivalent pair
  {
    const auto [f, ft] = pls::ambiguous_pair(Generator::cubic_bspline(), 1.0, 0.0, 2);
    double max_gap = 0.0;
    const double span = 2 + 4;
    for (int i = 0; i < 10000; ++i) {
      const double x = span * (i + 0.5) / 10000.0;
      max_gap = std::max(max_gap, std::abs(std::abs(pls::evaluate(f, x)) -
                                           std::abs(pls::evaluate(ft, x))));
    }
    double residual = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 10000; ++i) {  // theta-grid alignment search
      const double theta = 2.0 * pls::pi * i / 10000.0;
      const cx rot = std::polar(1.0, theta);
      double acc = 0.0, nc = 0.0;
      for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
        acc += std::norm(f.coeffs()[k] - rot * ft.coeffs()[k]);
        nc += std::norm(f.coeffs()[k]);
      }
      residual = std::min(residual, std::sqrt(acc / nc));
    }
    report(6, max_gap < 1e-12 && residual > 0.1,
           "ambiguous pair: max |mag gap| = " + fmt(max_gap) +
               " < 1e-12, alignment residual = " + fmt(residual) + " > 0.1");
  }

  // 7. probability-1 claims at desk scale: random designs on fixed signals
  {
    pls::RngStream coeff_rng(kSeed + 1);
    TrialConfig cfg;
    cfg.gen = Generator::chirp(50.0, 0.8, 1.0);
    cfg.mode = ReconMode::complex_path;
    cfg.fixed_coeffs = pls::draw_complex_coeffs(16, coeff_rng);
    cfg.trials = 600;  // 600 x 18 steps > 1e4
    cfg.master_seed = kSeed + 2;
    const TrialReport rc = pls::run_trials(cfg);

    TrialConfig rcfg;
    rcfg.gen = Generator::chirp_real_part(50.0, -0.238, 1.0);
    rcfg.mode = ReconMode::real_path;
    rcfg.fixed_coeffs = pls::draw_real_coeffs(21, coeff_rng);
    rcfg.trials = 500;  // 500 x 23 steps > 1e4
    rcfg.master_seed = kSeed + 3;
    const TrialReport rr = pls::run_trials(rcfg);

    std::size_t ab_below = rc.diag.steps_ab_below_1e12 + rr.diag.steps_ab_below_1e12;
    std::size_t ambiguous = rc.diag.failures_ambiguous + rr.diag.failures_ambiguous;
    for (const TrialReport& rep : noiseless_reports) {
      ab_below += rep.diag.steps_ab_below_1e12;
      ambiguous += rep.diag.failures_ambiguous;
    }
    const bool pass = ab_below == 0 && ambiguous == 0 &&
                      rr.diag.max_root_product_err < 1e-9 &&
                      rc.diag.steps_total + rr.diag.steps_total >= 20000;
    report(7, pass,
           "over " + std::to_string(rc.diag.steps_total + rr.diag.steps_total) +
               " fixed-signal steps (plus protocol runs): |A+iB|<1e-12 count = " +
               std::to_string(ab_below) + ", ambiguous = " + std::to_string(ambiguous) +
               ", max |z1*z2 - 1| = " + fmt(rr.diag.max_root_product_err));
  }

  // 8. global-phase equivariance of roots and coefficients
  {
    const Generator gen = Generator::chirp(4.0, 0.8, 1.0);
    double worst_root = 0.0, worst_coeff = 0.0;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      pls::RngStream rng(kSeed + 10 + seed);
      const CausalSignal f(gen, pls::draw_complex_coeffs(16, rng));
      const auto design = pls::detail::draw_design_for(f, 3, 18, rng);
      const auto samples = pls::measure(f, design);
      const double theta = 2.0 * pls::pi * 0.31 * (seed + 1);
      pls::ReconOpts base, rotated;
      rotated.initial_phase = theta;
      const auto r0 = pls::reconstruct_complex(samples, gen, base);
      const auto r1 = pls::reconstruct_complex(samples, gen, rotated);
      if (r0.status != pls::ReconStatus::ok || r1.status != pls::ReconStatus::ok) {
        worst_root = worst_coeff = 1.0;
        break;
      }
      const cx rot = std::polar(1.0, theta);
      for (std::size_t i = 0; i < r0.steps.size(); ++i) {
        worst_root = std::max(worst_root,
                              std::abs(r1.steps[i].selected_root -
                                       rot * r0.steps[i].selected_root));
      }
      for (std::size_t k = 0; k < r0.coeffs.size(); ++k) {
        worst_coeff = std::max(worst_coeff,
                               std::abs(r1.coeffs[k] - rot * r0.coeffs[k]));
      }
    }
    report(8, worst_root < 1e-9 && worst_coeff < 1e-9,
           "phase equivariance over 25 paired runs: max root dev = " + fmt(worst_root) +
               ", max coeff dev = " + fmt(worst_coeff) + " (tol 1e-9)");
  }

  // 9. GHC certification of the protocol generators
  {
    const auto xi4 = pls::check_ghc(
        pls::build_system(Generator::chirp(4.0, 0.8, 1.0), pls::SystemLabel::xi_phi),
        100, kSeed, 1e-10);
    const auto xi50 = pls::check_ghc(
        pls::build_system(Generator::chirp(50.0, 0.8, 1.0), pls::SystemLabel::xi_phi),
        100, kSeed, 1e-10);
    const auto spline = pls::check_ghc(
        pls::build_system(Generator::cubic_bspline(), pls::SystemLabel::lambda_varphi),
        100, kSeed, 1e-10);
    const bool pass = xi4.verdict == pls::GhcVerdict::plausible &&
                      xi50.verdict == pls::GhcVerdict::plausible &&
                      spline.verdict == pls::GhcVerdict::plausible;
    report(9, pass,
           "GHC plausible within 100 tuples: chirp a=4 (" +
               std::to_string(xi4.tuples_tested) + "), a=50 (" +
               std::to_string(xi50.tuples_tested) + "), B-spline (" +
               std::to_string(spline.tuples_tested) + ")");
  }

  // 10. consistency: re-synthesis reproduces the noiseless inputs
  {
    double worst = 0.0;
    for (const TrialReport& rep : noiseless_reports) {
      worst = std::max(worst, rep.diag.max_resynth_rel);
    }
    report(10, worst <= 1e-8,
           "resynthesis consistency over all noiseless protocol runs: max rel = " +
               fmt(worst) + " <= 1e-8");
  }

  std::printf("%s (%d criteria failed)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              g_failures);
  return g_failures;
}
