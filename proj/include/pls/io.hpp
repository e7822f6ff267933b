#pragma once

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pls/ghc.hpp"
#include "pls/harness.hpp"
#include "pls/pdcr.hpp"
#include "pls/sampling.hpp"

namespace pls {

using json = nlohmann::ordered_json;

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << std::setprecision(17);
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

/// Splits one CSV line on commas; no quoting (none of our fields need it).
inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

inline double to_double(const std::string& s, const char* ctx) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string(ctx) + ": bad number '" + s + "'");
  }
}

}  // namespace detail

// -- coefficient vectors ----------------------------------------------------

inline void write_coeffs_csv(const std::filesystem::path& path, std::span<const cx> coeffs) {
  auto out = detail::open_out(path);
  out << "index,re,im\n";
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    out << k << ',' << coeffs[k].real() << ',' << coeffs[k].imag() << '\n';
  }
}

inline std::vector<cx> read_coeffs_csv(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::vector<cx> coeffs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("index", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    const auto f = detail::split_csv(line);
    if (f.size() != 3) throw std::runtime_error("coeffs csv: expected 3 columns");
    const auto idx = static_cast<std::size_t>(detail::to_double(f[0], "coeffs csv"));
    if (idx != coeffs.size()) throw std::runtime_error("coeffs csv: indices must be 0,1,2,...");
    coeffs.emplace_back(detail::to_double(f[1], "coeffs csv"),
                        detail::to_double(f[2], "coeffs csv"));
  }
  if (coeffs.empty()) throw std::runtime_error("coeffs csv: no rows");
  return coeffs;
}

// -- magnitude samples --------------------------------------------------------

/// Rows are "n,t,value": the single n = 0 row holds t_0, then each sampled
/// interval contributes density-many rows. Noise metadata travels in a JSON
/// sidecar (see samples_meta_json).
inline void write_samples_csv(const std::filesystem::path& path,
                              const MagnitudeSamples& samples) {
  auto out = detail::open_out(path);
  out << "n,t,value\n";
  out << 0 << ',' << samples.design.t0 << ',' << samples.values.at(0) << '\n';
  for (int n = 1; n <= samples.design.n_max(); ++n) {
    for (int j = 0; j < samples.design.density; ++j) {
      out << n << ',' << samples.design.point(n, j) << ',' << samples.value(n, j)
          << '\n';
    }
  }
}

inline json samples_meta_json(const MagnitudeSamples& samples) {
  json meta;
  meta["density"] = samples.design.density;
  meta["n_max"] = samples.design.n_max();
  if (samples.noise_meta) {
    meta["noise"] = {{"snr_db", samples.noise_meta->snr_db},
                     {"sigma2", samples.noise_meta->sigma2}};
  } else {
    meta["noise"] = nullptr;
  }
  return meta;
}

inline MagnitudeSamples read_samples_csv(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  std::string line;
  bool first = true;
  std::vector<int> ns;
  std::vector<double> ts, vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("n,", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    const auto f = detail::split_csv(line);
    if (f.size() != 3) throw std::runtime_error("samples csv: expected 3 columns");
    ns.push_back(static_cast<int>(detail::to_double(f[0], "samples csv")));
    ts.push_back(detail::to_double(f[1], "samples csv"));
    vals.push_back(detail::to_double(f[2], "samples csv"));
  }
  if (ns.empty() || ns.front() != 0) {
    throw std::runtime_error("samples csv: first row must be the n = 0 sample");
  }
  MagnitudeSamples s;
  s.design.t0 = ts[0];
  s.values.push_back(vals[0]);

  int density = 0;
  int expect_n = 1;
  std::size_t i = 1;
  while (i < ns.size()) {
    std::size_t j = i;
    while (j < ns.size() && ns[j] == expect_n) ++j;
    const int group = static_cast<int>(j - i);
    if (ns[i] != expect_n || group == 0) {
      throw std::runtime_error("samples csv: interval " + std::to_string(expect_n) +
                               " missing");
    }
    if (density == 0) {
      if (group != 2 && group != 3) {
        throw std::runtime_error("samples csv: sample density must be 2 or 3");
      }
      density = group;
    } else if (group != density) {
      throw std::runtime_error("samples csv: interval " + std::to_string(expect_n) +
                               " has inconsistent sample count");
    }
    for (std::size_t k = i; k < j; ++k) {
      if (!(ts[k] > 0.0 && ts[k] < 1.0)) {
        throw std::runtime_error("samples csv: offsets must lie strictly in (0,1)");
      }
      s.design.points.push_back(ts[k]);
      s.values.push_back(vals[k]);
    }
    ++expect_n;
    i = j;
  }
  if (density == 0) throw std::runtime_error("samples csv: no sampled intervals");
  s.design.density = density;
  return s;
}

// -- reports ------------------------------------------------------------------

inline void write_errors_csv(const std::filesystem::path& path,
                             std::span<const double> errors) {
  auto out = detail::open_out(path);
  out << "trial,error\n";
  for (std::size_t i = 0; i < errors.size(); ++i) out << i << ',' << errors[i] << '\n';
}

inline void write_cdf_csv(const std::filesystem::path& path,
                          std::span<const std::pair<double, double>> curve) {
  auto out = detail::open_out(path);
  out << "x,cdf\n";
  for (const auto& [x, y] : curve) out << x << ',' << y << '\n';
}

inline json ghc_report_json(const GhcReport& rep) {
  json j;
  j["verdict"] = rep.verdict == GhcVerdict::plausible ? "plausible" : "inconclusive";
  j["tuples_tested"] = rep.tuples_tested;
  j["max_abs_determinant"] = rep.max_abs_determinant;
  if (rep.passing_tuple) {
    j["passing_tuple"] = *rep.passing_tuple;
  } else {
    j["passing_tuple"] = nullptr;
  }
  return j;
}

inline json recon_result_json(const ReconstructionResult& res) {
  json j;
  j["status"] = to_string(res.status);
  j["failed_step"] = res.failed_step;
  j["coeff_count"] = res.coeffs.size();
  j["phases"] = res.phases;
  json steps = json::array();
  for (const StepDiag& sd : res.steps) {
    json e;
    e["n"] = sd.n;
    e["abs_ab2"] = sd.abs_ab2;
    if (!std::isnan(sd.abs_ab3)) e["abs_ab3"] = sd.abs_ab3;
    e["disc2"] = sd.disc2;
    if (!std::isnan(sd.disc3)) e["disc3"] = sd.disc3;
    if (!std::isnan(sd.d_win)) {
      e["d_win"] = sd.d_win;
      e["d_runner"] = sd.d_runner;
    }
    if (!std::isnan(sd.root_product_err)) e["root_product_err"] = sd.root_product_err;
    e["root"] = {sd.selected_root.real(), sd.selected_root.imag()};
    steps.push_back(std::move(e));
  }
  j["steps"] = std::move(steps);
  return j;
}

/// Report body for one Monte Carlo run. Wall-clock time is intentionally
/// not serialized so that equal-seed reruns emit byte-identical files.
inline json trial_report_json(const TrialReport& rep) {
  json j;
  j["trials"] = rep.trials;
  j["threshold"] = rep.threshold;
  j["success_rate"] = rep.success_rate;
  json d;
  d["failures_degenerate"] = rep.diag.failures_degenerate;
  d["failures_ambiguous"] = rep.diag.failures_ambiguous;
  d["steps_total"] = rep.diag.steps_total;
  d["steps_ab_below_1e12"] = rep.diag.steps_ab_below_1e12;
  d["min_abs_ab"] = std::isfinite(rep.diag.min_abs_ab) ? rep.diag.min_abs_ab : 0.0;
  d["max_root_product_err"] = rep.diag.max_root_product_err;
  d["max_resynth_rel"] = rep.diag.max_resynth_rel;
  j["diagnostics"] = std::move(d);
  return j;
}

}  // namespace pls
