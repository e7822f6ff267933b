// Command-line front end: binds JSON run configs to the library.
//
// Subcommands: check-ghc | reconstruct | montecarlo | ambiguity-demo.
// Exit codes: 0 success, 1 input error, 2 inconclusive certification,
// 3 reconstruction failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pls/ghc.hpp"
#include "pls/harness.hpp"
#include "pls/io.hpp"
#include "pls/metrics.hpp"
#include "pls/pdcr.hpp"
#include "pls/sampling.hpp"
#include "pls/signal.hpp"
#include "pls/system.hpp"

namespace fs = std::filesystem;
using pls::cx;
using json = nlohmann::ordered_json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::string out = ".";
  int jobs = 0;
  std::optional<std::uint64_t> seed;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& ctx) {
  if (!obj.is_object()) throw ConfigError(ctx + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown key '" + it.key() + "' in " + ctx);
    }
  }
}

double need_number(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ConfigError(ctx + ": numeric '" + key + "' required");
  }
  return obj[key].get<double>();
}

pls::Generator generator_from_json(const json& g) {
  require_keys(g, {"kind", "a", "b", "p", "support", "values", "modulation", "label"},
               "generator");
  if (!g.contains("kind") || !g["kind"].is_string()) {
    throw ConfigError("generator: 'kind' required");
  }
  const std::string kind = g["kind"].get<std::string>();
  pls::Generator gen = pls::Generator::cubic_bspline();
  if (kind == "chirp" || kind == "chirp_real_part") {
    const double a = need_number(g, "a", "generator");
    const double b = need_number(g, "b", "generator");
    const double p = need_number(g, "p", "generator");
    if (g.contains("support") && g["support"].get<int>() != 4) {
      throw ConfigError("generator: the chirp family has support 4");
    }
    try {
      gen = (kind == "chirp") ? pls::Generator::chirp(a, b, p)
                              : pls::Generator::chirp_real_part(a, b, p);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("generator: ") + e.what());
    }
  } else if (kind == "cubic_bspline") {
    gen = pls::Generator::cubic_bspline();
  } else if (kind == "tabulated") {
    if (!g.contains("support") || !g.contains("values") || !g["values"].is_array()) {
      throw ConfigError("generator: tabulated needs 'support' and 'values'");
    }
    std::vector<cx> values;
    for (const auto& v : g["values"]) {
      if (v.is_number()) {
        values.emplace_back(v.get<double>(), 0.0);
      } else if (v.is_array() && v.size() == 2) {
        values.emplace_back(v[0].get<double>(), v[1].get<double>());
      } else {
        throw ConfigError("generator: values must be numbers or [re, im] pairs");
      }
    }
    try {
      gen = pls::Generator::tabulated(std::move(values), g["support"].get<int>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("generator: ") + e.what());
    }
  } else {
    throw ConfigError("generator: unknown kind '" + kind + "'");
  }
  if (g.contains("modulation")) gen = gen.modulated(g["modulation"].get<double>());
  return gen;
}

std::string generator_label(const json& g) {
  if (g.contains("label")) return g["label"].get<std::string>();
  std::string label = g["kind"].get<std::string>();
  if (g.contains("a")) label += " a=" + std::to_string(g["a"].get<double>());
  return label;
}

pls::ReconMode mode_from_json(const json& cfg, const std::string& ctx) {
  if (!cfg.contains("mode") || !cfg["mode"].is_string()) {
    throw ConfigError(ctx + ": 'mode' must be \"complex\" or \"real\"");
  }
  const std::string m = cfg["mode"].get<std::string>();
  if (m == "complex") return pls::ReconMode::complex_path;
  if (m == "real") return pls::ReconMode::real_path;
  throw ConfigError(ctx + ": 'mode' must be \"complex\" or \"real\"");
}

fs::path prepare_out_dir(const Common& c) {
  const fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// -- check-ghc ---------------------------------------------------------------

int cmd_check_ghc(const Common& c) {
  const json cfg = load_config(c.config);
  require_keys(cfg, {"generator", "system", "tuples", "tol"}, "check-ghc config");
  if (!cfg.contains("generator") || !cfg.contains("system")) {
    throw ConfigError("check-ghc config needs 'generator' and 'system'");
  }
  const pls::Generator gen = generator_from_json(cfg["generator"]);
  const std::string label = cfg["system"].get<std::string>();
  pls::SystemLabel sys_label;
  if (label == "xi_phi") sys_label = pls::SystemLabel::xi_phi;
  else if (label == "lambda_phi_1") sys_label = pls::SystemLabel::lambda_phi_1;
  else if (label == "lambda_phi_2") sys_label = pls::SystemLabel::lambda_phi_2;
  else if (label == "lambda_varphi") sys_label = pls::SystemLabel::lambda_varphi;
  else throw ConfigError("check-ghc: unknown system '" + label + "'");

  const int tuples = cfg.contains("tuples") ? cfg["tuples"].get<int>() : 100;
  const double tol = cfg.contains("tol") ? cfg["tol"].get<double>() : 1e-10;
  pls::FunctionSystem sys;
  try {
    sys = pls::build_system(gen, sys_label);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto rep = pls::check_ghc(sys, tuples, c.seed.value_or(1), tol);

  json out = pls::ghc_report_json(rep);
  out["generator"] = cfg["generator"];
  out["system"] = label;
  out["tol"] = tol;
  write_json_file(prepare_out_dir(c) / "ghc_report.json", out);
  std::cerr << "check-ghc: " << (rep.verdict == pls::GhcVerdict::plausible
                                     ? "plausible"
                                     : "inconclusive")
            << " after " << rep.tuples_tested << " tuples\n";
  return rep.verdict == pls::GhcVerdict::plausible ? 0 : 2;
}

// -- reconstruct ---------------------------------------------------------------

int cmd_reconstruct(const Common& c) {
  const json cfg = load_config(c.config);
  require_keys(cfg,
               {"generator", "mode", "truth_csv", "samples_csv", "n_max", "snr_db",
                "local"},
               "reconstruct config");
  if (!cfg.contains("generator")) throw ConfigError("reconstruct: 'generator' required");
  const pls::Generator gen = generator_from_json(cfg["generator"]);
  const pls::ReconMode mode = mode_from_json(cfg, "reconstruct");
  const bool has_truth = cfg.contains("truth_csv");
  const bool has_samples = cfg.contains("samples_csv");
  if (has_truth == has_samples) {
    throw ConfigError("reconstruct: exactly one of 'truth_csv' or 'samples_csv'");
  }
  const fs::path out_dir = prepare_out_dir(c);
  const int s = gen.support_len();
  const int density = (mode == pls::ReconMode::complex_path) ? 3 : 2;

  pls::MagnitudeSamples samples;
  std::optional<std::vector<cx>> truth;
  std::optional<pls::MagnitudeSamples> clean;
  bool local = cfg.contains("local") && cfg["local"].get<bool>();

  if (has_truth) {
    std::vector<cx> coeffs;
    try {
      coeffs = pls::read_coeffs_csv(cfg["truth_csv"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    pls::RngStream rng(c.seed.value_or(1));
    try {
      const pls::CausalSignal f(gen, coeffs);
      const int n_full = f.max_index() + s - 1;
      const int n_max = cfg.contains("n_max") ? cfg["n_max"].get<int>() : n_full;
      if (n_max < 0 || n_max > n_full) {
        throw ConfigError("reconstruct: n_max must lie in [0, N + s - 1]");
      }
      local = local || n_max < n_full;
      const pls::SampleDesign design =
          pls::detail::draw_design_for(f, density, n_max, rng);
      clean = pls::measure(f, design);
      samples = *clean;
      if (cfg.contains("snr_db")) {
        samples = pls::add_noise(*clean, cfg["snr_db"].get<double>(), rng);
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    truth = std::move(coeffs);
  } else {
    try {
      samples = pls::read_samples_csv(cfg["samples_csv"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    if (samples.design.density != density) {
      throw ConfigError("reconstruct: sample density does not match the mode");
    }
  }

  pls::ReconstructionResult res;
  try {
    res = local ? pls::reconstruct_local(samples, gen, mode)
                : (mode == pls::ReconMode::complex_path
                       ? pls::reconstruct_complex(samples, gen)
                       : pls::reconstruct_real(samples, gen));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  json rj = pls::recon_result_json(res);
  rj["mode"] = cfg["mode"];
  rj["local"] = local;
  if (truth && res.status == pls::ReconStatus::ok) {
    std::span<const cx> cmp(truth->data(),
                            std::min(truth->size(), res.coeffs.size()));
    const double err = (mode == pls::ReconMode::complex_path)
                           ? pls::error_complex(cmp, res.coeffs)
                           : pls::error_real(cmp, res.coeffs);
    rj["error"] = err;
  } else {
    rj["error"] = nullptr;
  }
  if (clean && res.status == pls::ReconStatus::ok && !samples.noise_meta) {
    const auto resynth = pls::measure(*res.signal, samples.design);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < clean->values.size(); ++i) {
      num = std::max(num, std::abs(resynth.values[i] - clean->values[i]));
      den = std::max(den, clean->values[i]);
    }
    rj["resynth_rel"] = (den > 0.0) ? num / den : 0.0;
  }

  pls::write_samples_csv(out_dir / "samples.csv", samples);
  write_json_file(out_dir / "samples_meta.json", pls::samples_meta_json(samples));
  pls::write_coeffs_csv(out_dir / "coefficients.csv", res.coeffs);
  write_json_file(out_dir / "reconstruction.json", rj);

  if (res.status != pls::ReconStatus::ok) {
    std::cerr << "reconstruct: failed at step " << res.failed_step << " ("
              << pls::to_string(res.status) << ")\n";
    return 3;
  }
  return 0;
}

// -- montecarlo ---------------------------------------------------------------

int cmd_montecarlo(const Common& c) {
  const json cfg = load_config(c.config);
  require_keys(cfg,
               {"generator", "generators", "mode", "coeffs", "trials", "n_max",
                "threshold", "snr_db", "snr_db_list"},
               "montecarlo config");
  if (!c.seed) {
    throw ConfigError("montecarlo requires --seed (no silent nondeterminism)");
  }
  if (cfg.contains("generator") == cfg.contains("generators")) {
    throw ConfigError("montecarlo: exactly one of 'generator' or 'generators'");
  }
  std::vector<json> gen_specs;
  if (cfg.contains("generator")) {
    gen_specs.push_back(cfg["generator"]);
  } else {
    for (const auto& g : cfg["generators"]) gen_specs.push_back(g);
  }
  if (gen_specs.empty()) throw ConfigError("montecarlo: no generators given");

  pls::TrialConfig base;
  base.mode = mode_from_json(cfg, "montecarlo");
  base.master_seed = *c.seed;
  base.jobs = c.jobs;
  if (cfg.contains("trials")) base.trials = cfg["trials"].get<std::size_t>();
  if (cfg.contains("threshold")) base.success_threshold = cfg["threshold"].get<double>();
  if (cfg.contains("n_max")) base.n_max = cfg["n_max"].get<int>();

  if (cfg.contains("coeffs")) {
    const json& co = cfg["coeffs"];
    require_keys(co, {"source", "count", "path"}, "montecarlo coeffs");
    const std::string source = co.at("source").get<std::string>();
    if (source == "random") {
      base.coeff_count = co.at("count").get<std::size_t>();
    } else if (source == "csv") {
      try {
        base.fixed_coeffs = pls::read_coeffs_csv(co.at("path").get<std::string>());
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    } else {
      throw ConfigError("montecarlo: coeffs source must be 'random' or 'csv'");
    }
  }

  std::vector<double> snr_list;
  bool sweep = false;
  if (cfg.contains("snr_db") && cfg.contains("snr_db_list")) {
    throw ConfigError("montecarlo: give 'snr_db' or 'snr_db_list', not both");
  }
  if (cfg.contains("snr_db")) snr_list.push_back(cfg["snr_db"].get<double>());
  if (cfg.contains("snr_db_list")) {
    sweep = true;
    for (const auto& v : cfg["snr_db_list"]) snr_list.push_back(v.get<double>());
  }
  sweep = sweep || gen_specs.size() > 1;

  const fs::path out_dir = prepare_out_dir(c);
  json report;
  report["config"] = cfg;
  report["seed"] = *c.seed;
  json rows = json::array();

  std::ofstream errors_csv(out_dir / "errors.csv");
  errors_csv << std::setprecision(17);
  if (sweep) {
    errors_csv << "series,snr_db,trial,error\n";
  } else {
    errors_csv << "trial,error\n";
  }

  std::vector<std::vector<std::string>> table_cells;
  for (const json& gspec : gen_specs) {
    pls::TrialConfig run_cfg = base;
    run_cfg.gen = generator_from_json(gspec);
    const std::string label = generator_label(gspec);
    json row;
    row["series"] = label;
    json cells = json::array();
    std::vector<std::string> table_row{label};

    const auto emit = [&](const std::optional<double>& snr, const pls::TrialReport& rep) {
      json cell = pls::trial_report_json(rep);
      if (snr) {
        cell["snr_db"] = *snr;
      } else {
        cell["snr_db"] = nullptr;
      }
      cells.push_back(std::move(cell));
      table_row.push_back(std::to_string(rep.success_rate));
      for (std::size_t i = 0; i < rep.errors.size(); ++i) {
        if (sweep) {
          errors_csv << label << ',' << (snr ? std::to_string(*snr) : std::string("inf"))
                     << ',' << i << ',' << rep.errors[i] << '\n';
        } else {
          errors_csv << i << ',' << rep.errors[i] << '\n';
        }
      }
      if (!sweep) {
        pls::write_cdf_csv(out_dir / "cdf.csv", rep.cdf_curve());
      }
    };

    if (snr_list.empty()) {
      run_cfg.snr_db.reset();
      emit(std::nullopt, pls::run_trials(run_cfg));
    } else {
      for (double snr : snr_list) {
        run_cfg.snr_db = snr;
        emit(snr, pls::run_trials(run_cfg));
      }
    }
    row["runs"] = std::move(cells);
    rows.push_back(std::move(row));
    table_cells.push_back(std::move(table_row));
  }
  report["series"] = std::move(rows);
  write_json_file(out_dir / "report.json", report);

  if (sweep) {
    std::ofstream table(out_dir / "table.csv");
    table << "series";
    if (snr_list.empty()) {
      table << ",noiseless";
    } else {
      for (double snr : snr_list) table << ",snr_" << snr;
    }
    table << '\n';
    for (const auto& row : table_cells) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        table << (i ? "," : "") << row[i];
      }
      table << '\n';
    }
  }
  return 0;
}

// -- ambiguity-demo -------------------------------------------------------------

int cmd_ambiguity_demo(const Common& c) {
  const json cfg = load_config(c.config);
  require_keys(cfg, {"generator", "alpha", "beta", "max_index", "grid_points"},
               "ambiguity-demo config");
  if (!cfg.contains("generator")) throw ConfigError("ambiguity-demo: 'generator' required");
  const pls::Generator varphi = generator_from_json(cfg["generator"]);
  const double alpha = need_number(cfg, "alpha", "ambiguity-demo");
  const double beta = need_number(cfg, "beta", "ambiguity-demo");
  const int max_index =
      cfg.contains("max_index") ? cfg["max_index"].get<int>() : 2;
  const int grid_points =
      cfg.contains("grid_points") ? cfg["grid_points"].get<int>() : 10000;
  if (grid_points < 2) throw ConfigError("ambiguity-demo: grid_points must be >= 2");

  std::pair<pls::CausalSignal, pls::CausalSignal> pair = [&]() {
    try {
      return pls::ambiguous_pair(varphi, alpha, beta, max_index);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const pls::CausalSignal& f = pair.first;
  const pls::CausalSignal& ft = pair.second;

  const fs::path out_dir = prepare_out_dir(c);
  const double span = max_index + varphi.support_len();
  double max_gap_mag = 0.0;
  {
    std::ofstream grid(out_dir / "magnitudes.csv");
    grid << std::setprecision(17) << "x,mag_f,mag_f_tilde\n";
    for (int i = 0; i < grid_points; ++i) {
      const double x = span * (i + 0.5) / grid_points;
      const double m1 = std::abs(pls::evaluate(f, x));
      const double m2 = std::abs(pls::evaluate(ft, x));
      grid << x << ',' << m1 << ',' << m2 << '\n';
      max_gap_mag = std::max(max_gap_mag, std::abs(m1 - m2));
    }
  }
  // alignment residual: closed form equals the theta-grid limit
  const double residual = std::pow(10.0, pls::error_complex(f.coeffs(), ft.coeffs()));

  json j;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["max_index"] = max_index;
  j["grid_points"] = grid_points;
  j["max_pointwise_magnitude_gap"] = max_gap_mag;
  j["alignment_residual"] = residual;
  const cx ct1 = ft.coeffs()[1];
  j["c_tilde_1"] = {ct1.real(), ct1.imag()};
  j["c_tilde_1_expected_phase"] = 2.0 * alpha - beta;
  write_json_file(out_dir / "ambiguity.json", j);

  std::cerr << "ambiguity-demo: max |delta mag| = " << max_gap_mag
            << ", alignment residual = " << residual << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phaseless sampling in shift-invariant spaces: reconstruction toolkit"};
  app.require_subcommand(1);

  Common ghc_c, rec_c, mc_c, amb_c;
  CLI::App* ghc = app.add_subcommand("check-ghc", "certify a generator system");
  CLI::App* rec = app.add_subcommand("reconstruct", "reconstruct one signal");
  CLI::App* mc = app.add_subcommand("montecarlo", "run Monte Carlo trials");
  CLI::App* amb = app.add_subcommand("ambiguity-demo", "magnitude-equal signal pair");
  const auto add_common = [](CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON config file")->required();
    cmd->add_option("--seed", c.seed, "master RNG seed");
    cmd->add_option("--jobs", c.jobs, "worker threads (default: all cores)");
    cmd->add_option("--out", c.out, "output directory (default: .)");
  };
  add_common(ghc, ghc_c);
  add_common(rec, rec_c);
  add_common(mc, mc_c);
  add_common(amb, amb_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (ghc->parsed()) return cmd_check_ghc(ghc_c);
    if (rec->parsed()) return cmd_reconstruct(rec_c);
    if (mc->parsed()) return cmd_montecarlo(mc_c);
    if (amb->parsed()) return cmd_ambiguity_demo(amb_c);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
