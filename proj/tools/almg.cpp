#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "almg/config.hpp"
#include "almg/echo.hpp"
#include "almg/errors.hpp"
#include "almg/io.hpp"
#include "almg/model.hpp"
#include "almg/otoc.hpp"
#include "almg/quench.hpp"
#include "almg/spectra.hpp"
#include "almg/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

using namespace almg;

struct CommandOutputs {
  std::vector<fs::path> files;
  ordered_json notes = ordered_json::object();
};

std::string itos(int v) { return std::to_string(v); }

CommandOutputs run_spectrum(const RunConfig& cfg, const fs::path& dir) {
  const SpectralData sd = diagonalize(cfg.model);
  CsvWriter csv(dir / "spectrum.csv", {"index", "parity", "sector_index", "E", "eps"});
  for (int i = 0; i < sd.dim(); ++i) {
    csv.row({itos(i), itos(sd.parities[i]), itos(sd.sector_index[i]), format_g17(sd.energies[i]),
             format_g17(sd.eps[i])});
  }
  csv.close();
  return {{csv.path()}, {}};
}

void write_ldos_files(const Ldos& ldos, double sigma, const fs::path& dir,
                      std::vector<fs::path>& files) {
  CsvWriter csv(dir / "ldos.csv", {"E_j", "eps_j", "weight", "parity"});
  for (int j = 0; j < ldos.energies.size(); ++j) {
    csv.row({format_g17(ldos.energies[j]), format_g17(ldos.eps[j]), format_g17(ldos.weights[j]),
             itos(ldos.parities[j])});
  }
  csv.close();
  files.push_back(csv.path());

  if (sigma > 0.0) {
    const double lo = ldos.energies.minCoeff() - 4.0 * sigma;
    const double hi = ldos.energies.maxCoeff() + 4.0 * sigma;
    const int points = 2001;
    CsvWriter broad(dir / "ldos_broadened.csv", {"E", "rho"});
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
    for (int k = 0; k < points; ++k) {
      const double e = lo + (hi - lo) * k / (points - 1);
      double rho = 0.0;
      for (int j = 0; j < ldos.energies.size(); ++j) {
        const double d = (e - ldos.energies[j]) / sigma;
        rho += ldos.weights[j] * norm * std::exp(-0.5 * d * d);
      }
      broad.row({format_g17(e), format_g17(rho)});
    }
    broad.close();
    files.push_back(broad.path());
  }
}

CommandOutputs run_quench(const RunConfig& cfg, const fs::path& dir, bool with_survival) {
  const StateSelector sel = parse_selector(cfg.from);
  const ModelParams p1{cfg.model.N, cfg.xi1, cfg.model.alpha};
  const ModelParams p2{cfg.model.N, cfg.xi2, cfg.model.alpha};
  const SpectralData pre = diagonalize(p1);
  const SpectralData post = diagonalize(p2);
  const Ldos ldos = quench_coefficients(pre, post, sel);

  CommandOutputs out;
  write_ldos_files(ldos, cfg.sigma, dir, out.files);

  if (with_survival) {
    const TimeSeries ts = survival_probability(ldos, uniform_grid(cfg.t_max, cfg.n_points));
    CsvWriter csv(dir / "survival.csv", {"t", "F"});
    for (size_t i = 0; i < ts.times.size(); ++i) {
      csv.row({format_g17(ts.times[i]), format_g17(ts.values[i])});
    }
    csv.close();
    out.files.push_back(csv.path());
  }

  const int idx = select_state_index(pre, sel);
  out.notes["initial_state_energy"] = pre.energies[idx];
  out.notes["initial_state_parity"] = pre.parities[idx];
  return out;
}

CommandOutputs run_echo(const RunConfig& cfg, const fs::path& dir) {
  ModelParams pert_params = cfg.model;
  pert_params.xi += cfg.delta;
  const SpectralData base = diagonalize(cfg.model);
  const SpectralData pert = diagonalize(pert_params);

  std::vector<int> globals = resolve_states(base, parse_state_list(cfg.states));
  std::sort(globals.begin(), globals.end());
  globals.erase(std::unique(globals.begin(), globals.end()), globals.end());

  CommandOutputs out;
  const std::vector<double> grid = uniform_grid(cfg.t_max, cfg.n_points);
  for (int g : globals) {
    const Parity p = base.parities[g] > 0 ? Parity::Even : Parity::Odd;
    const int j = base.sector_index[g];
    const TimeSeries ts = loschmidt_echo(base, pert, p, j, grid);
    CsvWriter csv(dir / ("echo_" + std::string(parity_name(p)) + "_" + itos(j) + ".csv"),
                  {"t", "M"});
    for (size_t i = 0; i < ts.times.size(); ++i) {
      csv.row({format_g17(ts.times[i]), format_g17(ts.values[i])});
    }
    csv.close();
    out.files.push_back(csv.path());
  }

  bool deg_even = false;
  bool deg_odd = false;
  const Eigen::VectorXd avg_even = time_averaged_echo_sector(base, pert, Parity::Even, &deg_even);
  const Eigen::VectorXd avg_odd = time_averaged_echo_sector(base, pert, Parity::Odd, &deg_odd);
  CsvWriter avg(dir / "echo_avg.csv", {"j", "parity", "E_j", "eps_j", "M_bar"});
  for (int i = 0; i < base.dim(); ++i) {
    const double m_bar =
        base.parities[i] > 0 ? avg_even[base.sector_index[i]] : avg_odd[base.sector_index[i]];
    avg.row({itos(base.sector_index[i]), itos(base.parities[i]), format_g17(base.energies[i]),
             format_g17(base.eps[i]), format_g17(m_bar)});
  }
  avg.close();
  out.files.push_back(avg.path());
  out.notes["perturbed_sector_exactly_degenerate"] =
      ordered_json{{"even", deg_even}, {"odd", deg_odd}};
  return out;
}

CommandOutputs run_otoc(const RunConfig& cfg, const fs::path& dir) {
  const SpectralData sd = diagonalize(cfg.model);
  const EigenOperator W = to_eigenbasis(sd, build_full_operator(cfg.w_spec(), cfg.model.N));
  const EigenOperator V = to_eigenbasis(sd, build_full_operator(cfg.v_spec(), cfg.model.N));

  std::vector<int> globals = resolve_states(sd, parse_state_list(cfg.states));
  std::sort(globals.begin(), globals.end());
  globals.erase(std::unique(globals.begin(), globals.end()), globals.end());

  CommandOutputs out;
  const std::vector<double> grid = uniform_grid(cfg.t_max, cfg.n_points);
  for (int g : globals) {
    const Parity p = sd.parities[g] > 0 ? Parity::Even : Parity::Odd;
    const int j = sd.sector_index[g];
    const OtocSeries series = squared_commutator(sd, W, V, g, grid);
    CsvWriter csv(dir / ("otoc_" + std::string(parity_name(p)) + "_" + itos(j) + ".csv"),
                  {"t", "F", "C", "A"});
    for (size_t i = 0; i < series.times.size(); ++i) {
      csv.row({format_g17(series.times[i]), format_g17(series.f_values[i]),
               format_g17(series.c_values[i]), format_g17(series.a_values[i])});
    }
    csv.close();
    out.files.push_back(csv.path());
  }

  const GapTable table = GapTable::build(sd.energies);
  CsvWriter steady(dir / "otoc_steady.csv", {"parity", "index", "E", "eps", "F_bar"});
  for (int g : globals) {
    const double f_bar = steady_state_analytic(table, sd.energies, W.mat, V.mat, g);
    steady.row({itos(sd.parities[g]), itos(sd.sector_index[g]), format_g17(sd.energies[g]),
                format_g17(sd.eps[g]), format_g17(f_bar)});
  }
  steady.close();
  out.files.push_back(steady.path());
  return out;
}

CommandOutputs run_diagram(const RunConfig& cfg, const fs::path& dir) {
  const std::vector<double> grid = parse_xi_grid(cfg.xi_grid);
  const std::vector<DiagramRow> rows =
      correlation_diagram(cfg.model.N, cfg.model.alpha, grid, cfg.w_spec(), cfg.v_spec(),
                          cfg.threads);
  CsvWriter csv(dir / "diagram.csv", {"xi", "index", "E", "eps", "parity", "F_bar"});
  for (const DiagramRow& r : rows) {
    csv.row({format_g17(r.xi), itos(r.index), format_g17(r.energy), format_g17(r.eps),
             itos(r.parity), format_g17(r.f_bar)});
  }
  csv.close();
  CommandOutputs out;
  out.files.push_back(csv.path());
  out.notes["grid_points"] = grid.size();
  return out;
}

CommandOutputs run_critical(const RunConfig& cfg, const fs::path& dir) {
  const StateSelector sel = parse_selector(cfg.from);
  if (sel.mode == StateSelector::Mode::Index) {
    throw ConfigError("critical requires --from ground or --from highest");
  }
  const ModelParams p{cfg.model.N, cfg.xi1, cfg.model.alpha};
  const SpectralData sd = diagonalize(p);
  const int idx = select_state_index(sd, sel);
  const double slope = hf_slope(sd, sel);
  const double eps1 = sd.energies[idx] / cfg.model.N;

  double xi_c = 0.0;
  double eps0 = 0.0;
  std::string mode;
  if (sel.mode == StateSelector::Mode::Ground) {
    mode = "ground";
    xi_c = tangent_intersection_c1(slope, eps1, cfg.xi1);
    eps0 = xi_c;  // intersection with the eps = xi line
  } else {
    mode = "highest";
    eps0 = cfg.eps0_set ? cfg.eps0 : 1.0 + cfg.model.alpha;
    xi_c = tangent_intersection_c2(slope, eps1, cfg.xi1, eps0);
    if (cfg.model.alpha == 0.0) {
      std::cout << "note: alpha = 0 has no second critical line; the reported value is formal\n";
    }
  }

  CsvWriter csv(dir / "critical.csv",
                {"mode", "N", "alpha", "xi1", "slope", "eps1", "eps0", "xi_c"});
  csv.row({mode, itos(cfg.model.N), format_g17(cfg.model.alpha), format_g17(cfg.xi1),
           format_g17(slope), format_g17(eps1), format_g17(eps0), format_g17(xi_c)});
  csv.close();

  std::cout << "xi_c = " << format_g17(xi_c) << " (mode " << mode << ", slope "
            << format_g17(slope) << ")\n";
  CommandOutputs out;
  out.files.push_back(csv.path());
  out.notes["xi_c"] = xi_c;
  return out;
}

CommandOutputs compute(const RunConfig& cfg, const fs::path& dir) {
  if (cfg.command == "spectrum") return run_spectrum(cfg, dir);
  if (cfg.command == "quench") return run_quench(cfg, dir, true);
  if (cfg.command == "ldos") return run_quench(cfg, dir, false);
  if (cfg.command == "echo") return run_echo(cfg, dir);
  if (cfg.command == "otoc") return run_otoc(cfg, dir);
  if (cfg.command == "diagram") return run_diagram(cfg, dir);
  if (cfg.command == "critical") return run_critical(cfg, dir);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = cfg.command;
  j["N"] = cfg.model.N;
  j["xi"] = cfg.model.xi;
  j["alpha"] = cfg.model.alpha;
  j["xi1"] = cfg.xi1;
  if (cfg.xi2_set) j["xi2"] = cfg.xi2;
  j["from"] = cfg.from;
  j["delta"] = cfg.delta;
  j["states"] = cfg.states;
  j["W"] = cfg.w_name;
  j["V"] = cfg.v_name;
  j["horizon"] = cfg.horizon;
  j["samples"] = cfg.samples;
  j["t_max"] = cfg.t_max;
  j["n_points"] = cfg.n_points;
  j["xi_grid"] = cfg.xi_grid;
  if (cfg.eps0_set) {
    j["eps0"] = cfg.eps0;
  } else if (cfg.command == "critical") {
    j["eps0"] = 1.0 + cfg.model.alpha;
  }
  j["sigma"] = cfg.sigma;
  j["threads"] = cfg.threads;
  return j;
}

int verify_run(const RunConfig& cfg, const fs::path& outdir) {
  const fs::path manifest_path = outdir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw ConfigError("nothing to verify: " + manifest_path.string() + " not found");
  }
  std::ifstream in(manifest_path);
  ordered_json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse " + manifest_path.string() + ": " + e.what());
  }
  if (manifest.value("command", "") != cfg.command) {
    throw ConfigError("manifest records command '" + manifest.value("command", "") +
                      "', requested '" + cfg.command + "'");
  }

  const fs::path stage = outdir / ".verify-stage";
  fs::remove_all(stage);
  fs::create_directories(stage);
  const CommandOutputs fresh = compute(cfg, stage);

  std::map<std::string, std::string> recorded;
  for (const auto& entry : manifest["outputs"]) {
    recorded[entry["file"].get<std::string>()] = entry["fnv1a64"].get<std::string>();
  }

  int mismatches = 0;
  for (const fs::path& f : fresh.files) {
    const std::string name = f.filename().string();
    const std::string sum = hex64(fnv1a64_file(f));
    const auto it = recorded.find(name);
    if (it == recorded.end()) {
      std::cout << name << ": not in manifest\n";
      ++mismatches;
      continue;
    }
    const fs::path on_disk = outdir / name;
    if (it->second != sum) {
      std::cout << name << ": MISMATCH (manifest " << it->second << ", recomputed " << sum
                << ")\n";
      ++mismatches;
    } else if (!fs::exists(on_disk)) {
      std::cout << name << ": missing from output directory\n";
      ++mismatches;
    } else if (const std::string disk = hex64(fnv1a64_file(on_disk)); disk != it->second) {
      std::cout << name << ": MISMATCH (manifest " << it->second << ", on disk " << disk << ")\n";
      ++mismatches;
    } else {
      std::cout << name << ": ok\n";
    }
    recorded.erase(it);
  }
  for (const auto& [name, sum] : recorded) {
    std::cout << name << ": listed in manifest but not produced\n";
    ++mismatches;
  }
  fs::remove_all(stage);
  if (mismatches > 0) {
    std::cout << "verification FAILED (" << mismatches << " file(s))\n";
    return 1;
  }
  std::cout << "verification passed\n";
  return 0;
}

int execute(RunConfig& cfg) {
  cfg.validate();
  fs::path outdir;
  if (!cfg.output_dir.empty()) {
    outdir = cfg.output_dir;
  } else if (const char* env = std::getenv("ALMG_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    outdir = env;
  } else {
    outdir = ".";
  }

  if (cfg.verify) return verify_run(cfg, outdir);

  try {
    fs::create_directories(outdir);
  } catch (const std::exception& e) {
    throw ConfigError("cannot create output directory " + outdir.string() + ": " + e.what());
  }

  const auto start = std::chrono::steady_clock::now();
  const CommandOutputs out = compute(cfg, outdir);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ordered_json manifest;
  manifest["command"] = cfg.command;
  manifest["version"] = kVersion;
  manifest["wall_time_s"] = wall;
  manifest["config"] = config_json(cfg);
  manifest["outputs"] = ordered_json::array();
  for (const fs::path& f : out.files) {
    ordered_json entry;
    entry["file"] = f.filename().string();
    entry["bytes"] = static_cast<uint64_t>(fs::file_size(f));
    entry["fnv1a64"] = hex64(fnv1a64_file(f));
    manifest["outputs"].push_back(entry);
  }
  if (!out.notes.empty()) manifest["notes"] = out.notes;

  std::ofstream mf(outdir / "manifest.json", std::ios::binary);
  if (!mf) throw InvalidInput("cannot write manifest.json in " + outdir.string());
  mf << manifest.dump(2) << "\n";
  mf.close();

  std::cout << cfg.command << ": wrote " << out.files.size() << " file(s) to " << outdir.string()
            << " in " << format_g17(wall) << " s\n";
  return 0;
}

int almg_main(int argc, char** argv) {
  RunConfig cfg;

  // Apply the config file first so command-line flags override it.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      apply_config_file(cfg, argv[i + 1]);
      break;
    }
    if (arg.rfind("--config=", 0) == 0) {
      apply_config_file(cfg, arg.substr(9));
      break;
    }
  }

  CLI::App app{"Exact diagonalization and quench dynamics for the anharmonic LMG model"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key=value configuration file");
  app.add_option("--N", cfg.model.N, "number of sites (even)");
  app.add_option("--xi", cfg.model.xi, "control parameter in [0,1]");
  app.add_option("--alpha", cfg.model.alpha, "anharmonicity");
  app.add_option("-o,--output-dir", cfg.output_dir, "output directory (or ALMG_OUTPUT_DIR)");
  app.add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  app.add_flag("--verify", cfg.verify, "recompute and compare against manifest.json");

  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--t-max", cfg.t_max, "time grid end");
    sub->add_option("--n-points", cfg.n_points, "time grid points");
  };
  auto add_xi2 = [&](CLI::App* sub) {
    sub->add_option("--xi1", cfg.xi1, "pre-quench xi");
    sub->add_option_function<double>(
        "--xi2", [&cfg](double v) { cfg.xi2 = v; cfg.xi2_set = true; }, "post-quench xi");
    sub->add_option("--from", cfg.from, "initial state: ground, highest, even:j, odd:j");
    sub->add_option("--sigma", cfg.sigma, "optional Gaussian broadening for the LDOS");
  };

  CLI::App* sub_spectrum = app.add_subcommand("spectrum", "eigenvalues of both parity blocks");
  CLI::App* sub_quench = app.add_subcommand("quench", "survival probability and LDOS");
  add_xi2(sub_quench);
  add_grid(sub_quench);
  CLI::App* sub_ldos = app.add_subcommand("ldos", "LDOS only");
  add_xi2(sub_ldos);
  CLI::App* sub_echo = app.add_subcommand("echo", "Loschmidt echoes and their time averages");
  sub_echo->add_option("--delta", cfg.delta, "perturbation of xi");
  sub_echo->add_option("--states", cfg.states, "state list, e.g. even:0,48,near-eps:0.4");
  add_grid(sub_echo);
  CLI::App* sub_otoc = app.add_subcommand("otoc", "microcanonical OTOC time series and steady values");
  sub_otoc->add_option("--W", cfg.w_name, "W operator (sz, sp, sm, sx, sy, sx2, nop, nopsq)");
  sub_otoc->add_option("--V", cfg.v_name, "V operator");
  sub_otoc->add_option("--states", cfg.states, "state list");
  sub_otoc->add_option("--horizon", cfg.horizon, "numeric steady-state horizon");
  sub_otoc->add_option("--samples", cfg.samples, "numeric steady-state samples");
  add_grid(sub_otoc);
  CLI::App* sub_diagram = app.add_subcommand("diagram", "steady-state OTOC over a xi grid");
  sub_diagram->add_option("--xi-grid", cfg.xi_grid, "grid start:end:step");
  sub_diagram->add_option("--W", cfg.w_name, "W operator");
  sub_diagram->add_option("--V", cfg.v_name, "V operator");
  CLI::App* sub_critical = app.add_subcommand("critical", "tangent-method critical quench value");
  sub_critical->add_option("--xi1", cfg.xi1, "pre-quench xi");
  sub_critical->add_option("--from", cfg.from, "ground or highest");
  sub_critical->add_option_function<double>(
      "--eps0", [&cfg](double v) { cfg.eps0 = v; cfg.eps0_set = true; },
      "flat critical line (default 1 + alpha)");

  for (CLI::App* sub : {sub_spectrum, sub_quench, sub_ldos, sub_echo, sub_otoc, sub_diagram,
                        sub_critical}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  return execute(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return almg_main(argc, argv);
  } catch (const almg::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const almg::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
