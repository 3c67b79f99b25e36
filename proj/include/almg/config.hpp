#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "almg/model.hpp"
#include "almg/spectra.hpp"

namespace almg {

// One entry of a state list: an explicit (parity, index) pair or the state
// nearest a target energy per site.
struct StateRef {
  enum class Kind { Indexed, NearEps };
  Kind kind = Kind::Indexed;
  Parity parity = Parity::Even;
  int index = 0;
  double eps_target = 0.0;
};

// Grammar: comma-separated entries; "even:" / "odd:" prefixes set the sector
// for subsequent bare entries; an entry is an index, an inclusive range a-b,
// or "near-eps:<value>".
std::vector<StateRef> parse_state_list(const std::string& text);

// Resolve refs against a spectrum: near-eps picks the state of either sector
// nearest the target E/N. Returns global indices.
std::vector<int> resolve_states(const SpectralData& sd, const std::vector<StateRef>& refs);

// "ground", "highest", "even:j" or "odd:j".
StateSelector parse_selector(const std::string& text);

std::vector<double> parse_xi_grid(const std::string& text);

struct RunConfig {
  std::string command;
  ModelParams model;
  double xi1 = 0.6;
  double xi2 = 0.5;
  bool xi2_set = false;
  std::string from = "ground";
  double delta = 0.01;
  std::string states = "even:0";
  std::string w_name = "sp";
  std::string v_name = "sm";
  double horizon = 1e4;
  int samples = 100001;
  double t_max = 50.0;
  int n_points = 2000;
  std::string xi_grid = "0:1:0.01";
  double eps0 = 0.0;
  bool eps0_set = false;
  double sigma = 0.0;
  std::string output_dir;
  int threads = 0;
  bool verify = false;

  OperatorSpec w_spec() const;
  OperatorSpec v_spec() const;
  // Command-specific validation; throws ConfigError.
  void validate() const;
};

// Flat key=value file; '#' starts a comment; unknown keys and malformed
// values are reported with their line number.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

}  // namespace almg
