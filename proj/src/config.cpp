#include "almg/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "almg/errors.hpp"

namespace almg {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
}

}  // namespace

std::vector<StateRef> parse_state_list(const std::string& text) {
  std::vector<StateRef> refs;
  Parity current = Parity::Even;
  for (const std::string& raw : split(text, ',')) {
    std::string token = trim(raw);
    if (token.empty()) throw ConfigError("empty entry in state list '" + text + "'");
    if (token.rfind("near-eps:", 0) == 0) {
      StateRef ref;
      ref.kind = StateRef::Kind::NearEps;
      ref.eps_target = parse_double(token.substr(9), "near-eps target");
      refs.push_back(ref);
      continue;
    }
    const size_t colon = token.find(':');
    if (colon != std::string::npos) {
      const std::string p = token.substr(0, colon);
      if (p == "even") {
        current = Parity::Even;
      } else if (p == "odd") {
        current = Parity::Odd;
      } else {
        throw ConfigError("unknown parity '" + p + "' in state list entry '" + token + "'");
      }
      token = token.substr(colon + 1);
      if (token.empty()) throw ConfigError("missing index after '" + p + ":'");
    }
    const size_t dash = token.find('-');
    int lo, hi;
    if (dash != std::string::npos) {
      lo = parse_int(token.substr(0, dash), "state index");
      hi = parse_int(token.substr(dash + 1), "state index");
      if (hi < lo) throw ConfigError("descending state range '" + token + "'");
    } else {
      lo = hi = parse_int(token, "state index");
    }
    if (lo < 0) throw ConfigError("negative state index in '" + token + "'");
    for (int j = lo; j <= hi; ++j) {
      StateRef ref;
      ref.kind = StateRef::Kind::Indexed;
      ref.parity = current;
      ref.index = j;
      refs.push_back(ref);
    }
  }
  if (refs.empty()) throw ConfigError("empty state list");
  return refs;
}

std::vector<int> resolve_states(const SpectralData& sd, const std::vector<StateRef>& refs) {
  std::vector<int> out;
  out.reserve(refs.size());
  for (const StateRef& ref : refs) {
    if (ref.kind == StateRef::Kind::NearEps) {
      out.push_back(sd.nearest_state(ref.eps_target));
    } else {
      out.push_back(sd.global_index(ref.parity, ref.index));
    }
  }
  return out;
}

StateSelector parse_selector(const std::string& text) {
  StateSelector sel;
  if (text == "ground") {
    sel.mode = StateSelector::Mode::Ground;
    return sel;
  }
  if (text == "highest") {
    sel.mode = StateSelector::Mode::HighestEven;
    return sel;
  }
  const size_t colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string p = text.substr(0, colon);
    if (p == "even" || p == "odd") {
      sel.mode = StateSelector::Mode::Index;
      sel.parity = (p == "even") ? Parity::Even : Parity::Odd;
      sel.index = parse_int(text.substr(colon + 1), "selector index");
      if (sel.index < 0) throw ConfigError("negative selector index in '" + text + "'");
      return sel;
    }
  }
  throw ConfigError("unknown state selector '" + text +
                    "' (expected ground, highest, even:j or odd:j)");
}

std::vector<double> parse_xi_grid(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 3) {
    throw ConfigError("xi grid must be start:end:step, got '" + text + "'");
  }
  const double start = parse_double(parts[0], "xi grid start");
  const double end = parse_double(parts[1], "xi grid end");
  const double step = parse_double(parts[2], "xi grid step");
  if (!(step > 0.0)) throw ConfigError("xi grid step must be positive");
  if (start > end) throw ConfigError("xi grid start exceeds end");
  if (start < 0.0 || end > 1.0) throw ConfigError("xi grid must lie within [0,1]");
  std::vector<double> grid;
  const int count = static_cast<int>(std::floor((end - start) / step + 0.5)) + 1;
  for (int k = 0; k < count; ++k) {
    const double xi = start + k * step;
    grid.push_back(std::min(xi, 1.0));
  }
  return grid;
}

OperatorSpec RunConfig::w_spec() const { return {operator_from_name(w_name), true}; }
OperatorSpec RunConfig::v_spec() const { return {operator_from_name(v_name), true}; }

void RunConfig::validate() const {
  try {
    model.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (command == "quench" || command == "ldos" || command == "critical") {
    if (!(xi1 >= 0.0 && xi1 <= 1.0)) throw ConfigError("xi1 must lie in [0,1]");
    parse_selector(from);
  }
  if (command == "quench" || command == "ldos") {
    if (!xi2_set) throw ConfigError("command '" + command + "' requires --xi2");
    if (!(xi2 >= 0.0 && xi2 <= 1.0)) throw ConfigError("xi2 must lie in [0,1]");
  }
  if (command == "echo") {
    const double xp = model.xi + delta;
    if (!(xp >= 0.0 && xp <= 1.0)) throw ConfigError("xi + delta must lie in [0,1]");
    parse_state_list(states);
  }
  const auto check_ops = [&] {
    try {
      operator_from_name(w_name);
      operator_from_name(v_name);
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
  };
  if (command == "otoc") {
    parse_state_list(states);
    check_ops();
    if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (samples < 1000) throw ConfigError("samples must be at least 1000");
  }
  if (command == "diagram") {
    parse_xi_grid(xi_grid);
    check_ops();
  }
  if (command == "quench" || command == "echo" || command == "otoc") {
    if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (n_points < 2) throw ConfigError("n_points must be at least 2");
  }
  if (sigma < 0.0) throw ConfigError("sigma must be nonnegative");
  if (threads < 0) throw ConfigError("threads must be nonnegative");
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());

  const std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"N", [&](const std::string& v) { cfg.model.N = parse_int(v, "N"); }},
      {"xi", [&](const std::string& v) { cfg.model.xi = parse_double(v, "xi"); }},
      {"alpha", [&](const std::string& v) { cfg.model.alpha = parse_double(v, "alpha"); }},
      {"xi1", [&](const std::string& v) { cfg.xi1 = parse_double(v, "xi1"); }},
      {"xi2",
       [&](const std::string& v) {
         cfg.xi2 = parse_double(v, "xi2");
         cfg.xi2_set = true;
       }},
      {"from", [&](const std::string& v) { cfg.from = v; }},
      {"delta", [&](const std::string& v) { cfg.delta = parse_double(v, "delta"); }},
      {"states", [&](const std::string& v) { cfg.states = v; }},
      {"W", [&](const std::string& v) { cfg.w_name = v; }},
      {"V", [&](const std::string& v) { cfg.v_name = v; }},
      {"horizon", [&](const std::string& v) { cfg.horizon = parse_double(v, "horizon"); }},
      {"samples", [&](const std::string& v) { cfg.samples = parse_int(v, "samples"); }},
      {"t_max", [&](const std::string& v) { cfg.t_max = parse_double(v, "t_max"); }},
      {"n_points", [&](const std::string& v) { cfg.n_points = parse_int(v, "n_points"); }},
      {"xi_grid", [&](const std::string& v) { cfg.xi_grid = v; }},
      {"eps0",
       [&](const std::string& v) {
         cfg.eps0 = parse_double(v, "eps0");
         cfg.eps0_set = true;
       }},
      {"sigma", [&](const std::string& v) { cfg.sigma = parse_double(v, "sigma"); }},
      {"output_dir", [&](const std::string& v) { cfg.output_dir = v; }},
      {"threads", [&](const std::string& v) { cfg.threads = parse_int(v, "threads"); }},
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key=value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    try {
      it->second(value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
}

}  // namespace almg
