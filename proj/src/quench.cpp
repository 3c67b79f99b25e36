#include "almg/quench.hpp"

#include <cmath>
#include <complex>

namespace almg {

std::vector<double> uniform_grid(double t_max, int n_points) {
  if (!(t_max > 0.0)) throw InvalidInput("t_max must be positive");
  if (n_points < 2) throw InvalidInput("n_points must be at least 2");
  std::vector<double> t(n_points);
  for (int i = 0; i < n_points; ++i) t[i] = t_max * i / (n_points - 1);
  return t;
}

Ldos quench_coefficients(const SpectralData& pre, const SpectralData& post,
                         const StateSelector& initial) {
  if (pre.params.N != post.params.N) {
    throw InvalidInput("pre- and post-quench spectra have different N");
  }
  const int idx = select_state_index(pre, initial);
  const Eigen::VectorXd v0 = pre.vectors.col(idx);

  Ldos ldos;
  ldos.energies = post.energies;
  ldos.eps = post.eps;
  ldos.parities = post.parities;
  ldos.initial_parity = pre.parities[idx];
  const Eigen::VectorXd c = post.vectors.transpose() * v0;
  ldos.weights = c.array().square();
  return ldos;
}

Ldos quench_coefficients(const QuenchSpec& spec) {
  ModelParams p1{spec.N, spec.xi1, spec.alpha};
  ModelParams p2{spec.N, spec.xi2, spec.alpha};
  return quench_coefficients(diagonalize(p1), diagonalize(p2), spec.initial);
}

namespace {

struct CompactLdos {
  std::vector<double> w;
  std::vector<double> e;
};

CompactLdos compact(const Ldos& ldos) {
  CompactLdos c;
  const int n = static_cast<int>(ldos.weights.size());
  c.w.reserve(n);
  c.e.reserve(n);
  for (int j = 0; j < n; ++j) {
    if (ldos.weights[j] > 1e-18) {
      c.w.push_back(ldos.weights[j]);
      c.e.push_back(ldos.energies[j]);
    }
  }
  return c;
}

double survival_at(const CompactLdos& c, double t) {
  std::complex<double> amp(0.0, 0.0);
  for (size_t j = 0; j < c.w.size(); ++j) {
    amp += c.w[j] * std::exp(std::complex<double>(0.0, -c.e[j] * t));
  }
  return std::norm(amp);
}

}  // namespace

TimeSeries survival_probability(const Ldos& ldos, const std::vector<double>& times) {
  if (times.empty()) throw InvalidInput("empty time grid");
  for (size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InvalidInput("time grid must be strictly ascending");
  }
  const CompactLdos c = compact(ldos);
  TimeSeries ts;
  ts.times = times;
  ts.values.resize(times.size());
  for (size_t i = 0; i < times.size(); ++i) ts.values[i] = survival_at(c, times[i]);
  return ts;
}

double mean_survival(const Ldos& ldos, double t0, double t1) {
  if (!(t1 > t0)) throw InvalidInput("window end must exceed window start");
  const CompactLdos c = compact(ldos);
  const double span = t1 - t0;
  double mean = 0.0;
  for (double w : c.w) mean += w * w;
  for (size_t j = 0; j + 1 < c.w.size(); ++j) {
    for (size_t k = j + 1; k < c.w.size(); ++k) {
      const double d = c.e[j] - c.e[k];
      double factor;
      if (std::abs(d) < 1e-13) {
        factor = 1.0;
      } else {
        factor = (std::sin(d * t1) - std::sin(d * t0)) / (d * span);
      }
      mean += 2.0 * c.w[j] * c.w[k] * factor;
    }
  }
  return mean;
}

bool collapse_detected(const Ldos& ldos, double t0, double t1, int probe_points) {
  if (probe_points < 2) throw InvalidInput("probe_points must be at least 2");
  if (mean_survival(ldos, t0, t1) > 0.05) return false;
  const CompactLdos c = compact(ldos);
  for (int i = 0; i < probe_points; ++i) {
    const double t = t0 + (t1 - t0) * i / (probe_points - 1);
    if (survival_at(c, t) > 0.2) return false;
  }
  return true;
}

double tangent_intersection_c1(double m, double eps1, double xi1) {
  if (std::abs(m - 1.0) <= 1e-12) {
    throw NumericError("tangent is parallel to the first critical line");
  }
  const double xc = (m * xi1 - eps1) / (m - 1.0);
  if (xc < 0.0 || xc > 1.0) {
    throw NumericError("tangent does not reach the first critical line inside [0,1]");
  }
  return xc;
}

double tangent_intersection_c2(double m2, double eps1, double xi1, double eps0) {
  if (std::abs(m2) <= 1e-12) {
    throw NumericError("tangent slope vanishes; the flat critical line is unreachable");
  }
  return (m2 * xi1 + eps0 - eps1) / m2;
}

double critical_xi_from_ground(double alpha, double xi1, int N) {
  ModelParams p{N, xi1, alpha};
  const SpectralData sd = diagonalize(p);
  StateSelector gs;
  const int idx = select_state_index(sd, gs);
  const double m = hf_slope(sd, gs);
  const double eps1 = sd.energies[idx] / N;
  return tangent_intersection_c1(m, eps1, xi1);
}

double critical_xi_from_highest(double alpha, double xi1, int N, double eps0) {
  ModelParams p{N, xi1, alpha};
  const SpectralData sd = diagonalize(p);
  StateSelector sel;
  sel.mode = StateSelector::Mode::HighestEven;
  const int idx = select_state_index(sd, sel);
  const double m2 = hf_slope(sd, sel);
  const double eps1 = sd.energies[idx] / N;
  return tangent_intersection_c2(m2, eps1, xi1, eps0);
}

}  // namespace almg
