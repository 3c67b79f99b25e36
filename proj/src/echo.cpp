#include "almg/echo.hpp"

#include <cmath>
#include <complex>

namespace almg {

namespace {

void check_pair(const SpectralData& base, const SpectralData& pert) {
  if (base.params.N != pert.params.N) {
    throw InvalidInput("base and perturbed spectra have different N");
  }
  if (base.params.alpha != pert.params.alpha) {
    throw InvalidInput("base and perturbed spectra have different alpha");
  }
}

// |<psi_m(pert)|psi_j(base)>| coefficients within one parity sector.
Eigen::VectorXd sector_overlaps(const SpectralData& base, const SpectralData& pert,
                                Parity parity, int j) {
  const int g = base.global_index(parity, j);
  const Eigen::VectorXd v = base.vectors.col(g);
  const std::vector<int>& pert_states =
      (parity == Parity::Even) ? pert.even_states : pert.odd_states;
  Eigen::VectorXd a(static_cast<int>(pert_states.size()));
  for (size_t m = 0; m < pert_states.size(); ++m) {
    a[static_cast<int>(m)] = pert.vectors.col(pert_states[m]).dot(v);
  }
  return a;
}

bool sector_has_exact_degeneracy(const SpectralData& pert, Parity parity) {
  const std::vector<int>& states =
      (parity == Parity::Even) ? pert.even_states : pert.odd_states;
  const double scale = std::max({std::abs(pert.energies[0]),
                                 std::abs(pert.energies[pert.dim() - 1]), 1.0});
  for (size_t m = 0; m + 1 < states.size(); ++m) {
    if (pert.energies[states[m + 1]] - pert.energies[states[m]] < 1e-12 * scale) return true;
  }
  return false;
}

}  // namespace

TimeSeries loschmidt_echo(const SpectralData& base, const SpectralData& pert,
                          Parity parity, int j, const std::vector<double>& times) {
  check_pair(base, pert);
  if (times.empty()) throw InvalidInput("empty time grid");
  const Eigen::VectorXd a = sector_overlaps(base, pert, parity, j);
  const std::vector<int>& pert_states =
      (parity == Parity::Even) ? pert.even_states : pert.odd_states;

  const int s = static_cast<int>(a.size());
  Eigen::VectorXd w(s), e(s);
  for (int m = 0; m < s; ++m) {
    w[m] = a[m] * a[m];
    e[m] = pert.energies[pert_states[m]];
  }

  TimeSeries ts;
  ts.times = times;
  ts.values.resize(times.size());
  for (size_t i = 0; i < times.size(); ++i) {
    std::complex<double> amp(0.0, 0.0);
    for (int m = 0; m < s; ++m) {
      amp += w[m] * std::exp(std::complex<double>(0.0, e[m] * times[i]));
    }
    ts.values[i] = std::norm(amp);
  }
  return ts;
}

TimeSeries loschmidt_echo(const EchoSpec& spec, const std::vector<double>& times) {
  spec.params.validate();
  ModelParams pert_params = spec.params;
  pert_params.xi += spec.delta;
  pert_params.validate();
  return loschmidt_echo(diagonalize(spec.params), diagonalize(pert_params), spec.parity,
                        spec.index, times);
}

double time_averaged_echo(const SpectralData& base, const SpectralData& pert,
                          Parity parity, int j, bool* degenerate_flag) {
  check_pair(base, pert);
  const Eigen::VectorXd a = sector_overlaps(base, pert, parity, j);
  if (degenerate_flag != nullptr) {
    *degenerate_flag = sector_has_exact_degeneracy(pert, parity);
  }
  return a.array().square().square().sum();
}

double time_averaged_echo(const EchoSpec& spec, bool* degenerate_flag) {
  spec.params.validate();
  ModelParams pert_params = spec.params;
  pert_params.xi += spec.delta;
  pert_params.validate();
  return time_averaged_echo(diagonalize(spec.params), diagonalize(pert_params), spec.parity,
                            spec.index, degenerate_flag);
}

Eigen::VectorXd time_averaged_echo_sector(const SpectralData& base, const SpectralData& pert,
                                          Parity parity, bool* degenerate_flag) {
  check_pair(base, pert);
  const std::vector<int>& base_states =
      (parity == Parity::Even) ? base.even_states : base.odd_states;
  const std::vector<int>& pert_states =
      (parity == Parity::Even) ? pert.even_states : pert.odd_states;
  const int s = static_cast<int>(base_states.size());
  const int D = base.dim();

  Eigen::MatrixXd bm(D, s), pm(D, s);
  for (int k = 0; k < s; ++k) {
    bm.col(k) = base.vectors.col(base_states[k]);
    pm.col(k) = pert.vectors.col(pert_states[k]);
  }
  const Eigen::MatrixXd overlaps = pm.transpose() * bm;  // (m, j)
  if (degenerate_flag != nullptr) {
    *degenerate_flag = sector_has_exact_degeneracy(pert, parity);
  }
  return overlaps.array().square().square().colwise().sum().transpose();
}

}  // namespace almg
