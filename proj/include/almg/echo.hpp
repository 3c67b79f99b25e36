#pragma once

#include <Eigen/Dense>
#include <vector>

#include "almg/quench.hpp"
#include "almg/spectra.hpp"

namespace almg {

struct EchoSpec {
  ModelParams params;   // H1 = H(xi, alpha)
  double delta = 0.01;  // H2 = H(xi + delta, alpha)
  Parity parity = Parity::Even;
  int index = 0;        // state within the parity sector of H1
};

// M_j(t) = |<psi_j(xi)| e^{i H(xi+delta) t} |psi_j(xi)>|^2
TimeSeries loschmidt_echo(const EchoSpec& spec, const std::vector<double>& times);
TimeSeries loschmidt_echo(const SpectralData& base, const SpectralData& pert,
                          Parity parity, int j, const std::vector<double>& times);

// Exact long-time average sum_m |<psi_m(xi+delta)|psi_j(xi)>|^4.
// degenerate_flag reports exact degeneracy in the perturbed sector, where the
// coefficient split is basis dependent.
double time_averaged_echo(const EchoSpec& spec, bool* degenerate_flag = nullptr);
double time_averaged_echo(const SpectralData& base, const SpectralData& pert,
                          Parity parity, int j, bool* degenerate_flag = nullptr);

// Averages for every state of one parity sector (shared overlap matrix).
Eigen::VectorXd time_averaged_echo_sector(const SpectralData& base, const SpectralData& pert,
                                          Parity parity, bool* degenerate_flag = nullptr);

}  // namespace almg
