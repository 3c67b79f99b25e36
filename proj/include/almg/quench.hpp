#pragma once

#include <Eigen/Dense>
#include <vector>

#include "almg/spectra.hpp"

namespace almg {

struct QuenchSpec {
  double alpha = -0.6;
  double xi1 = 0.6;
  double xi2 = 0.5;
  int N = 300;
  StateSelector initial;
};

struct Ldos {
  Eigen::VectorXd energies;  // eigenvalues of the post-quench Hamiltonian
  Eigen::VectorXd weights;   // |C_j|^2
  Eigen::VectorXd eps;       // (E - E_gs) / N of the post-quench spectrum
  std::vector<int> parities;
  int initial_parity = +1;
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
};

std::vector<double> uniform_grid(double t_max, int n_points);

Ldos quench_coefficients(const QuenchSpec& spec);
Ldos quench_coefficients(const SpectralData& pre, const SpectralData& post,
                         const StateSelector& initial);

// F(t) = |sum_j w_j e^{-i E_j t}|^2
TimeSeries survival_probability(const Ldos& ldos, const std::vector<double>& times);

// Exact window average (1/(t1-t0)) int_{t0}^{t1} F(t) dt.
double mean_survival(const Ldos& ldos, double t0, double t1);

// Collapse signature: window mean <= 0.05 and no revival above 0.2.
bool collapse_detected(const Ldos& ldos, double t0, double t1, int probe_points = 2000);

// Tangent from (xi1, eps1) with slope m intersecting the eps = xi line.
double tangent_intersection_c1(double m, double eps1, double xi1);
// Tangent intersecting the flat line eps = eps0.
double tangent_intersection_c2(double m2, double eps1, double xi1, double eps0);

double critical_xi_from_ground(double alpha, double xi1, int N);
double critical_xi_from_highest(double alpha, double xi1, int N, double eps0);

}  // namespace almg
