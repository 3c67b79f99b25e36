#pragma once

#include <Eigen/Dense>
#include <vector>

#include "almg/quench.hpp"
#include "almg/spectra.hpp"

namespace almg {

struct OtocRequest {
  ModelParams spec;
  Parity parity = Parity::Even;
  int index = 0;
  OperatorSpec W{SpinOperatorKind::Sp, true};
  OperatorSpec V{SpinOperatorKind::Sm, true};
  std::vector<double> times;
};

struct OtocSeries {
  std::vector<double> times;
  std::vector<double> f_values;  // F_n(t)
  std::vector<double> c_values;  // C_n(t), squared commutator
  std::vector<double> a_values;  // A_n(t), two-point part; C = A - 2F
};

// Operator transformed to the eigenbasis. The imaginary-unit prefactor is
// carried along; it cancels in F, A and C because every operator enters once
// plain and once daggered.
struct EigenOperator {
  Eigen::MatrixXd mat;
  bool imag_factor = false;
};

EigenOperator to_eigenbasis(const SpectralData& sd, const SpinOperator& op);

// F_n(t) = Re <n| W^dag(t) V^dag W(t) V |n> via eigenbasis phase contraction.
double otoc_f_at(const SpectralData& sd, const EigenOperator& W, const EigenOperator& V,
                 int n_global, double t);
// F, C and A at one time; WtW = W.mat^T W.mat and VtV likewise, precomputed.
void otoc_fca_at(const SpectralData& sd, const EigenOperator& W, const EigenOperator& V,
                 const Eigen::MatrixXd& WtW, const Eigen::MatrixXd& VtV, int n_global, double t,
                 double& f, double& c, double& a);

OtocSeries microcanonical_otoc(const OtocRequest& req);
OtocSeries microcanonical_otoc(const SpectralData& sd, const EigenOperator& W,
                               const EigenOperator& V, int n_global,
                               const std::vector<double>& times);

OtocSeries squared_commutator(const OtocRequest& req);
OtocSeries squared_commutator(const SpectralData& sd, const EigenOperator& W,
                              const EigenOperator& V, int n_global,
                              const std::vector<double>& times);

// Uniform-grid average of F_n(t) over [0, horizon].
double steady_state_otoc(const OtocRequest& req, double horizon, int samples);
double steady_state_otoc(const SpectralData& sd, const EigenOperator& W, const EigenOperator& V,
                         int n_global, double horizon, int samples);

// Sorted table of eigenvalue pair gaps E_a - E_b for the zero-frequency sum.
struct GapTable {
  std::vector<double> gaps;   // sorted
  std::vector<int> pair_a;
  std::vector<int> pair_b;
  double tol = 0.0;

  static GapTable build(const Eigen::VectorXd& energies);
};

// Exact infinite-horizon average: sum over (a, b, c) with
// |E_a - E_b - (E_n - E_c)| < tol of W_an V_ba W_bc V_cn.
double steady_state_analytic(const GapTable& table, const Eigen::VectorXd& energies,
                             const Eigen::MatrixXd& Wp, const Eigen::MatrixXd& Vp, int n_global);
double steady_state_analytic(const SpectralData& sd, const EigenOperator& W,
                             const EigenOperator& V, int n_global);

struct DiagramRow {
  double xi = 0.0;
  int index = 0;
  double energy = 0.0;
  double eps = 0.0;
  int parity = +1;
  double f_bar = 0.0;
};

// Steady-state OTOC for every eigenstate on a xi grid; parallel over grid points.
std::vector<DiagramRow> correlation_diagram(int N, double alpha, const std::vector<double>& xi_grid,
                                            const OperatorSpec& W, const OperatorSpec& V,
                                            int threads = 0);

}  // namespace almg
