#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "almg/model.hpp"

namespace almg {

// Merged eigen-decomposition of both parity blocks, sorted by energy
// (even parity first on exact ties). Eigenvectors are embedded in the full
// basis, have unit norm, support only on their parity sector, and carry the
// sign convention that the first nonzero component is positive.
struct SpectralData {
  ModelParams params;
  Eigen::VectorXd energies;       // ascending, length N+1
  std::vector<int> parities;      // +1 / -1 per state
  std::vector<int> sector_index;  // position within the parity sector
  Eigen::MatrixXd vectors;        // column j = eigenvector j
  double gs_energy = 0.0;
  Eigen::VectorXd eps;            // (E - E_gs) / N
  std::vector<int> even_states;   // global indices, ascending energy
  std::vector<int> odd_states;

  int dim() const { return static_cast<int>(energies.size()); }
  int sector_dim(Parity p) const {
    return static_cast<int>((p == Parity::Even ? even_states : odd_states).size());
  }
  int global_index(Parity p, int j) const;
  // State minimizing |E/N - target|; parity_filter 0 accepts both sectors.
  int nearest_state(double target_e_per_site, int parity_filter = 0) const;
};

SpectralData diagonalize(const ModelParams& params);

struct StateSelector {
  enum class Mode { Ground, HighestEven, Index };
  Mode mode = Mode::Ground;
  Parity parity = Parity::Even;
  int index = 0;
};

int select_state_index(const SpectralData& spec, const StateSelector& sel);
std::pair<Eigen::VectorXd, double> select_state(const SpectralData& spec, const StateSelector& sel);

double participation_ratio(const Eigen::VectorXd& components);
double participation_ratio(const Eigen::VectorXcd& components);

// m = <state| dH/dxi |state> / N with dH/dxi = (2/S)(S^2 - Sx^2) - (S + Sz).
double hf_slope(const SpectralData& spec, const StateSelector& sel);
double hf_slope(const ModelParams& params, const StateSelector& sel);

}  // namespace almg
