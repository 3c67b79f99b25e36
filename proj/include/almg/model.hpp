#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "almg/errors.hpp"

namespace almg {

// Collective-spin Hamiltonian
//   H = (1 - xi) (S + Sz) + (2 xi / S) (S^2 - Sx^2) + (alpha / 2S) (S + Sz)(S + Sz + 1)
// acting on the maximal irrep S = N/2 of N spin-1/2 sites.
struct ModelParams {
  int N = 300;
  double xi = 0.5;
  double alpha = -0.6;

  double spin() const { return 0.5 * N; }
  int dim() const { return N + 1; }
  void validate() const;
};

enum class Parity { Even, Odd };

inline int parity_sign(Parity p) { return p == Parity::Even ? +1 : -1; }
inline const char* parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }

// (-1)^(N/2 + mz)
int parity_of_state(int mz, int N);

// u(1) basis |S, Mz>, Mz = -N/2 .. N/2, dimension N+1.
struct BasisU1 {
  int N;
  std::vector<int> mz_values;

  explicit BasisU1(int n);
  int parity_of(int mz) const { return parity_of_state(mz, N); }
  int index_of(int mz) const { return mz + N / 2; }
  // Mz values of one parity sector, ascending n = S + Mz in steps of 2.
  std::vector<int> sector_mz(Parity p) const;
};

// One parity sector of H as a real symmetric tridiagonal matrix.
struct ParityBlock {
  Parity parity = Parity::Even;
  int dim = 0;
  std::vector<double> diag;
  std::vector<double> offdiag;
  std::vector<int> mz;
};

ParityBlock build_block_hamiltonian(const ModelParams& params, Parity parity);

enum class SpinOperatorKind { Sz, Sp, Sm, Sx, Sy, Sx2, Nop, NopSq };

struct OperatorSpec {
  SpinOperatorKind kind = SpinOperatorKind::Sp;
  bool normalized = true;  // divide by S
};

// Operators are stored as real matrices in the full ascending-Mz basis.
// Sy is real antisymmetric with an explicit imaginary-unit prefactor
// (the operator is i * mat) so spectral work stays in real arithmetic.
struct SpinOperator {
  Eigen::MatrixXd mat;
  bool imag_factor = false;
};

SpinOperator build_full_operator(SpinOperatorKind kind, int N, bool normalized = false);

inline SpinOperator build_full_operator(const OperatorSpec& spec, int N) {
  return build_full_operator(spec.kind, N, spec.normalized);
}

// Dense H assembled term by term from operator matrices (Sx^2 as an explicit
// matrix product); reference route independent of the tridiagonal blocks.
Eigen::MatrixXd build_dense_hamiltonian(const ModelParams& params);

bool operator_is_parity_odd(SpinOperatorKind kind);
const char* operator_name(SpinOperatorKind kind);
SpinOperatorKind operator_from_name(const std::string& name);

}  // namespace almg
