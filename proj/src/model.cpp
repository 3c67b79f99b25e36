#include "almg/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace almg {

void ModelParams::validate() const {
  if (N < 2 || N % 2 != 0) {
    throw InvalidInput("N must be an even integer >= 2, got " + std::to_string(N));
  }
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw InvalidInput("xi must lie in [0,1], got " + std::to_string(xi));
  }
  if (!std::isfinite(alpha)) {
    throw InvalidInput("alpha must be finite");
  }
}

int parity_of_state(int mz, int N) {
  if (N < 2 || N % 2 != 0) {
    throw InvalidInput("N must be an even integer >= 2, got " + std::to_string(N));
  }
  if (mz < -N / 2 || mz > N / 2) {
    throw InvalidInput("mz out of range for N = " + std::to_string(N));
  }
  return (N / 2 + mz) % 2 == 0 ? +1 : -1;
}

BasisU1::BasisU1(int n) : N(n) {
  if (N < 2 || N % 2 != 0) {
    throw InvalidInput("N must be an even integer >= 2, got " + std::to_string(N));
  }
  mz_values.reserve(N + 1);
  for (int mz = -N / 2; mz <= N / 2; ++mz) mz_values.push_back(mz);
}

std::vector<int> BasisU1::sector_mz(Parity p) const {
  const int want = parity_sign(p);
  std::vector<int> out;
  out.reserve(N / 2 + 1);
  for (int mz : mz_values) {
    if (parity_of(mz) == want) out.push_back(mz);
  }
  return out;
}

namespace {

double ladder_up(double S, double mz) { return std::sqrt(S * (S + 1.0) - mz * (mz + 1.0)); }

// <mz+2| Sp^2 |mz>
double sp2_element(double S, double mz) { return ladder_up(S, mz) * ladder_up(S, mz + 1.0); }

}  // namespace

ParityBlock build_block_hamiltonian(const ModelParams& params, Parity parity) {
  params.validate();
  const BasisU1 basis(params.N);
  const std::vector<int> mzs = basis.sector_mz(parity);
  const double S = params.spin();
  const double xi = params.xi;
  const double alpha = params.alpha;
  const double nn = static_cast<double>(params.N) * (params.N / 2 + 1.0);

  ParityBlock blk;
  blk.parity = parity;
  blk.dim = static_cast<int>(mzs.size());
  blk.mz = mzs;
  blk.diag.resize(blk.dim);
  blk.offdiag.resize(blk.dim > 0 ? blk.dim - 1 : 0);

  for (int k = 0; k < blk.dim; ++k) {
    const double mz = mzs[k];
    blk.diag[k] = (1.0 - xi) * (S + mz) + (2.0 * xi / S) * (S * S - 0.25 * (nn - 2.0 * mz * mz)) +
                  (alpha / (2.0 * S)) * (S + mz) * (S + mz + 1.0);
  }
  for (int k = 0; k + 1 < blk.dim; ++k) {
    blk.offdiag[k] = -(2.0 * xi / S) * 0.25 * sp2_element(S, mzs[k]);
  }
  return blk;
}

SpinOperator build_full_operator(SpinOperatorKind kind, int N, bool normalized) {
  if (N < 2 || N % 2 != 0) {
    throw InvalidInput("N must be an even integer >= 2, got " + std::to_string(N));
  }
  const int D = N + 1;
  const double S = 0.5 * N;
  SpinOperator op;
  op.mat = Eigen::MatrixXd::Zero(D, D);

  auto mz_of = [&](int i) { return static_cast<double>(i) - S; };

  switch (kind) {
    case SpinOperatorKind::Sz:
      for (int i = 0; i < D; ++i) op.mat(i, i) = mz_of(i);
      break;
    case SpinOperatorKind::Sp:
      for (int i = 0; i + 1 < D; ++i) op.mat(i + 1, i) = ladder_up(S, mz_of(i));
      break;
    case SpinOperatorKind::Sm:
      for (int i = 0; i + 1 < D; ++i) op.mat(i, i + 1) = ladder_up(S, mz_of(i));
      break;
    case SpinOperatorKind::Sx:
      for (int i = 0; i + 1 < D; ++i) {
        const double v = 0.5 * ladder_up(S, mz_of(i));
        op.mat(i + 1, i) = v;
        op.mat(i, i + 1) = v;
      }
      break;
    case SpinOperatorKind::Sy:
      // Sy = i (Sm - Sp) / 2; store the real antisymmetric factor.
      for (int i = 0; i + 1 < D; ++i) {
        const double v = 0.5 * ladder_up(S, mz_of(i));
        op.mat(i, i + 1) = v;
        op.mat(i + 1, i) = -v;
      }
      op.imag_factor = true;
      break;
    case SpinOperatorKind::Sx2:
      for (int i = 0; i < D; ++i) {
        const double mz = mz_of(i);
        op.mat(i, i) = 0.25 * (2.0 * S * (S + 1.0) - mz * (mz - 1.0) - mz * (mz + 1.0));
      }
      for (int i = 0; i + 2 < D; ++i) {
        const double v = 0.25 * sp2_element(S, mz_of(i));
        op.mat(i + 2, i) = v;
        op.mat(i, i + 2) = v;
      }
      break;
    case SpinOperatorKind::Nop:
      for (int i = 0; i < D; ++i) op.mat(i, i) = S + mz_of(i);
      break;
    case SpinOperatorKind::NopSq:
      for (int i = 0; i < D; ++i) {
        const double n = S + mz_of(i);
        op.mat(i, i) = n * (n + 1.0);
      }
      break;
    default:
      throw InvalidInput("unknown spin operator kind");
  }

  if (normalized) op.mat /= S;
  return op;
}

Eigen::MatrixXd build_dense_hamiltonian(const ModelParams& params) {
  params.validate();
  const int D = params.dim();
  const double S = params.spin();
  const Eigen::MatrixXd sx = build_full_operator(SpinOperatorKind::Sx, params.N).mat;
  const Eigen::MatrixXd nop = build_full_operator(SpinOperatorKind::Nop, params.N).mat;
  const Eigen::MatrixXd nopsq = build_full_operator(SpinOperatorKind::NopSq, params.N).mat;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(D, D);
  return (1.0 - params.xi) * nop + (2.0 * params.xi / S) * (S * S * eye - sx * sx) +
         (params.alpha / (2.0 * S)) * nopsq;
}

bool operator_is_parity_odd(SpinOperatorKind kind) {
  switch (kind) {
    case SpinOperatorKind::Sx:
    case SpinOperatorKind::Sy:
    case SpinOperatorKind::Sp:
    case SpinOperatorKind::Sm:
      return true;
    default:
      return false;
  }
}

const char* operator_name(SpinOperatorKind kind) {
  switch (kind) {
    case SpinOperatorKind::Sz: return "sz";
    case SpinOperatorKind::Sp: return "sp";
    case SpinOperatorKind::Sm: return "sm";
    case SpinOperatorKind::Sx: return "sx";
    case SpinOperatorKind::Sy: return "sy";
    case SpinOperatorKind::Sx2: return "sx2";
    case SpinOperatorKind::Nop: return "nop";
    case SpinOperatorKind::NopSq: return "nopsq";
  }
  return "unknown";
}

SpinOperatorKind operator_from_name(const std::string& name) {
  std::string s;
  s.reserve(name.size());
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "sz") return SpinOperatorKind::Sz;
  if (s == "sp" || s == "s+") return SpinOperatorKind::Sp;
  if (s == "sm" || s == "s-") return SpinOperatorKind::Sm;
  if (s == "sx") return SpinOperatorKind::Sx;
  if (s == "sy") return SpinOperatorKind::Sy;
  if (s == "sx2") return SpinOperatorKind::Sx2;
  if (s == "nop") return SpinOperatorKind::Nop;
  if (s == "nopsq") return SpinOperatorKind::NopSq;
  throw InvalidInput("unknown operator name '" + name + "'");
}

}  // namespace almg
