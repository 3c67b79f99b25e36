#include "almg/otoc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <mutex>
#include <thread>

namespace almg {

namespace {

using Cplx = std::complex<double>;

Eigen::VectorXcd phases(const Eigen::VectorXd& energies, double t) {
  Eigen::VectorXcd ph(energies.size());
  for (int a = 0; a < energies.size(); ++a) {
    ph[a] = std::exp(Cplx(0.0, -energies[a] * t));
  }
  return ph;
}

template <typename Mat>
Eigen::VectorXcd real_mat_cvec(const Mat& m, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out(m.rows());
  out.real() = m * v.real();
  out.imag() = m * v.imag();
  return out;
}

void check_state(const SpectralData& sd, int n_global) {
  if (n_global < 0 || n_global >= sd.dim()) {
    throw InvalidInput("eigenstate index " + std::to_string(n_global) + " out of range");
  }
}

// F_n(t) = Re e^{iE_n t} sum_a W_an e^{-iE_a t} [V^T (e^{iE t} o (W (e^{-iE t} o V_:n)))]_a
double f_from_phases(const SpectralData& sd, const Eigen::MatrixXd& Wm, const Eigen::MatrixXd& Vm,
                     int n, const Eigen::VectorXcd& ph, Eigen::VectorXcd& s) {
  const int D = sd.dim();
  s.resize(D);
  for (int a = 0; a < D; ++a) s[a] = ph[a] * Vm(a, n);
  Eigen::VectorXcd y = real_mat_cvec(Wm, s);
  y.array() *= ph.conjugate().array();
  const Eigen::VectorXcd z = real_mat_cvec(Vm.transpose(), y);
  Cplx g(0.0, 0.0);
  for (int a = 0; a < D; ++a) g += Wm(a, n) * ph[a] * z[a];
  return (std::conj(ph[n]) * g).real();
}

}  // namespace

EigenOperator to_eigenbasis(const SpectralData& sd, const SpinOperator& op) {
  if (op.mat.rows() != sd.dim() || op.mat.cols() != sd.dim()) {
    throw InvalidInput("operator dimension does not match the spectrum");
  }
  EigenOperator out;
  out.mat = sd.vectors.transpose() * op.mat * sd.vectors;
  out.imag_factor = op.imag_factor;
  return out;
}

double otoc_f_at(const SpectralData& sd, const EigenOperator& W, const EigenOperator& V,
                 int n_global, double t) {
  check_state(sd, n_global);
  const Eigen::VectorXcd ph = phases(sd.energies, t);
  Eigen::VectorXcd scratch;
  return f_from_phases(sd, W.mat, V.mat, n_global, ph, scratch);
}

void otoc_fca_at(const SpectralData& sd, const EigenOperator& W, const EigenOperator& V,
                 const Eigen::MatrixXd& WtW, const Eigen::MatrixXd& VtV, int n_global, double t,
                 double& f, double& c, double& a) {
  check_state(sd, n_global);
  const int D = sd.dim();
  const Eigen::VectorXcd ph = phases(sd.energies, t);
  Eigen::VectorXcd s;
  f = f_from_phases(sd, W.mat, V.mat, n_global, ph, s);

  // A = <n|W^dag(t) V^dag V W(t)|n> + <n|V^dag W^dag(t) W(t) V|n>
  Eigen::VectorXd ure(D), uim(D);
  for (int k = 0; k < D; ++k) {
    const Cplx u = std::conj(ph[k]) * W.mat(k, n_global);
    ure[k] = u.real();
    uim[k] = u.imag();
  }
  const double a1 = ure.dot(VtV * ure) + uim.dot(VtV * uim);
  const Eigen::VectorXd sre = s.real();
  const Eigen::VectorXd sim = s.imag();
  const double a2 = sre.dot(WtW * sre) + sim.dot(WtW * sim);
  a = a1 + a2;
  c = a - 2.0 * f;
}

OtocSeries microcanonical_otoc(const SpectralData& sd, const EigenOperator& W,
                               const EigenOperator& V, int n_global,
                               const std::vector<double>& times) {
  if (times.empty()) throw InvalidInput("empty time grid");
  check_state(sd, n_global);
  OtocSeries out;
  out.times = times;
  out.f_values.resize(times.size());
  Eigen::VectorXcd scratch;
  for (size_t i = 0; i < times.size(); ++i) {
    const Eigen::VectorXcd ph = phases(sd.energies, times[i]);
    out.f_values[i] = f_from_phases(sd, W.mat, V.mat, n_global, ph, scratch);
  }
  return out;
}

OtocSeries squared_commutator(const SpectralData& sd, const EigenOperator& W,
                              const EigenOperator& V, int n_global,
                              const std::vector<double>& times) {
  if (times.empty()) throw InvalidInput("empty time grid");
  check_state(sd, n_global);
  const Eigen::MatrixXd WtW = W.mat.transpose() * W.mat;
  const Eigen::MatrixXd VtV = V.mat.transpose() * V.mat;
  OtocSeries out;
  out.times = times;
  out.f_values.resize(times.size());
  out.c_values.resize(times.size());
  out.a_values.resize(times.size());
  for (size_t i = 0; i < times.size(); ++i) {
    otoc_fca_at(sd, W, V, WtW, VtV, n_global, times[i], out.f_values[i], out.c_values[i],
                out.a_values[i]);
  }
  return out;
}

namespace {

struct RequestContext {
  SpectralData sd;
  EigenOperator W;
  EigenOperator V;
  int n_global;
};

RequestContext prepare(const OtocRequest& req) {
  req.spec.validate();
  RequestContext ctx;
  ctx.sd = diagonalize(req.spec);
  ctx.W = to_eigenbasis(ctx.sd, build_full_operator(req.W, req.spec.N));
  ctx.V = to_eigenbasis(ctx.sd, build_full_operator(req.V, req.spec.N));
  ctx.n_global = ctx.sd.global_index(req.parity, req.index);
  return ctx;
}

}  // namespace

OtocSeries microcanonical_otoc(const OtocRequest& req) {
  const RequestContext ctx = prepare(req);
  return microcanonical_otoc(ctx.sd, ctx.W, ctx.V, ctx.n_global, req.times);
}

OtocSeries squared_commutator(const OtocRequest& req) {
  const RequestContext ctx = prepare(req);
  return squared_commutator(ctx.sd, ctx.W, ctx.V, ctx.n_global, req.times);
}

double steady_state_otoc(const SpectralData& sd, const EigenOperator& W, const EigenOperator& V,
                         int n_global, double horizon, int samples) {
  if (!(horizon > 0.0)) throw InvalidInput("horizon must be positive");
  if (samples < 1000) throw InvalidInput("samples must be at least 1000");
  check_state(sd, n_global);
  double acc = 0.0;
  Eigen::VectorXcd scratch;
  for (int k = 0; k < samples; ++k) {
    const double t = horizon * k / (samples - 1);
    const Eigen::VectorXcd ph = phases(sd.energies, t);
    acc += f_from_phases(sd, W.mat, V.mat, n_global, ph, scratch);
  }
  return acc / samples;
}

double steady_state_otoc(const OtocRequest& req, double horizon, int samples) {
  const RequestContext ctx = prepare(req);
  return steady_state_otoc(ctx.sd, ctx.W, ctx.V, ctx.n_global, horizon, samples);
}

GapTable GapTable::build(const Eigen::VectorXd& energies) {
  const int D = static_cast<int>(energies.size());
  GapTable table;
  table.tol = 1e-9 * energies.cwiseAbs().maxCoeff();
  std::vector<std::pair<double, int>> flat;
  flat.reserve(static_cast<size_t>(D) * D);
  for (int a = 0; a < D; ++a) {
    for (int b = 0; b < D; ++b) {
      flat.emplace_back(energies[a] - energies[b], a * D + b);
    }
  }
  std::sort(flat.begin(), flat.end());
  table.gaps.resize(flat.size());
  table.pair_a.resize(flat.size());
  table.pair_b.resize(flat.size());
  for (size_t i = 0; i < flat.size(); ++i) {
    table.gaps[i] = flat[i].first;
    table.pair_a[i] = flat[i].second / D;
    table.pair_b[i] = flat[i].second % D;
  }
  return table;
}

double steady_state_analytic(const GapTable& table, const Eigen::VectorXd& energies,
                             const Eigen::MatrixXd& Wp, const Eigen::MatrixXd& Vp, int n_global) {
  const int D = static_cast<int>(energies.size());
  if (n_global < 0 || n_global >= D) {
    throw InvalidInput("eigenstate index " + std::to_string(n_global) + " out of range");
  }
  double sum = 0.0;
  for (int c = 0; c < D; ++c) {
    const double vcn = Vp(c, n_global);
    if (vcn == 0.0) continue;
    const double target = energies[n_global] - energies[c];
    const auto lo = std::lower_bound(table.gaps.begin(), table.gaps.end(), target - table.tol);
    for (size_t i = static_cast<size_t>(lo - table.gaps.begin());
         i < table.gaps.size() && table.gaps[i] <= target + table.tol; ++i) {
      const int a = table.pair_a[i];
      const int b = table.pair_b[i];
      const double wan = Wp(a, n_global);
      if (wan == 0.0) continue;
      sum += wan * Vp(b, a) * Wp(b, c) * vcn;
    }
  }
  return sum;
}

double steady_state_analytic(const SpectralData& sd, const EigenOperator& W,
                             const EigenOperator& V, int n_global) {
  const GapTable table = GapTable::build(sd.energies);
  return steady_state_analytic(table, sd.energies, W.mat, V.mat, n_global);
}

std::vector<DiagramRow> correlation_diagram(int N, double alpha, const std::vector<double>& xi_grid,
                                            const OperatorSpec& W, const OperatorSpec& V,
                                            int threads) {
  if (xi_grid.empty()) throw InvalidInput("empty xi grid");
  const SpinOperator Wop = build_full_operator(W, N);
  const SpinOperator Vop = build_full_operator(V, N);
  const int D = N + 1;
  std::vector<DiagramRow> rows(xi_grid.size() * static_cast<size_t>(D));

  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(xi_grid.size()));

  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;

  auto work = [&]() {
    try {
      while (true) {
        const size_t g = next.fetch_add(1);
        if (g >= xi_grid.size()) break;
        ModelParams p{N, xi_grid[g], alpha};
        const SpectralData sd = diagonalize(p);
        const EigenOperator Wp = to_eigenbasis(sd, Wop);
        const EigenOperator Vp = to_eigenbasis(sd, Vop);
        const GapTable table = GapTable::build(sd.energies);
        for (int n = 0; n < D; ++n) {
          rows[g * D + n] =
              DiagramRow{xi_grid[g], n, sd.energies[n], sd.eps[n], sd.parities[n],
                         steady_state_analytic(table, sd.energies, Wp.mat, Vp.mat, n)};
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!err) err = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return rows;
}

}  // namespace almg
