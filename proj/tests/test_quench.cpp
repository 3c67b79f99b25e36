#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "almg/errors.hpp"
#include "almg/model.hpp"
#include "almg/quench.hpp"
#include "almg/spectra.hpp"

using namespace almg;

TEST_CASE("uniform grid endpoints") {
  const std::vector<double> g = uniform_grid(50.0, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 25.0);
  CHECK(g[2] == 50.0);
  CHECK_THROWS_AS(uniform_grid(-1.0, 3), InvalidInput);
  CHECK_THROWS_AS(uniform_grid(10.0, 1), InvalidInput);
}

TEST_CASE("trivial quench leaves the state invariant") {
  QuenchSpec spec;
  spec.N = 60;
  spec.alpha = -0.6;
  spec.xi1 = 0.4;
  spec.xi2 = 0.4;
  const Ldos ldos = quench_coefficients(spec);
  CHECK(std::abs(ldos.weights.maxCoeff() - 1.0) <= 1e-12);
  CHECK(ldos.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  const TimeSeries ts = survival_probability(ldos, uniform_grid(20.0, 50));
  for (double F : ts.values) CHECK(std::abs(F - 1.0) <= 1e-12);
}

TEST_CASE("weights are a normalized distribution on the initial parity sector") {
  QuenchSpec spec;
  spec.N = 300;
  spec.alpha = -0.6;
  spec.xi1 = 0.6;
  spec.xi2 = 0.5;
  const Ldos ldos = quench_coefficients(spec);
  CHECK(std::abs(ldos.weights.sum() - 1.0) <= 1e-12);
  CHECK(ldos.initial_parity == +1);
  for (int j = 0; j < ldos.weights.size(); ++j) {
    if (ldos.parities[j] != ldos.initial_parity) CHECK(ldos.weights[j] == 0.0);
    CHECK(ldos.weights[j] >= 0.0);
  }
  const TimeSeries ts = survival_probability(ldos, uniform_grid(50.0, 10));
  CHECK(std::abs(ts.values[0] - 1.0) <= 1e-12);
}

TEST_CASE("phase sum equals direct propagation") {
  const ModelParams pre_params{60, 0.6, -0.6};
  const ModelParams post_params{60, 0.3, -0.6};
  const SpectralData pre = diagonalize(pre_params);
  const SpectralData post = diagonalize(post_params);
  const Ldos ldos = quench_coefficients(pre, post, StateSelector{});

  const Eigen::VectorXd v0 = pre.vectors.col(select_state_index(pre, StateSelector{}));
  const Eigen::MatrixXd H = build_dense_hamiltonian(post_params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  REQUIRE(es.info() == Eigen::Success);
  const Eigen::VectorXd c = es.eigenvectors().transpose() * v0;

  const std::vector<double> grid = uniform_grid(50.0, 200);
  const TimeSeries ts = survival_probability(ldos, grid);
  for (size_t i = 0; i < grid.size(); ++i) {
    std::complex<double> amp(0.0, 0.0);
    for (int k = 0; k < c.size(); ++k) {
      amp += c[k] * c[k] * std::exp(std::complex<double>(0.0, -es.eigenvalues()[k] * grid[i]));
    }
    CHECK(std::abs(ts.values[i] - std::norm(amp)) <= 1e-10);
  }
}

TEST_CASE("window mean matches Simpson quadrature") {
  QuenchSpec spec;
  spec.N = 60;
  spec.alpha = -0.6;
  spec.xi1 = 0.6;
  spec.xi2 = 0.3;
  const Ldos ldos = quench_coefficients(spec);
  const double exact = mean_survival(ldos, 0.0, 5.0);

  const int n = 20001;
  const std::vector<double> grid = uniform_grid(5.0, n);
  const TimeSeries ts = survival_probability(ldos, grid);
  double simpson = ts.values.front() + ts.values.back();
  for (int i = 1; i + 1 < n; ++i) simpson += ts.values[i] * (i % 2 == 1 ? 4.0 : 2.0);
  simpson *= (5.0 / (n - 1)) / 3.0 / 5.0;
  CHECK(std::abs(exact - simpson) <= 1e-9);

  CHECK_THROWS_AS(mean_survival(ldos, 5.0, 5.0), InvalidInput);
}

TEST_CASE("tangent intersections") {
  // Hand case: tangent from (0.6, 0.18) with slope -0.4 meets eps = xi at
  // xi = (m xi1 - eps1)/(m - 1) = (-0.24 - 0.18)/(-1.4) = 0.3.
  CHECK(std::abs(tangent_intersection_c1(-0.4, 0.18, 0.6) - 0.3) <= 1e-12);
  // Flat line: xi = xi1 + (eps0 - eps1)/m2.
  CHECK(std::abs(tangent_intersection_c2(0.75, 0.7, 0.7, 0.4) - (0.7 - 0.3 / 0.75)) <= 1e-12);
  CHECK(std::abs(tangent_intersection_c2(0.75, 0.4, 0.7, 0.4) - 0.7) <= 1e-12);

  CHECK_THROWS_AS(tangent_intersection_c1(1.0, 0.2, 0.6), NumericError);
  CHECK_THROWS_AS(tangent_intersection_c1(2.0, 5.0, 0.5), NumericError);
  CHECK_THROWS_AS(tangent_intersection_c2(0.0, 0.2, 0.6, 0.4), NumericError);
}

TEST_CASE("critical quench values") {
  CHECK(std::abs(critical_xi_from_ground(0.0, 0.6, 300) - 0.299878) <= 1e-6);
  CHECK(std::abs(critical_xi_from_ground(-0.6, 0.6, 300) - 0.239012) <= 1e-6);
  CHECK(std::abs(critical_xi_from_highest(-0.6, 0.7, 300, 0.4) - 0.254619) <= 1e-6);
  // alpha = 0 leaves no flat separatrix; the construction still returns a number.
  CHECK(std::isfinite(critical_xi_from_highest(0.0, 0.6, 300, 1.0)));
}

TEST_CASE("survival collapse at the critical quench") {
  const double xc = critical_xi_from_ground(0.0, 0.6, 300);
  QuenchSpec spec;
  spec.N = 300;
  spec.alpha = 0.0;
  spec.xi1 = 0.6;
  spec.xi2 = xc;
  const Ldos ldos = quench_coefficients(spec);
  const double mean = mean_survival(ldos, 20.0, 200.0);
  CHECK(std::abs(mean - 0.04248) <= 1e-4);
  // A revival near 0.27 keeps the strict collapse test negative here.
  CHECK_FALSE(collapse_detected(ldos, 20.0, 200.0));

  const double xc3 = critical_xi_from_highest(-0.6, 0.7, 300, 0.4);
  QuenchSpec spec3;
  spec3.N = 300;
  spec3.alpha = -0.6;
  spec3.xi1 = 0.7;
  spec3.xi2 = xc3;
  spec3.initial.mode = StateSelector::Mode::HighestEven;
  const Ldos ldos3 = quench_coefficients(spec3);
  CHECK(std::abs(mean_survival(ldos3, 20.0, 200.0) - 0.02508) <= 1e-4);
  CHECK(collapse_detected(ldos3, 20.0, 200.0));

  QuenchSpec mild;
  mild.N = 300;
  mild.alpha = 0.0;
  mild.xi1 = 0.6;
  mild.xi2 = 0.55;
  CHECK_FALSE(collapse_detected(quench_coefficients(mild), 20.0, 200.0));
}

TEST_CASE("LDOS dip at the critical energy") {
  const double xc = critical_xi_from_ground(-0.6, 0.6, 300);
  QuenchSpec spec;
  spec.N = 300;
  spec.alpha = -0.6;
  spec.xi1 = 0.6;
  spec.xi2 = xc;
  const SpectralData pre = diagonalize({300, 0.6, -0.6});
  const SpectralData post = diagonalize({300, xc, -0.6});
  const Ldos ldos = quench_coefficients(pre, post, StateSelector{});

  // Even-sector weights indexed by sector position.
  std::vector<double> w;
  for (int g : post.even_states) w.push_back(ldos.weights[g]);
  const int star = post.sector_index[post.nearest_state(xc, +1)];
  CHECK(star == 20);

  int jmin = star;
  for (int j = star - 3; j <= star + 3; ++j) {
    if (w[j] < w[jmin]) jmin = j;
  }
  CHECK(jmin == 19);
  CHECK(std::abs(w[jmin] - 4.927e-2) <= 1e-4);
  CHECK(w[jmin] > 1e-8);

  int lo = jmin - 1;
  while (lo > 0 && !(w[lo] > w[lo - 1] && w[lo] > w[lo + 1])) --lo;
  int hi = jmin + 1;
  while (hi + 1 < static_cast<int>(w.size()) && !(w[hi] > w[hi - 1] && w[hi] > w[hi + 1])) ++hi;
  CHECK(lo == 16);
  CHECK(hi == 22);
  CHECK(std::abs(w[lo] - 6.391e-2) <= 1e-4);
  CHECK(std::abs(w[hi] - 7.360e-2) <= 1e-4);
  CHECK(w[lo] > w[jmin]);
  CHECK(w[hi] > w[jmin]);
}

TEST_CASE("quench input validation") {
  const SpectralData a = diagonalize({20, 0.5, 0.0});
  const SpectralData b = diagonalize({22, 0.5, 0.0});
  CHECK_THROWS_AS(quench_coefficients(a, b, StateSelector{}), InvalidInput);
  const Ldos ldos = quench_coefficients(a, a, StateSelector{});
  CHECK_THROWS_AS(survival_probability(ldos, {}), InvalidInput);
  CHECK_THROWS_AS(survival_probability(ldos, {1.0, 0.5}), InvalidInput);
}
