#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "almg/echo.hpp"
#include "almg/errors.hpp"
#include "almg/spectra.hpp"

using namespace almg;

TEST_CASE("zero perturbation gives a flat echo") {
  const SpectralData sd = diagonalize({60, 0.4, -0.6});
  const TimeSeries ts = loschmidt_echo(sd, sd, Parity::Even, 3, uniform_grid(30.0, 100));
  for (double M : ts.values) CHECK(std::abs(M - 1.0) <= 1e-10);
  CHECK(time_averaged_echo(sd, sd, Parity::Even, 3) >= 1.0 - 1e-10);
}

TEST_CASE("echo starts at one and stays in [0, 1]") {
  EchoSpec spec;
  spec.params = {300, 0.5, -0.6};
  spec.delta = 0.01;
  spec.parity = Parity::Even;
  spec.index = 0;
  const TimeSeries ts = loschmidt_echo(spec, uniform_grid(50.0, 500));
  CHECK(std::abs(ts.values[0] - 1.0) <= 1e-12);
  for (double M : ts.values) {
    CHECK(M >= -1e-12);
    CHECK(M <= 1.0 + 1e-12);
  }
}

TEST_CASE("cross parity overlaps vanish exactly") {
  const SpectralData base = diagonalize({40, 0.5, -0.6});
  const SpectralData pert = diagonalize({40, 0.51, -0.6});
  const int even_g = base.global_index(Parity::Even, 2);
  const int odd_g = pert.global_index(Parity::Odd, 2);
  CHECK(base.vectors.col(even_g).dot(pert.vectors.col(odd_g)) == 0.0);
}

TEST_CASE("analytic average matches the numeric long-time mean") {
  const SpectralData base = diagonalize({60, 0.3, -0.6});
  const SpectralData pert = diagonalize({60, 0.31, -0.6});
  const std::vector<double> grid = uniform_grid(1e4, 100001);
  for (int j : {0, 5, 15, 30}) {
    const TimeSeries ts = loschmidt_echo(base, pert, Parity::Even, j, grid);
    double mean = 0.0;
    for (double M : ts.values) mean += M;
    mean /= static_cast<double>(ts.values.size());
    const double analytic = time_averaged_echo(base, pert, Parity::Even, j);
    CHECK(std::abs(mean - analytic) <= 2e-3);
  }
}

TEST_CASE("sector averages agree with single-state averages") {
  const SpectralData base = diagonalize({60, 0.3, -0.6});
  const SpectralData pert = diagonalize({60, 0.31, -0.6});
  bool flag = true;
  const Eigen::VectorXd avg = time_averaged_echo_sector(base, pert, Parity::Odd, &flag);
  CHECK_FALSE(flag);
  REQUIRE(avg.size() == base.sector_dim(Parity::Odd));
  for (int j : {0, 7, 29}) {
    CHECK(std::abs(avg[j] - time_averaged_echo(base, pert, Parity::Odd, j)) <= 1e-14);
  }
}

TEST_CASE("regular versus ESQPT-irregular echo") {
  const SpectralData base = diagonalize({300, 0.3, -0.6});
  const SpectralData pert = diagonalize({300, 0.31, -0.6});
  const std::vector<double> grid = uniform_grid(50.0, 2000);

  // Ground state: weak oscillations near one.
  const TimeSeries regular = loschmidt_echo(base, pert, Parity::Even, 0, grid);
  const double regular_min = *std::min_element(regular.values.begin(), regular.values.end());
  CHECK(regular_min >= 0.8);
  CHECK(time_averaged_echo(base, pert, Parity::Even, 0) >= 0.9);

  // State near the first separatrix: deep irregular dips.
  const TimeSeries irregular = loschmidt_echo(base, pert, Parity::Even, 48, grid);
  const double irregular_min = *std::min_element(irregular.values.begin(), irregular.values.end());
  CHECK(irregular_min <= 0.01);
  CHECK(time_averaged_echo(base, pert, Parity::Even, 48) <= 0.3);
}

TEST_CASE("average echo peaks near both separatrices") {
  const SpectralData base = diagonalize({300, 0.3, -0.6});
  const SpectralData pert = diagonalize({300, 0.31, -0.6});
  bool flag = true;
  const Eigen::VectorXd avg = time_averaged_echo_sector(base, pert, Parity::Even, &flag);
  CHECK_FALSE(flag);

  std::vector<int> maxima;
  for (int j = 1; j + 1 < avg.size(); ++j) {
    if (avg[j] > avg[j - 1] && avg[j] > avg[j + 1]) maxima.push_back(j);
  }
  const std::vector<int> expected = {36, 47, 51, 102};
  for (int m : expected) {
    CHECK(std::find(maxima.begin(), maxima.end(), m) != maxima.end());
  }
  const auto near = [&](int center, int radius) {
    return std::any_of(maxima.begin(), maxima.end(),
                       [&](int m) { return std::abs(m - center) <= radius; });
  };
  CHECK(near(49, 2));    // nearest even state to eps = xi
  CHECK(near(105, 3));   // nearest even state to eps = 1 + alpha sits at 105; peak at 102
}

TEST_CASE("echo input validation") {
  const SpectralData a = diagonalize({20, 0.5, 0.0});
  const SpectralData b = diagonalize({22, 0.5, 0.0});
  const SpectralData c = diagonalize({20, 0.5, -0.1});
  CHECK_THROWS_AS(loschmidt_echo(a, b, Parity::Even, 0, uniform_grid(1.0, 5)), InvalidInput);
  CHECK_THROWS_AS(loschmidt_echo(a, c, Parity::Even, 0, uniform_grid(1.0, 5)), InvalidInput);
  CHECK_THROWS_AS(time_averaged_echo(a, a, Parity::Even, 99), InvalidInput);

  EchoSpec spec;
  spec.params = {20, 0.995, 0.0};
  spec.delta = 0.01;
  CHECK_THROWS_AS(loschmidt_echo(spec, uniform_grid(1.0, 5)), InvalidInput);
}
