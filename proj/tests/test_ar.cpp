#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "paeback/ar.hpp"
#include "paeback/error.hpp"

using namespace paeback;

namespace {

// Naive double-loop autocovariance, independent of the library routine.
std::vector<double> naive_acov(const std::vector<double>& x, std::size_t max_lag) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  std::vector<double> g(max_lag + 1, 0.0);
  for (std::size_t j = 0; j <= max_lag; ++j) {
    for (std::size_t t = 0; t + j < x.size(); ++t) g[j] += (x[t] - mean) * (x[t + j] - mean);
    g[j] /= n;
  }
  return g;
}

// Spectral radius of the companion matrix via a general eigen-solver.
double spectral_radius(const std::vector<double>& phi) {
  const auto p = static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) F(0, j) = phi[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) F(i, i - 1) = 1.0;
  return Eigen::EigenSolver<Eigen::MatrixXd>(F, false).eigenvalues().cwiseAbs().maxCoeff();
}

// MA(infinity) weights give gamma(j) = sigma2 sum_i psi_i psi_{i+j}.
std::vector<double> psi_autocovariance(const std::vector<double>& phi, double sigma2, std::size_t max_lag) {
  const std::size_t L = 4000;
  std::vector<double> psi(L, 0.0);
  psi[0] = 1.0;
  for (std::size_t i = 1; i < L; ++i) {
    for (std::size_t j = 1; j <= phi.size() && j <= i; ++j) psi[i] += phi[j - 1] * psi[i - j];
  }
  std::vector<double> g(max_lag + 1, 0.0);
  for (std::size_t j = 0; j <= max_lag; ++j) {
    for (std::size_t i = 0; i + j < L; ++i) g[j] += psi[i] * psi[i + j];
    g[j] *= sigma2;
  }
  return g;
}

const std::vector<double> kAr5{0.5, -0.4, 0.3, -0.2, 0.1};

std::vector<double> sim_ar(const std::vector<double>& phi, std::size_t n, std::uint64_t seed, double sigma2 = 1.0,
                           double mean = 0.0) {
  SimSpec s;
  s.n = n;
  s.seed = seed;
  s.generator = ArGenerator{ARModel{phi, sigma2, mean}};
  const auto ts = simulate(s);
  return {ts.values().begin(), ts.values().end()};
}

}  // namespace

TEST_SUITE("ar") {
  TEST_CASE("sample autocovariance matches the direct formula") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    std::vector<double> x(257);
    for (auto& v : x) v = z(rng) + 4.0;
    const auto got = sample_autocovariance(x, 12);
    const auto want = naive_acov(x, 12);
    for (std::size_t j = 0; j <= 12; ++j) CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-12));
    CHECK_THROWS_AS(sample_autocovariance(x, 257), Error);
  }

  TEST_CASE("sample autocovariance edge cases") {
    const std::vector<double> c(50, 3.0);
    for (double g : sample_autocovariance(c, 5)) CHECK(g == 0.0);
    std::vector<double> alt(1000);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
    const auto g = sample_autocovariance(alt, 1);
    CHECK(g[1] / g[0] == doctest::Approx(-1.0).epsilon(2e-3));
  }

  TEST_CASE("Levinson-Durbin solves the Toeplitz system") {
    const auto x = sim_ar(kAr5, 800, 42);
    const auto g = sample_autocovariance(x, 7);
    const auto lev = levinson_durbin(g);
    Eigen::MatrixXd R(7, 7);
    Eigen::VectorXd r(7);
    for (int i = 0; i < 7; ++i) {
      r(i) = g[static_cast<std::size_t>(i + 1)];
      for (int j = 0; j < 7; ++j) R(i, j) = g[static_cast<std::size_t>(std::abs(i - j))];
    }
    const Eigen::VectorXd want = R.ldlt().solve(r);
    for (int i = 0; i < 7; ++i) CHECK(lev.phi[static_cast<std::size_t>(i)] == doctest::Approx(want(i)).epsilon(1e-10));
    CHECK(lev.innovation_variance == doctest::Approx(g[0] - r.dot(want)).epsilon(1e-10));
    CHECK_THROWS_AS(levinson_durbin(std::vector<double>{0.0, 0.0}), Error);
  }

  TEST_CASE("Yule-Walker basic cases") {
    const auto x = sim_ar({0.5}, 300, 9);
    const auto m0 = yule_walker_fit(x, 0);
    CHECK(m0.phi.empty());
    CHECK(m0.sigma2 == doctest::Approx(naive_acov(x, 0)[0]));
    CHECK_THROWS_AS(yule_walker_fit(std::vector<double>(20, 1.0), 2), Error);
    CHECK_THROWS_AS(yule_walker_fit(std::vector<double>{1.0, 2.0}, 2), Error);
  }

  TEST_CASE("Yule-Walker consistency on long AR(1) and AR(5) simulations") {
    const auto m1 = yule_walker_fit(sim_ar({0.5}, 100000, 2024), 1);
    CHECK(std::abs(m1.phi[0] - 0.5) < 0.01);
    const auto m5 = yule_walker_fit(sim_ar(kAr5, 100000, 2025), 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(m5.phi[i] - kAr5[i]) < 0.02);
    CHECK(std::abs(m5.sigma2 - 1.0) < 0.02);
    const auto g = sample_autocovariance(sim_ar({0.5}, 100000, 77), 1);
    CHECK(std::abs(g[1] / g[0] - 0.5) < 0.05);
  }

  TEST_CASE("Yule-Walker output is always stationary") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> z;
    std::uniform_int_distribution<int> len(8, 120);
    for (int rep = 0; rep < 300; ++rep) {
      const std::size_t n = static_cast<std::size_t>(len(rng));
      std::vector<double> x(n);
      // Mix of noise, random walks and trends: the fit must stay stationary.
      double acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        acc += z(rng);
        x[t] = rep % 3 == 0 ? z(rng) : rep % 3 == 1 ? acc : static_cast<double>(t) + 0.01 * z(rng);
      }
      const std::size_t p = 1 + static_cast<std::size_t>(rep) % std::min<std::size_t>(n - 1, 10);
      const auto m = yule_walker_fit(x, p);
      CHECK(is_stationary(m.phi));
      CHECK(spectral_radius(m.phi) < 1.0);
    }
  }

  TEST_CASE("stationarity examples") {
    CHECK(is_stationary(std::vector<double>{0.5}));
    CHECK_FALSE(is_stationary(std::vector<double>{1.0}));
    CHECK_FALSE(is_stationary(std::vector<double>{-1.0}));
    CHECK(is_stationary(kAr5));
    CHECK(is_stationary(std::vector<double>{}));
    CHECK_FALSE(is_stationary(std::vector<double>{0.5, 0.5}));
    CHECK_FALSE(is_stationary(std::vector<double>{NAN}));
  }

  TEST_CASE("stationarity agrees with the companion eigenvalue oracle") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.3, 1.3);
    int agree = 0, total = 0;
    for (int rep = 0; rep < 2000; ++rep) {
      std::vector<double> phi(1 + static_cast<std::size_t>(rep % 6));
      for (auto& v : phi) v = u(rng) / static_cast<double>(phi.size()) * 2.0;
      const double rho = spectral_radius(phi);
      if (std::abs(rho - 1.0) < 1e-9) continue;
      ++total;
      if (is_stationary(phi) == (rho < 1.0)) ++agree;
    }
    CHECK(agree == total);
  }

  TEST_CASE("forecast examples") {
    const ARModel m1{{0.5}, 1.0, 0.0};
    const auto f = forecast(m1, std::vector<double>{7.0, 2.0}, 3);
    CHECK(f == std::vector<double>{1.0, 0.5, 0.25});
    const ARModel m2{{0.5, 0.25}, 1.0, 0.0};
    const auto f2 = forecast(m2, std::vector<double>{1.0, 2.0}, 2);
    CHECK(f2[0] == doctest::Approx(1.25));
    CHECK(f2[1] == doctest::Approx(1.125));
    const ARModel m3{{0.3, -0.2, 0.1}, 1.0, 5.0};
    for (double v : forecast(m3, std::vector<double>{5.0, 5.0, 5.0}, 6)) CHECK(v == 5.0);
    CHECK_THROWS_AS(forecast(m3, std::vector<double>{1.0}, 2), Error);
    CHECK_THROWS_AS(forecast(m3, std::vector<double>{1.0, 2.0, 3.0}, 0), Error);
    const ARModel white{{}, 1.0, 2.0};
    CHECK(forecast(white, std::vector<double>{}, 2) == std::vector<double>{2.0, 2.0});
  }

  TEST_CASE("one-step forecast is the inner product with the last p de-meaned values") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    for (int rep = 0; rep < 50; ++rep) {
      ARModel m{{z(rng) * 0.3, z(rng) * 0.3, z(rng) * 0.3}, 1.0, z(rng)};
      std::vector<double> hist(10);
      for (auto& v : hist) v = z(rng);
      double want = m.mean;
      for (std::size_t i = 0; i < 3; ++i) want += m.phi[i] * (hist[hist.size() - 1 - i] - m.mean);
      CHECK(forecast(m, hist, 1)[0] == doctest::Approx(want).epsilon(1e-14));
    }
  }

  TEST_CASE("threshold AR regimes with zero innovations") {
    const std::vector<double> zero{0.0};
    CHECK(simulate_path(Tar1Generator{}, std::vector<double>{0.0}, zero)[0] == 0.0);
    CHECK(simulate_path(Tar1Generator{}, std::vector<double>{-1.0}, zero)[0] == doctest::Approx(0.04));
    CHECK(simulate_path(Tar1Generator{}, std::vector<double>{-0.2}, zero)[0] == doctest::Approx(-0.16));
    CHECK(simulate_path(Tar1Generator{}, std::vector<double>{1.0}, zero)[0] == doctest::Approx(0.8));
  }

  TEST_CASE("AR path recursion") {
    const ArGenerator g{ARModel{{0.5, 0.25}, 1.0, 10.0}};
    const auto path = simulate_path(g, std::vector<double>{11.0, 12.0}, std::vector<double>{0.0, 1.0});
    CHECK(path[0] == doctest::Approx(10.0 + 0.5 * 2.0 + 0.25 * 1.0));
    CHECK(path[1] == doctest::Approx(10.0 + 0.5 * 1.25 + 0.25 * 2.0 + 1.0));
  }

  TEST_CASE("simulation is reproducible and seed-sensitive") {
    SimSpec s;
    s.n = 200;
    s.seed = 7;
    const auto a = simulate(s);
    const auto b = simulate(s);
    REQUIRE(a.size() == 200);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    s.seed = 8;
    CHECK(simulate(s)[0] != a[0]);
    s.generator = ArGenerator{ARModel{{1.2}, 1.0, 0.0}};
    CHECK_THROWS_AS(simulate(s), Error);
    s.n = 0;
    CHECK_THROWS_AS(simulate(s), Error);
  }

  TEST_CASE("long AR(5) simulation matches theoretical mean and variance") {
    const std::size_t n = 100000;
    const auto x = sim_ar(kAr5, n, 31337, 2.0, 3.0);
    const auto g = psi_autocovariance(kAr5, 2.0, 200);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    // Var(mean) = (1/n) sum_j gamma(j); Var(gamma0_hat) ~ (2/n) sum_j gamma(j)^2 (Gaussian).
    double long_run = g[0], sq = g[0] * g[0];
    for (std::size_t j = 1; j <= 200; ++j) {
      long_run += 2.0 * g[j];
      sq += 2.0 * g[j] * g[j];
    }
    CHECK(std::abs(mean - 3.0) < 3.0 * std::sqrt(long_run / n));
    CHECK(std::abs(naive_acov(x, 0)[0] - g[0]) < 3.0 * std::sqrt(2.0 * sq / n));
  }
}
