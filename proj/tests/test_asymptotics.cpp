#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "paeback/ar.hpp"
#include "paeback/asymptotics.hpp"
#include "paeback/error.hpp"

using namespace paeback;

namespace {

const std::vector<double> kAr5{0.5, -0.4, 0.3, -0.2, 0.1};
const std::vector<double> kAr2{-0.2446, 0.0571};

Eigen::MatrixXd companion(const std::vector<double>& phi) {
  const auto p = static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) F(0, j) = phi[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) F(i, i - 1) = 1.0;
  return F;
}

Eigen::MatrixXd power(const Eigen::MatrixXd& F, std::size_t h) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(F.rows(), F.cols());
  for (std::size_t i = 0; i < h; ++i) out = out * F;
  return out;
}

// a(h) as the first row of F^h.
Eigen::VectorXd coef_oracle(const std::vector<double>& phi, std::size_t h) {
  return power(companion(phi), h).row(0).transpose();
}

Eigen::MatrixXd fd_jacobian(const std::vector<double>& phi, std::size_t h, double step) {
  const auto p = static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd J(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    auto up = phi, down = phi;
    up[static_cast<std::size_t>(j)] += step;
    down[static_cast<std::size_t>(j)] -= step;
    J.col(j) = (coef_oracle(up, h) - coef_oracle(down, h)) / (2.0 * step);
  }
  return J;
}

// Toeplitz Gamma from truncated MA(infinity) weights.
Eigen::MatrixXd gamma_oracle(const std::vector<double>& phi, double sigma2) {
  const std::size_t p = phi.size(), L = 5000;
  std::vector<double> psi(L, 0.0);
  psi[0] = 1.0;
  for (std::size_t i = 1; i < L; ++i) {
    for (std::size_t j = 1; j <= p && j <= i; ++j) psi[i] += phi[j - 1] * psi[i - j];
  }
  Eigen::MatrixXd G(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      const std::size_t lag = a > b ? a - b : b - a;
      double g = 0.0;
      for (std::size_t i = 0; i + lag < L; ++i) g += psi[i] * psi[i + lag];
      G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = sigma2 * g;
    }
  }
  return G;
}

std::vector<double> random_stationary(std::mt19937_64& rng, std::size_t p) {
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  // Random reflection coefficients mapped to AR coefficients stay stationary.
  std::vector<double> phi;
  for (std::size_t m = 0; m < p; ++m) {
    const double k = u(rng);
    std::vector<double> next(m + 1);
    for (std::size_t i = 0; i < m; ++i) next[i] = phi[i] - k * phi[m - 1 - i];
    next[m] = k;
    phi = next;
  }
  return phi;
}

}  // namespace

TEST_SUITE("asymptotics") {
  TEST_CASE("a1 recursion examples") {
    const auto a = a1_sequence(kAr5, 4);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == doctest::Approx(0.5));
    CHECK(a[2] == doctest::Approx(-0.15));
    const auto b = a1_sequence(kAr2, 3);
    CHECK(b[2] == doctest::Approx(kAr2[0] * kAr2[0] + kAr2[1]));
    CHECK_THROWS_AS(a1_sequence(kAr5, 0), Error);
  }

  TEST_CASE("a1 recursion equals the companion-power oracle") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 100; ++rep) {
      const auto phi = random_stationary(rng, 1 + static_cast<std::size_t>(rep % 8));
      const auto F = companion(phi);
      const auto a = a1_sequence(phi, 12);
      for (std::size_t j = 0; j < 12; ++j) CHECK(std::abs(a[j] - power(F, j)(0, 0)) <= 1e-10);
    }
  }

  TEST_CASE("forecast variance") {
    CHECK(forecast_variance(std::vector<double>{0.5}, 1.0, 3) == doctest::Approx(1.3125));
    CHECK(forecast_variance(kAr5, 2.5, 1) == 2.5);
    CHECK(forecast_variance(std::vector<double>{0.0, 0.0}, 1.7, 6) == doctest::Approx(1.7));
  }

  TEST_CASE("forecast coefficients are the first row of F^h") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 40; ++rep) {
      const auto phi = random_stationary(rng, 1 + static_cast<std::size_t>(rep % 6));
      for (std::size_t h = 1; h <= 5; ++h) {
        CHECK((forecast_coefficients(phi, h) - coef_oracle(phi, h)).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }

  TEST_CASE("Jacobian M1 is the identity and M2 matches the closed form") {
    const auto M1 = coefficient_jacobian(kAr5, 1);
    CHECK((M1 - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
    const auto M2 = coefficient_jacobian(kAr5, 2);
    // Row i holds d a_i(2) / d phi; a_i(2) = phi_1 phi_i + phi_{i+1}.
    Eigen::MatrixXd want = Eigen::MatrixXd::Zero(5, 5);
    for (int i = 0; i < 5; ++i) {
      want(i, 0) += kAr5[static_cast<std::size_t>(i)];
      want(i, i) += kAr5[0];
      if (i + 1 < 5) want(i, i + 1) += 1.0;
    }
    CHECK((M2 - want).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(M2(0, 0) == doctest::Approx(2 * kAr5[0]));
    CHECK(M2(4, 0) == doctest::Approx(kAr5[4]));
    CHECK(M2(4, 4) == doctest::Approx(kAr5[0]));
  }

  TEST_CASE("Jacobian agrees with central finite differences") {
    std::mt19937_64 rng(14);
    for (std::size_t p = 1; p <= 8; ++p) {
      for (std::size_t h = 1; h <= 6; ++h) {
        const auto phi = random_stationary(rng, p);
        const auto M = coefficient_jacobian(phi, h);
        const auto fd = fd_jacobian(phi, h, 1e-6);
        CHECK((M - fd).cwiseAbs().maxCoeff() <= 1e-6);
      }
    }
  }

  TEST_CASE("theoretical gamma") {
    CHECK((theoretical_gamma(std::vector<double>{0.0, 0.0, 0.0}, 2.0) - 2.0 * Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
    const auto G1 = theoretical_gamma(std::vector<double>{0.5}, 1.0, 2);
    CHECK(G1(0, 0) == doctest::Approx(4.0 / 3.0));
    CHECK(G1(0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK((theoretical_gamma(kAr5, 1.0) - gamma_oracle(kAr5, 1.0)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK_THROWS_AS(theoretical_gamma(std::vector<double>{1.0}, 1.0), Error);
    const auto acov = theoretical_autocovariance(std::vector<double>{0.5}, 1.0, 4);
    CHECK(acov[4] == doctest::Approx(4.0 / 3.0 / 16.0));
  }

  TEST_CASE("theoretical gamma is symmetric positive definite") {
    std::mt19937_64 rng(15);
    for (int rep = 0; rep < 100; ++rep) {
      const auto phi = random_stationary(rng, 1 + static_cast<std::size_t>(rep % 8));
      const auto G = theoretical_gamma(phi, 1.0);
      CHECK((G - G.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().minCoeff() > 0.0);
    }
  }

  TEST_CASE("AR(5) gamma matches a long simulation within one percent") {
    SimSpec s;
    s.n = 1000000;
    s.seed = 606;
    s.generator = ArGenerator{ARModel{kAr5, 1.0, 0.0}};
    const auto x = simulate(s);
    const auto g = sample_autocovariance(x.values(), 4);
    const auto G = theoretical_gamma(kAr5, 1.0);
    CHECK(std::abs(g[0] / G(0, 0) - 1.0) < 0.01);
    // Off-diagonal lags are compared on the gamma(0) scale.
    for (std::size_t j = 1; j <= 4; ++j) CHECK(std::abs(g[j] - G(0, static_cast<Eigen::Index>(j))) < 0.01 * G(0, 0));
  }

  TEST_CASE("ab_ratio against an independent trace oracle") {
    for (const auto* phi : {&kAr5, &kAr2}) {
      const auto r = ab_ratio(*phi, 1.0, 3);
      const auto G = gamma_oracle(*phi, 1.0);
      const Eigen::MatrixXd Ginv = G.inverse();
      double A = 0.0, B = 0.0;
      for (std::size_t j = 1; j <= 3; ++j) {
        const auto M = fd_jacobian(*phi, j, 1e-6);
        const double tr = (M.transpose() * Ginv * M * G).trace();
        CHECK(r.traces[j - 1] == doctest::Approx(tr).epsilon(1e-6));
        B += tr;
        double s = 0.0;
        for (std::size_t i = 0; i < j; ++i) s += std::pow(power(companion(*phi), i)(0, 0), 2);
        A += s;
      }
      CHECK(r.A == doctest::Approx(A).epsilon(1e-12));
      CHECK(r.B == doctest::Approx(B).epsilon(1e-6));
      CHECK(r.ratio == doctest::Approx(A / B).epsilon(1e-6));
    }
  }

  TEST_CASE("worked-example quantities that the exact derivative reproduces") {
    const auto r5 = ab_ratio(kAr5, 1.0, 3);
    CHECK(std::abs(r5.a_numerator() - 3.5225) <= 1e-3);
    CHECK(std::abs(r5.traces[0] - 5.0) <= 1e-12);
    const auto r2 = ab_ratio(kAr2, 1.0, 3);
    CHECK(std::abs(r2.a_numerator() - 3.1334) <= 1e-3);
    CHECK(std::abs(r2.traces[0] - 2.0) <= 1e-12);
    CHECK(std::abs(r2.traces[1] - 1.4993) <= 1e-3);
    CHECK(r5.a1[0] == 1.0);
    for (std::size_t j = 1; j < r5.sigma_h2.size(); ++j) CHECK(r5.sigma_h2[j] >= r5.sigma_h2[j - 1]);
  }

  TEST_CASE("ratio properties") {
    std::mt19937_64 rng(16);
    for (int rep = 0; rep < 60; ++rep) {
      const std::size_t p = 1 + static_cast<std::size_t>(rep % 7);
      const auto phi = random_stationary(rng, p);
      const auto a = ab_ratio(phi, 1.0, 4);
      const auto b = ab_ratio(phi, 4.0, 4);
      CHECK(std::abs(a.ratio - b.ratio) <= 1e-12 * a.ratio);
      CHECK(a.traces[0] == doctest::Approx(static_cast<double>(p)).epsilon(1e-10));
      CHECK(ab_ratio(phi, 2.0, 1).ratio == doctest::Approx(1.0 / static_cast<double>(p)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(ab_ratio(std::vector<double>{}, 1.0, 2), Error);
    CHECK_THROWS_AS(ab_ratio(std::vector<double>{1.1}, 1.0, 2), Error);
  }

  TEST_CASE("asymptotic predictive ratio") {
    CHECK(asymptotic_rp(1000, 1000, 0.1525) == 1.0);
    CHECK(asymptotic_rp(300, 1000, 0.1525) == doctest::Approx(1.0 + (1000.0 / 300.0 - 1.0) / (1.0 + 152.5)));
    CHECK(std::abs(asymptotic_rp(300, 1000, 0.1525) - 1.0152) < 1e-4);
    CHECK(asymptotic_rp(500, 1000, 1e12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(asymptotic_rp(0, 1000, 0.2), Error);
    CHECK_THROWS_AS(asymptotic_rp(1001, 1000, 0.2), Error);
    for (double ab : {0.01, 0.1525, 0.8, 5.0}) {
      double prev = INFINITY;
      for (std::size_t k = 1; k <= 400; ++k) {
        const double v = asymptotic_rp(k, 400, ab);
        CHECK(v < prev);
        CHECK(v >= 1.0);
        prev = v;
      }
      CHECK(prev == 1.0);
    }
  }

  TEST_CASE("optimal subsample size") {
    CHECK(optimal_k(1000, 1e-12, 0.1525) == 1000);
    CHECK(optimal_k(1000, 2.0, 0.5) == 500);
    CHECK(std::abs(static_cast<double>(optimal_k(1000, 4.37, 0.1525)) / 1000.0 - 0.600) <= 0.002);
    CHECK(std::abs(static_cast<double>(optimal_k(1000, 15.30, 0.1525)) / 1000.0 - 0.300) <= 0.002);
    CHECK(optimal_k(10, 1e9, 1.0) == 1);
    CHECK_THROWS_AS(optimal_k(10, 0.0, 1.0), Error);
    CHECK(lambda_for_fraction(0.5, 0.5) == doctest::Approx(2.0));
    const auto irr = IrrelevancySpec::from_lambda(5.0, 1000);
    CHECK(irr.epsilon_n == doctest::Approx(0.005));
    CHECK(irr.lambda == 5.0);
  }

  TEST_CASE("AMSE closed form") {
    const auto r = ab_ratio(kAr5, 1.0, 3);
    CHECK(amse(r, 200.0) == doctest::Approx((r.A + r.B / 200.0) / 3.0));
  }

  TEST_CASE("plug-in estimate") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> z;
    std::vector<double> noise(5000);
    for (auto& v : noise) v = z(rng);
    CHECK(estimate_ab_ratio(noise, 1, 1).ratio == doctest::Approx(1.0).epsilon(1e-10));

    SimSpec s;
    s.n = 100000;
    s.seed = 5150;
    s.generator = ArGenerator{ARModel{kAr5, 1.0, 0.0}};
    const auto est = estimate_ab_ratio(simulate(s), 5, 3);
    CHECK(std::abs(est.ratio - 0.1525) < 0.01);
    CHECK(std::abs(est.ratio - ab_ratio(kAr5, 1.0, 3).ratio) < 0.01);
  }
}

TEST_SUITE("slow") {
  TEST_CASE("AMSE matches Monte Carlo forecast error at small k") {
    const std::size_t h = 3, reps = 2000;
    const auto report = ab_ratio(kAr5, 1.0, h);
    for (std::size_t k : {50u, 100u, 200u}) {
      double sum = 0.0, sum2 = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        SimSpec s;
        s.n = k + h;
        s.seed = 900000 + r;
        s.generator = ArGenerator{ARModel{kAr5, 1.0, 0.0}};
        const auto x = simulate(s);
        const auto window = x.values().first(k);
        const auto f = forecast(yule_walker_fit(window, 5), window, h);
        double e = 0.0;
        for (std::size_t j = 0; j < h; ++j) e += (x[k + j] - f[j]) * (x[k + j] - f[j]);
        e /= static_cast<double>(h);
        sum += e;
        sum2 += e * e;
      }
      const double mean = sum / reps;
      const double se = std::sqrt((sum2 / reps - mean * mean) / (reps - 1));
      INFO("k=" << k << " mean=" << mean << " se=" << se << " amse=" << amse(report, static_cast<double>(k)));
      CHECK(std::abs(mean - amse(report, static_cast<double>(k))) <= 3.0 * se);
    }
  }
}
