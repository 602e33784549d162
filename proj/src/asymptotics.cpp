#include "paeback/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paeback/ar.hpp"
#include "paeback/error.hpp"

namespace paeback {

IrrelevancySpec IrrelevancySpec::from_lambda(double lambda, std::size_t n) {
  require(lambda > 0.0, "lambda must be positive");
  require(n >= 1, "n must be >= 1");
  return {lambda / static_cast<double>(n), lambda};
}

Eigen::MatrixXd companion_matrix(std::span<const double> phi) {
  const auto p = static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) F(0, j) = phi[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) F(i, i - 1) = 1.0;
  return F;
}

std::vector<double> a1_sequence(std::span<const double> phi, std::size_t h) {
  require(h >= 1, "horizon must be >= 1");
  std::vector<double> a(h, 0.0);
  a[0] = 1.0;
  for (std::size_t j = 1; j < h; ++j) {
    double v = 0.0;
    for (std::size_t i = 1; i <= phi.size() && i <= j; ++i) v += phi[i - 1] * a[j - i];
    a[j] = v;
  }
  return a;
}

double forecast_variance(std::span<const double> phi, double sigma2, std::size_t h) {
  require(sigma2 > 0.0, "innovation variance must be positive");
  double s = 0.0;
  for (double v : a1_sequence(phi, h)) s += v * v;
  return sigma2 * s;
}

Eigen::VectorXd forecast_coefficients(std::span<const double> phi, std::size_t h) {
  require(h >= 1, "horizon must be >= 1");
  const Eigen::MatrixXd F = companion_matrix(phi);
  Eigen::RowVectorXd row = F.row(0);
  for (std::size_t s = 1; s < h; ++s) row = row * F;
  return row.transpose();
}

Eigen::MatrixXd coefficient_jacobian(std::span<const double> phi, std::size_t h) {
  require(h >= 1, "horizon must be >= 1");
  require(!phi.empty(), "Jacobian needs order p >= 1");
  const auto p = static_cast<Eigen::Index>(phi.size());
  const Eigen::MatrixXd F = companion_matrix(phi);
  const auto a1 = a1_sequence(phi, h);

  // a(h)' = e1' F^h and dF/dphi_j = e1 e_j', so
  //   d a(h)' / d phi_j = sum_{i<h} (e1' F^i e1) e_j' F^{h-1-i} = sum_i a1(i) row_j(F^{h-1-i}).
  std::vector<Eigen::MatrixXd> powers(h);
  powers[0] = Eigen::MatrixXd::Identity(p, p);
  for (std::size_t s = 1; s < h; ++s) powers[s] = powers[s - 1] * F;

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t i = 0; i < h; ++i) M += a1[i] * powers[h - 1 - i].transpose();
  return M;
}

std::vector<double> theoretical_autocovariance(std::span<const double> phi, double sigma2, std::size_t max_lag) {
  require(sigma2 > 0.0, "innovation variance must be positive");
  if (!is_stationary(phi)) fail(ErrorCode::NotStationary, "AR coefficients are not stationary");
  const std::size_t p = phi.size();

  // gamma(k) - sum_i phi_i gamma(|k-i|) = sigma2 * [k == 0], k = 0..p.
  const auto dim = static_cast<Eigen::Index>(p + 1);
  Eigen::MatrixXd S = Eigen::MatrixXd::Identity(dim, dim);
  for (std::size_t k = 0; k <= p; ++k) {
    for (std::size_t i = 1; i <= p; ++i) {
      const std::size_t lag = k >= i ? k - i : i - k;
      S(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(lag)) -= phi[i - 1];
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  rhs(0) = sigma2;
  const Eigen::VectorXd g = S.fullPivLu().solve(rhs);

  std::vector<double> gamma(std::max(max_lag, p) + 1, 0.0);
  for (std::size_t k = 0; k <= p; ++k) gamma[k] = g(static_cast<Eigen::Index>(k));
  for (std::size_t k = p + 1; k < gamma.size(); ++k) {
    double v = 0.0;
    for (std::size_t i = 1; i <= p; ++i) v += phi[i - 1] * gamma[k - i];
    gamma[k] = v;
  }
  gamma.resize(max_lag + 1);
  return gamma;
}

Eigen::MatrixXd theoretical_gamma(std::span<const double> phi, double sigma2) {
  return theoretical_gamma(phi, sigma2, phi.size());
}

Eigen::MatrixXd theoretical_gamma(std::span<const double> phi, double sigma2, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (dim == 0) {
    // Still validates the arguments.
    theoretical_autocovariance(phi, sigma2, 0);
    return Eigen::MatrixXd(0, 0);
  }
  const auto gamma = theoretical_autocovariance(phi, sigma2, dim - 1);
  Eigen::MatrixXd G(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) G(i, j) = gamma[static_cast<std::size_t>(std::abs(i - j))];
  }
  return G;
}

AsymptoticReport ab_ratio(std::span<const double> phi, double sigma2, std::size_t h) {
  require(h >= 1, "horizon must be >= 1");
  require(!phi.empty(), "A/B needs order p >= 1");
  const Eigen::MatrixXd G = theoretical_gamma(phi, sigma2);
  const Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) fail(ErrorCode::Singular, "autocovariance matrix is not positive definite");

  AsymptoticReport r;
  r.phi.assign(phi.begin(), phi.end());
  r.sigma2 = sigma2;
  r.h = h;
  r.a1 = a1_sequence(phi, h);

  double cumulative = 0.0;
  for (std::size_t j = 1; j <= h; ++j) {
    cumulative += r.a1[j - 1] * r.a1[j - 1];
    r.sigma_h2.push_back(sigma2 * cumulative);

    const Eigen::MatrixXd M = coefficient_jacobian(phi, j);
    const Eigen::MatrixXd GinvM = llt.solve(M);
    r.traces.push_back((M.transpose() * GinvM * G).trace());
  }
  for (double s : r.sigma_h2) r.A += s;
  double tr_sum = 0.0;
  for (double t : r.traces) tr_sum += t;
  r.B = sigma2 * tr_sum;
  r.ratio = r.A / r.B;
  return r;
}

AsymptoticReport estimate_ab_ratio(std::span<const double> series, std::size_t p, std::size_t h) {
  const ARModel fit = yule_walker_fit(series, p);
  return ab_ratio(fit.phi, fit.sigma2, h);
}

double asymptotic_rp(std::size_t k, std::size_t n, double ab) {
  require(k >= 1 && k <= n, "k must satisfy 1 <= k <= n");
  require(ab >= 0.0, "A/B must be nonnegative");
  if (std::isinf(ab)) return 1.0;
  const double nd = static_cast<double>(n);
  return 1.0 + (nd / static_cast<double>(k) - 1.0) / (1.0 + nd * ab);
}

double amse(const AsymptoticReport& report, double k) {
  require(k > 0.0, "k must be positive");
  return (report.A + report.B / k) / static_cast<double>(report.h);
}

std::size_t optimal_k(std::size_t n, double lambda, double ab) {
  require(n >= 1, "n must be >= 1");
  require(lambda > 0.0, "lambda must be positive");
  require(ab >= 0.0, "A/B must be nonnegative");
  const double k = std::ceil(static_cast<double>(n) / (1.0 + lambda * ab));
  return static_cast<std::size_t>(std::clamp(k, 1.0, static_cast<double>(n)));
}

double lambda_for_fraction(double fraction, double ab) {
  require(fraction > 0.0 && fraction <= 1.0, "fraction must lie in (0, 1]");
  require(ab > 0.0, "A/B must be positive");
  return (1.0 / fraction - 1.0) / ab;
}

}  // namespace paeback
