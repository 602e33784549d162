#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "paeback/series.hpp"

namespace paeback {

/// Large-sample forecast-error constants of a stationary AR(p) model with
/// Yule-Walker plug-in coefficients fitted on k observations:
///   AMSE(k) = (A + B / k) / h,
///   A = sum_{j=1..h} sigma_j^2,  B = sigma^2 sum_{j=1..h} tr(M_j' Gamma^-1 M_j Gamma).
struct AsymptoticReport {
  std::vector<double> phi;
  double sigma2 = 1.0;
  std::size_t h = 0;
  std::vector<double> a1;        // a1(0..h-1)
  std::vector<double> sigma_h2;  // sigma_j^2, j = 1..h
  std::vector<double> traces;    // tr_j, j = 1..h
  double A = 0.0;
  double B = 0.0;
  double ratio = 0.0;  // A / B, free of sigma2

  /// A / sigma2: the double sum of squared a1 coefficients.
  double a_numerator() const { return A / sigma2; }
  double trace_sum() const { return B / sigma2; }
};

/// Tolerated relative efficiency loss and its scaled limit n * epsilon_n.
struct IrrelevancySpec {
  double epsilon_n = 0.0;
  double lambda = 0.0;

  static IrrelevancySpec from_lambda(double lambda, std::size_t n);
};

/// Companion matrix with phi in its first row and ones on the subdiagonal.
Eigen::MatrixXd companion_matrix(std::span<const double> phi);

/// Coefficient of X_n in the j-step predictor, j = 0..h-1.
std::vector<double> a1_sequence(std::span<const double> phi, std::size_t h);

/// Mean squared error of the h-step predictor with known coefficients.
double forecast_variance(std::span<const double> phi, double sigma2, std::size_t h);

/// The h-step forecast-coefficient vector a(h) on (X_n, ..., X_{n-p+1}).
Eigen::VectorXd forecast_coefficients(std::span<const double> phi, std::size_t h);

/// M_h[i][j] = d a_i(h) / d phi_j (rows: entries of a(h); columns: phi_j).
Eigen::MatrixXd coefficient_jacobian(std::span<const double> phi, std::size_t h);

/// dim x dim Toeplitz matrix [gamma(i-j)] of the stationary AR process.
/// dim defaults to the model order.
Eigen::MatrixXd theoretical_gamma(std::span<const double> phi, double sigma2);
Eigen::MatrixXd theoretical_gamma(std::span<const double> phi, double sigma2, std::size_t dim);

/// Theoretical autocovariances gamma(0..max_lag).
std::vector<double> theoretical_autocovariance(std::span<const double> phi, double sigma2, std::size_t max_lag);

AsymptoticReport ab_ratio(std::span<const double> phi, double sigma2, std::size_t h);

/// Yule-Walker plug-in estimate of the report; Gamma is implied by the fitted phi.
AsymptoticReport estimate_ab_ratio(std::span<const double> series, std::size_t p, std::size_t h);
inline AsymptoticReport estimate_ab_ratio(const TimeSeries& s, std::size_t p, std::size_t h) {
  return estimate_ab_ratio(s.values(), p, h);
}

/// Asymptotic predictive ratio AMSE(k) / AMSE(n).
double asymptotic_rp(std::size_t k, std::size_t n, double ab);
inline double asymptotic_rp(std::size_t k, std::size_t n, const AsymptoticReport& r) {
  return asymptotic_rp(k, n, r.ratio);
}

/// Expected validation MSE per forecast step when fitting on k observations.
double amse(const AsymptoticReport& report, double k);

/// ceil(n / (1 + lambda * A/B)), clamped to [1, n].
std::size_t optimal_k(std::size_t n, double lambda, double ab);
inline std::size_t optimal_k(std::size_t n, double lambda, const AsymptoticReport& r) {
  return optimal_k(n, lambda, r.ratio);
}

/// The lambda for which n / (1 + lambda * A/B) equals fraction * n.
double lambda_for_fraction(double fraction, double ab);

}  // namespace paeback
