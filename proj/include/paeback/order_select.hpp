#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace paeback {

/// Lagged regression y = Z phi + e over a development window of length
/// k = k_m + p_m. Row r regresses window[p_m + r] on the p_m values before it,
/// most recent first.
struct DesignProblem {
  Eigen::VectorXd y;
  Eigen::MatrixXd Z;
  std::size_t p_m = 0;
  std::size_t k_m = 0;

  std::size_t window_size() const noexcept { return k_m + p_m; }
};

DesignProblem build_design(std::span<const double> window, std::size_t p_m);

/// w_j = max(|phi_j|, 1e-8)^(-gamma).
std::vector<double> adaptive_weights(std::span<const double> phi_init, double gamma = 1.0);

/// Non-increasing adjustment of |phi_init|. Entries that are not above every
/// earlier entry are kept; the ones in between are replaced by the straight
/// line joining the kept neighbours, and a trailing run with no kept right
/// neighbour is flattened to the last kept value.
std::vector<double> monotone_adjust(std::span<const double> b);

struct PenaltySpec {
  double lambda = 0.0;
  double alpha = 1.0;
  double gamma = 1.0;
  std::vector<double> weights;
  bool monotone_adjusted = false;
};

struct CdOptions {
  double tolerance = 1e-8;
  std::size_t max_sweeps = 10000;
};

struct FitResult {
  Eigen::VectorXd coef;
  std::size_t sweeps = 0;
  bool converged = false;
};

/// argmin ||y - Z phi||^2 + lambda sum_j w_j |phi_j| by cyclic coordinate descent.
FitResult fit_adaptive_lasso(const DesignProblem& problem, std::span<const double> weights, double lambda,
                             const CdOptions& options = {});

/// (1 + lambda (1 - alpha) / (2k)) * argmin ||y - Z phi||^2 + lambda (1 - alpha) / 2 ||phi||^2
///                                          + lambda alpha / 2 sum_j w_j |phi_j|,
/// with k the window size of the problem.
FitResult fit_adaptive_elastic_net(const DesignProblem& problem, std::span<const double> weights, double lambda,
                                   double alpha, const CdOptions& options = {});

/// Smallest lambda for which the adaptive LASSO solution is identically zero.
double lasso_lambda_max(const DesignProblem& problem, std::span<const double> weights);

/// Objective value of the adaptive elastic net (before rescaling) at coef.
double elastic_net_objective(const DesignProblem& problem, std::span<const double> weights, double lambda,
                             double alpha, const Eigen::VectorXd& coef);
double lasso_objective(const DesignProblem& problem, std::span<const double> weights, double lambda,
                       const Eigen::VectorXd& coef);

/// Initial root-k estimator: OLS on the design when it has more rows than
/// columns and a well-conditioned Gram matrix, otherwise Yule-Walker of order
/// p_m on the window.
std::vector<double> initial_estimate(const DesignProblem& problem, std::span<const double> window);

enum class TuneMethod { AdaptiveLasso, AdaptiveElasticNet, TunedAdaptiveElasticNet };

TuneMethod parse_tune_method(std::string_view name);
std::string_view tune_method_name(TuneMethod m);

struct TuneOptions {
  double gamma = 1.0;
  bool monotone_weights = true;
  std::size_t default_grid_size = 50;
  double grid_floor_ratio = 1e-4;
  CdOptions cd;
};

/// Default elastic-net mixing grid {0.1, ..., 0.9}.
std::vector<double> default_alpha_grid();

struct TuneResult {
  PenaltySpec penalty;
  Eigen::VectorXd coef;
  double score = 0.0;
  std::size_t scored_rows = 0;
  std::vector<double> lambda_grid;
  std::vector<double> alpha_grid;
};

/// Sliding-window tuning over the development window. Each grid point is
/// scored by the mean one-step squared error of predicting design row i from
/// a fit on rows [0, i), for i >= max(p_m, 10). That fit uses the penalty
/// lambda * i / k_m, matching the per-row penalty of the final fit on all
/// k_m rows, which uses lambda itself. An empty lambda grid selects
/// the default log-spaced grid; the alpha grid is ignored except for ATE.
TuneResult tune_sw(std::span<const double> window, std::size_t p_m, TuneMethod method,
                   std::span<const double> lambda_grid = {}, std::span<const double> alpha_grid = {},
                   const TuneOptions& options = {});

}  // namespace paeback
