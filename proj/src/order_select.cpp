#include "paeback/order_select.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "paeback/ar.hpp"
#include "paeback/error.hpp"

namespace paeback {

namespace {

constexpr double kWeightFloor = 1e-8;
constexpr double kMaxGramCondition = 1e8;
constexpr std::size_t kMinScoringRows = 10;

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// Penalized least squares in Gram form:
//   phi' G phi - 2 c' phi + l2 ||phi||^2 + sum_j l1_j |phi_j|.
struct GramSystem {
  const Eigen::MatrixXd& G;
  const Eigen::VectorXd& c;
};

#ifndef NDEBUG
double gram_objective(const GramSystem& sys, const Eigen::VectorXd& l1, double l2, const Eigen::VectorXd& phi) {
  return phi.dot(sys.G * phi) - 2.0 * sys.c.dot(phi) + l2 * phi.squaredNorm() + l1.dot(phi.cwiseAbs());
}
#endif

// Cyclic coordinate descent with active-set passes. coef is the warm start
// and receives the solution.
FitResult coordinate_descent(const GramSystem& sys, const Eigen::VectorXd& l1, double l2, Eigen::VectorXd coef,
                             const CdOptions& opt) {
  const Eigen::Index p = sys.c.size();
  Eigen::VectorXd q = sys.G * coef;
  FitResult out;
#ifndef NDEBUG
  double prev_obj = gram_objective(sys, l1, l2, coef);
#endif

  auto update = [&](Eigen::Index j) {
    const double denom = sys.G(j, j) + l2;
    const double old = coef(j);
    const double rho = sys.c(j) - (q(j) - sys.G(j, j) * old);
    const double next = denom > 0.0 ? soft_threshold(rho, 0.5 * l1(j)) / denom : 0.0;
    const double delta = next - old;
    if (delta != 0.0) {
      coef(j) = next;
      q.noalias() += delta * sys.G.col(j);
    }
    return std::abs(delta);
  };
  auto sweep = [&](auto&& indices) {
    double max_change = 0.0;
    for (Eigen::Index j : indices) max_change = std::max(max_change, update(j));
    ++out.sweeps;
#ifndef NDEBUG
    const double obj = gram_objective(sys, l1, l2, coef);
    assert(obj <= prev_obj + 1e-9 * (1.0 + std::abs(prev_obj)));
    prev_obj = obj;
#endif
    return max_change;
  };

  std::vector<Eigen::Index> all(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) all[static_cast<std::size_t>(j)] = j;
  std::vector<Eigen::Index> active;

  while (out.sweeps < opt.max_sweeps) {
    if (sweep(all) < opt.tolerance) {
      out.converged = true;
      break;
    }
    active.clear();
    for (Eigen::Index j = 0; j < p; ++j) {
      if (coef(j) != 0.0) active.push_back(j);
    }
    while (out.sweeps < opt.max_sweeps && sweep(active) >= opt.tolerance) {
    }
  }
  out.coef = std::move(coef);
  return out;
}

void check_weights(std::span<const double> weights, std::size_t p) {
  require(weights.size() == p, "weight count must equal the number of lags");
  for (double w : weights) require(std::isfinite(w) && w > 0.0, "adaptive weights must be positive and finite");
}

Eigen::VectorXd to_vector(std::span<const double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

std::vector<double> initial_from_gram(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, std::size_t rows,
                                      std::size_t p_m, std::span<const double> window) {
  if (rows > p_m) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (lo > 0.0 && hi / lo < kMaxGramCondition) {
      const Eigen::VectorXd ols = G.ldlt().solve(c);
      return {ols.data(), ols.data() + ols.size()};
    }
  }
  return yule_walker_fit(window, p_m).phi;
}

std::vector<double> weights_for(std::span<const double> phi_init, const TuneOptions& opt) {
  std::vector<double> b(phi_init.size());
  for (std::size_t j = 0; j < b.size(); ++j) b[j] = std::abs(phi_init[j]);
  if (opt.monotone_weights) b = monotone_adjust(b);
  return adaptive_weights(b, opt.gamma);
}

std::vector<double> log_grid(double hi, double floor_ratio, std::size_t count) {
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = hi;
    return grid;
  }
  const double lo = hi * floor_ratio;
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  return grid;
}

}  // namespace

DesignProblem build_design(std::span<const double> window, std::size_t p_m) {
  const std::size_t k = window.size();
  require(p_m >= 1, "maximum order p_m must be >= 1");
  if (k <= p_m) {
    fail(ErrorCode::InsufficientData, "window of length " + std::to_string(k) + " cannot support max order " +
                                          std::to_string(p_m));
  }
  DesignProblem d;
  d.p_m = p_m;
  d.k_m = k - p_m;
  const auto rows = static_cast<Eigen::Index>(d.k_m);
  const auto cols = static_cast<Eigen::Index>(p_m);
  d.y.resize(rows);
  d.Z.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto t = static_cast<std::size_t>(r) + p_m;
    d.y(r) = window[t];
    for (Eigen::Index c = 0; c < cols; ++c) d.Z(r, c) = window[t - 1 - static_cast<std::size_t>(c)];
  }
  return d;
}

std::vector<double> adaptive_weights(std::span<const double> phi_init, double gamma) {
  require(gamma > 0.0, "adaptive weight exponent must be positive");
  std::vector<double> w(phi_init.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    require(std::isfinite(phi_init[j]), "initial estimate must be finite");
    w[j] = std::pow(std::max(std::abs(phi_init[j]), kWeightFloor), -gamma);
  }
  return w;
}

std::vector<double> monotone_adjust(std::span<const double> b) {
  for (double v : b) require(std::isfinite(v) && v >= 0.0, "monotone_adjust needs nonnegative finite input");
  std::vector<double> out(b.begin(), b.end());
  if (out.empty()) return out;

  std::size_t anchor = 0;
  std::size_t j = 1;
  while (j < out.size()) {
    if (b[j] <= out[anchor]) {
      anchor = j++;
      continue;
    }
    std::size_t m = j + 1;
    while (m < out.size() && b[m] > out[anchor]) ++m;
    if (m == out.size()) {
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(j), out.end(), out[anchor]);
      break;
    }
    const double slope = (b[m] - out[anchor]) / static_cast<double>(m - anchor);
    for (std::size_t i = anchor + 1; i < m; ++i) out[i] = out[anchor] + slope * static_cast<double>(i - anchor);
    anchor = m;
    j = m + 1;
  }
  return out;
}

double lasso_lambda_max(const DesignProblem& problem, std::span<const double> weights) {
  check_weights(weights, problem.p_m);
  const Eigen::VectorXd c = problem.Z.transpose() * problem.y;
  double m = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) m = std::max(m, 2.0 * std::abs(c(j)) / weights[static_cast<std::size_t>(j)]);
  return m;
}

double lasso_objective(const DesignProblem& problem, std::span<const double> weights, double lambda,
                       const Eigen::VectorXd& coef) {
  const Eigen::VectorXd w = to_vector(weights);
  return (problem.y - problem.Z * coef).squaredNorm() + lambda * w.dot(coef.cwiseAbs());
}

double elastic_net_objective(const DesignProblem& problem, std::span<const double> weights, double lambda,
                             double alpha, const Eigen::VectorXd& coef) {
  const Eigen::VectorXd w = to_vector(weights);
  return (problem.y - problem.Z * coef).squaredNorm() + 0.5 * lambda * (1.0 - alpha) * coef.squaredNorm() +
         0.5 * lambda * alpha * w.dot(coef.cwiseAbs());
}

FitResult fit_adaptive_lasso(const DesignProblem& problem, std::span<const double> weights, double lambda,
                             const CdOptions& options) {
  require(lambda >= 0.0, "lambda must be nonnegative");
  check_weights(weights, problem.p_m);
  const Eigen::MatrixXd G = problem.Z.transpose() * problem.Z;
  const Eigen::VectorXd c = problem.Z.transpose() * problem.y;
  const Eigen::VectorXd l1 = lambda * to_vector(weights);
  return coordinate_descent({G, c}, l1, 0.0, Eigen::VectorXd::Zero(c.size()), options);
}

FitResult fit_adaptive_elastic_net(const DesignProblem& problem, std::span<const double> weights, double lambda,
                                   double alpha, const CdOptions& options) {
  require(lambda >= 0.0, "lambda must be nonnegative");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  check_weights(weights, problem.p_m);
  const Eigen::MatrixXd G = problem.Z.transpose() * problem.Z;
  const Eigen::VectorXd c = problem.Z.transpose() * problem.y;
  const Eigen::VectorXd l1 = 0.5 * lambda * alpha * to_vector(weights);
  const double l2 = 0.5 * lambda * (1.0 - alpha);
  auto fit = coordinate_descent({G, c}, l1, l2, Eigen::VectorXd::Zero(c.size()), options);
  fit.coef *= 1.0 + lambda * (1.0 - alpha) / (2.0 * static_cast<double>(problem.window_size()));
  return fit;
}

std::vector<double> initial_estimate(const DesignProblem& problem, std::span<const double> window) {
  require(window.size() == problem.window_size(), "window does not match design problem");
  const Eigen::MatrixXd G = problem.Z.transpose() * problem.Z;
  const Eigen::VectorXd c = problem.Z.transpose() * problem.y;
  return initial_from_gram(G, c, problem.k_m, problem.p_m, window);
}

TuneMethod parse_tune_method(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "AL") return TuneMethod::AdaptiveLasso;
  if (upper == "AE") return TuneMethod::AdaptiveElasticNet;
  if (upper == "ATE") return TuneMethod::TunedAdaptiveElasticNet;
  fail(ErrorCode::InvalidArgument, "unknown tuning method '" + std::string(name) + "' (expected AL, AE or ATE)");
}

std::string_view tune_method_name(TuneMethod m) {
  switch (m) {
    case TuneMethod::AdaptiveLasso: return "AL";
    case TuneMethod::AdaptiveElasticNet: return "AE";
    case TuneMethod::TunedAdaptiveElasticNet: return "ATE";
  }
  return "?";
}

std::vector<double> default_alpha_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

TuneResult tune_sw(std::span<const double> window, std::size_t p_m, TuneMethod method,
                   std::span<const double> lambda_grid, std::span<const double> alpha_grid,
                   const TuneOptions& options) {
  require(p_m >= 1, "max order must be >= 1");
  const std::size_t start = std::max(p_m, kMinScoringRows);
  if (window.size() <= p_m + start) {
    fail(ErrorCode::InsufficientData, "window of length " + std::to_string(window.size()) +
                                          " leaves no scored sliding-window row for max order " +
                                          std::to_string(p_m));
  }
  const DesignProblem full = build_design(window, p_m);
  const auto p = static_cast<Eigen::Index>(p_m);

  std::vector<double> alphas;
  switch (method) {
    case TuneMethod::AdaptiveLasso: alphas = {1.0}; break;
    case TuneMethod::AdaptiveElasticNet: alphas = {0.5}; break;
    case TuneMethod::TunedAdaptiveElasticNet:
      alphas = alpha_grid.empty() ? default_alpha_grid() : std::vector<double>(alpha_grid.begin(), alpha_grid.end());
      break;
  }
  for (double a : alphas) require(a > 0.0 && a <= 1.0, "alpha grid values must lie in (0, 1]");
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  const bool lasso = method == TuneMethod::AdaptiveLasso;

  const Eigen::MatrixXd G_full = full.Z.transpose() * full.Z;
  const Eigen::VectorXd c_full = full.Z.transpose() * full.y;
  const auto full_weights = weights_for(initial_from_gram(G_full, c_full, full.k_m, p_m, window), options);

  std::vector<double> lambdas(lambda_grid.begin(), lambda_grid.end());
  if (lambdas.empty()) {
    double hi = lasso_lambda_max(full, full_weights);
    // Elastic-net l1 threshold is lambda * alpha / 2: all-zero from 2 * hi / alpha.
    if (!lasso) hi = 2.0 * hi / alphas.front();
    if (!(hi > 0.0)) hi = 1.0;
    lambdas = log_grid(hi, options.grid_floor_ratio, options.default_grid_size);
  }
  for (double l : lambdas) require(std::isfinite(l) && l >= 0.0, "lambda grid values must be finite and >= 0");
  std::sort(lambdas.begin(), lambdas.end());
  lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());

  auto penalty_terms = [&](const std::vector<double>& w, double lambda, double alpha, Eigen::VectorXd& l1,
                           double& l2) {
    const Eigen::VectorXd wv = to_vector(w);
    if (lasso) {
      l1 = lambda * wv;
      l2 = 0.0;
    } else {
      l1 = 0.5 * lambda * alpha * wv;
      l2 = 0.5 * lambda * (1.0 - alpha);
    }
  };
  auto rescale = [&](double lambda, double alpha, std::size_t window_size) {
    return lasso ? 1.0 : 1.0 + lambda * (1.0 - alpha) / (2.0 * static_cast<double>(window_size));
  };

  // score[a][l]: accumulated squared one-step error.
  std::vector<std::vector<double>> score(alphas.size(), std::vector<double>(lambdas.size(), 0.0));
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(p);
  std::size_t scored = 0;
  Eigen::VectorXd l1;
  double l2 = 0.0;
  for (std::size_t i = 0; i < full.k_m; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (i >= start) {
      const auto prefix = window.first(p_m + i);
      const auto w = weights_for(initial_from_gram(G, c, i, p_m, prefix), options);
      const Eigen::RowVectorXd z = full.Z.row(row);
      // The loss is a sum over rows, so the prefix penalty shrinks with the
      // prefix to keep the penalty-to-loss ratio of the full-window fit.
      const double shrink = static_cast<double>(i) / static_cast<double>(full.k_m);
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        Eigen::VectorXd warm = Eigen::VectorXd::Zero(p);
        for (std::size_t l = lambdas.size(); l-- > 0;) {
          const double lambda = lambdas[l] * shrink;
          penalty_terms(w, lambda, alphas[a], l1, l2);
          auto fit = coordinate_descent({G, c}, l1, l2, warm, options.cd);
          warm = fit.coef;
          const double pred = rescale(lambda, alphas[a], p_m + i) * z.dot(fit.coef);
          const double e = full.y(row) - pred;
          score[a][l] += e * e;
        }
      }
      ++scored;
    }
    G.noalias() += full.Z.row(row).transpose() * full.Z.row(row);
    c.noalias() += full.y(row) * full.Z.row(row).transpose();
  }

  // Minimum mean score; ties go to the larger lambda, then the smaller alpha.
  std::size_t best_a = 0;
  std::size_t best_l = lambdas.size() - 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t l = lambdas.size(); l-- > 0;) {
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      if (score[a][l] < best) {
        best = score[a][l];
        best_a = a;
        best_l = l;
      }
    }
  }

  TuneResult out;
  out.penalty.lambda = lambdas[best_l];
  out.penalty.alpha = alphas[best_a];
  out.penalty.gamma = options.gamma;
  out.penalty.weights = full_weights;
  out.penalty.monotone_adjusted = options.monotone_weights;
  out.score = best / static_cast<double>(scored);
  out.scored_rows = scored;
  out.lambda_grid = lambdas;
  out.alpha_grid = alphas;

  penalty_terms(full_weights, out.penalty.lambda, out.penalty.alpha, l1, l2);
  auto fit = coordinate_descent({G_full, c_full}, l1, l2, Eigen::VectorXd::Zero(p), options.cd);
  out.coef = rescale(out.penalty.lambda, out.penalty.alpha, full.window_size()) * fit.coef;
  return out;
}

}  // namespace paeback
