#include "paeback/ar.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "paeback/error.hpp"

namespace paeback {

std::vector<double> sample_autocovariance(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (max_lag >= n) {
    fail(ErrorCode::InsufficientData, "max_lag " + std::to_string(max_lag) + " must be below series length " +
                                          std::to_string(n));
  }
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t t = 0; t < n; ++t) centered[t] = x[t] - mean;

  std::vector<double> acov(max_lag + 1, 0.0);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += centered[t] * centered[t + lag];
    acov[lag] = s / static_cast<double>(n);
  }
  return acov;
}

LevinsonResult levinson_durbin(std::span<const double> acov) {
  require(!acov.empty(), "levinson_durbin needs gamma(0)");
  const std::size_t p = acov.size() - 1;
  LevinsonResult out;
  out.phi.assign(p, 0.0);
  out.reflection.assign(p, 0.0);
  double err = acov[0];
  if (!(err > 0.0)) fail(ErrorCode::Singular, "singular Toeplitz system: zero variance");

  std::vector<double> prev(p, 0.0);
  for (std::size_t m = 1; m <= p; ++m) {
    double num = acov[m];
    for (std::size_t i = 1; i < m; ++i) num -= out.phi[i - 1] * acov[m - i];
    const double k = num / err;
    if (!(std::abs(k) < 1.0)) {
      fail(ErrorCode::Singular, "singular Toeplitz system at order " + std::to_string(m));
    }
    prev = out.phi;
    out.phi[m - 1] = k;
    for (std::size_t i = 1; i < m; ++i) out.phi[i - 1] = prev[i - 1] - k * prev[m - i - 1];
    out.reflection[m - 1] = k;
    err *= (1.0 - k * k);
  }
  out.innovation_variance = err;
  return out;
}

ARModel yule_walker_fit(std::span<const double> x, std::size_t p) {
  if (x.size() < p + 1) {
    fail(ErrorCode::InsufficientData, "Yule-Walker order " + std::to_string(p) + " needs at least " +
                                          std::to_string(p + 1) + " observations, got " + std::to_string(x.size()));
  }
  const auto acov = sample_autocovariance(x, p);
  auto lev = levinson_durbin(acov);
  if (!(lev.innovation_variance > 0.0)) fail(ErrorCode::Singular, "degenerate Yule-Walker fit");
  ARModel model;
  model.phi = std::move(lev.phi);
  model.sigma2 = lev.innovation_variance;
  model.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  return model;
}

bool is_stationary(std::span<const double> phi) {
  std::vector<double> a(phi.begin(), phi.end());
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  for (std::size_t m = a.size(); m >= 1; --m) {
    const double k = a[m - 1];
    if (!(std::abs(k) < 1.0)) return false;
    const double denom = 1.0 - k * k;
    std::vector<double> next(m - 1);
    for (std::size_t i = 1; i < m; ++i) next[i - 1] = (a[i - 1] + k * a[m - i - 1]) / denom;
    a = std::move(next);
  }
  return true;
}

std::vector<double> forecast(const ARModel& model, std::span<const double> history, std::size_t h) {
  const std::size_t p = model.order();
  require(h >= 1, "forecast horizon must be >= 1");
  if (history.size() < p) {
    fail(ErrorCode::InsufficientData, "history of length " + std::to_string(history.size()) +
                                          " is shorter than model order " + std::to_string(p));
  }
  // buf holds the last p de-meaned observations followed by the forecasts.
  std::vector<double> buf;
  buf.reserve(p + h);
  for (std::size_t i = history.size() - p; i < history.size(); ++i) buf.push_back(history[i] - model.mean);

  std::vector<double> out(h);
  for (std::size_t t = 0; t < h; ++t) {
    double v = 0.0;
    const std::size_t last = buf.size();
    for (std::size_t i = 1; i <= p; ++i) v += model.phi[i - 1] * buf[last - i];
    buf.push_back(v);
    out[t] = v + model.mean;
  }
  return out;
}

std::vector<double> simulate_path(const Generator& generator, std::span<const double> initial,
                                  std::span<const double> innovations) {
  std::vector<double> out;
  out.reserve(innovations.size());
  if (const auto* ar = std::get_if<ArGenerator>(&generator)) {
    const auto& m = ar->model;
    const std::size_t p = m.order();
    // Missing pre-sample values sit at the process mean.
    std::vector<double> hist(p, 0.0);
    const std::size_t take = std::min(p, initial.size());
    for (std::size_t i = 0; i < take; ++i) hist[p - take + i] = initial[initial.size() - take + i] - m.mean;
    for (double e : innovations) {
      double v = e;
      for (std::size_t i = 1; i <= p; ++i) v += m.phi[i - 1] * hist[p - i];
      if (p > 0) {
        hist.erase(hist.begin());
        hist.push_back(v);
      }
      out.push_back(v + m.mean);
    }
  } else {
    double prev = initial.empty() ? 0.0 : initial.back();
    for (double e : innovations) {
      prev = Tar1Generator::step(prev, e);
      out.push_back(prev);
    }
  }
  return out;
}

TimeSeries simulate(const SimSpec& spec) {
  require(spec.n >= 1, "simulation length must be >= 1");
  double sigma = 1.0;
  if (const auto* ar = std::get_if<ArGenerator>(&spec.generator)) {
    if (!is_stationary(ar->model.phi)) fail(ErrorCode::NotStationary, "AR generator is not stationary");
    require(ar->model.sigma2 > 0.0, "innovation variance must be positive");
    sigma = std::sqrt(ar->model.sigma2);
  } else {
    sigma = std::get<Tar1Generator>(spec.generator).sigma;
    require(sigma >= 0.0, "innovation scale must be nonnegative");
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> innovations(spec.n + spec.burn_in);
  for (double& e : innovations) e = sigma * normal(rng);

  auto path = simulate_path(spec.generator, {}, innovations);
  path.erase(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(spec.burn_in));
  return TimeSeries(std::move(path));
}

}  // namespace paeback
