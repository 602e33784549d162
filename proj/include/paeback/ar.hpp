#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "paeback/series.hpp"

namespace paeback {

/// Zero-mean AR(p) process around `mean`:
///   X_t - mean = sum_i phi[i-1] (X_{t-i} - mean) + e_t,  e_t ~ (0, sigma2).
struct ARModel {
  std::vector<double> phi;
  double sigma2 = 1.0;
  double mean = 0.0;

  std::size_t order() const noexcept { return phi.size(); }
};

/// Biased (1/n) sample autocovariances gamma(0..max_lag) around the sample mean.
std::vector<double> sample_autocovariance(std::span<const double> x, std::size_t max_lag);

struct LevinsonResult {
  std::vector<double> phi;
  std::vector<double> reflection;
  double innovation_variance = 0.0;
};

/// Solves the Toeplitz system R phi = r with R[i][j] = acov[|i-j|] and
/// r[i] = acov[i+1], for order acov.size() - 1.
LevinsonResult levinson_durbin(std::span<const double> acov);

/// Yule-Walker AR(p) fit on the de-meaned series. The result is always stationary.
ARModel yule_walker_fit(std::span<const double> x, std::size_t p);
inline ARModel yule_walker_fit(const TimeSeries& s, std::size_t p) { return yule_walker_fit(s.values(), p); }

/// True iff every root of 1 - phi_1 z - ... - phi_p z^p lies strictly outside
/// the unit circle. Decided by the step-down (reverse Levinson) recursion.
bool is_stationary(std::span<const double> phi);

/// Recursive plug-in forecast of the h values following `history`.
std::vector<double> forecast(const ARModel& model, std::span<const double> history, std::size_t h);
inline std::vector<double> forecast(const ARModel& model, const TimeSeries& history, std::size_t h) {
  return forecast(model, history.values(), h);
}

/// Two-regime threshold AR(1):
///   X_t = 0.14 + 0.10 X_{t-1} + e_t   if X_{t-1} <  -0.2
///   X_t = 0.80 X_{t-1} + e_t          if X_{t-1} >= -0.2
struct Tar1Generator {
  double sigma = 1.0;

  static constexpr double kThreshold = -0.2;
  static double step(double prev, double innovation) noexcept {
    return prev < kThreshold ? 0.14 + 0.10 * prev + innovation : 0.80 * prev + innovation;
  }
};

struct ArGenerator {
  ARModel model;
};

using Generator = std::variant<ArGenerator, Tar1Generator>;

struct SimSpec {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t burn_in = 500;
  Generator generator = Tar1Generator{};
};

/// Deterministic path: feeds the given (already scaled) innovations through
/// the generator starting from `initial` (the most recent value last).
/// Returns one value per innovation, without burn-in removal.
std::vector<double> simulate_path(const Generator& generator, std::span<const double> initial,
                                  std::span<const double> innovations);

/// Gaussian-innovation simulation; bit-reproducible for a fixed spec.
TimeSeries simulate(const SimSpec& spec);

}  // namespace paeback
