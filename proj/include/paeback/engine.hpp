#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paeback/ar.hpp"
#include "paeback/order_select.hpp"
#include "paeback/series.hpp"

namespace paeback {

/// How a development window is turned into an AR forecaster.
struct FitMethod {
  enum class Kind { YuleWalker, AdaptiveLasso, AdaptiveElasticNet, TunedAdaptiveElasticNet };

  Kind kind = Kind::YuleWalker;
  /// AR order for Yule-Walker, maximum order p_m for the penalized kinds.
  std::size_t order = 1;
  std::vector<double> lambda_grid;
  std::vector<double> alpha_grid;
  TuneOptions tune;

  static FitMethod yule_walker(std::size_t p);
  static FitMethod penalized(TuneMethod m, std::size_t p_m);

  bool is_penalized() const noexcept { return kind != Kind::YuleWalker; }
  /// Penalized kinds only.
  TuneMethod tune_method() const;
  /// Smallest development size the method can fit.
  std::size_t min_window() const;
  std::string name() const;
};

FitMethod::Kind parse_method_kind(std::string_view name);

/// Fits the window. Penalized fits are made on the window centred at its
/// mean; the mean is restored in the returned model.
ARModel fit_window(const FitMethod& method, std::span<const double> window);

struct CurvePoint {
  std::size_t k = 0;
  double r_s = 0.0;
  double score = 0.0;
  double r_p = 0.0;
};

struct CurveFailure {
  std::size_t k = 0;
  std::string message;
};

struct EfficiencyCurve {
  std::size_t n = 0;
  std::size_t h = 0;
  Criterion criterion = Criterion::MSE;
  std::string model_spec;
  std::vector<CurvePoint> points;     // sorted by k; always contains k = n
  std::vector<CurveFailure> failures; // development sizes whose fit failed
};

/// Every k in [k_min, n] when n <= 300, otherwise 100 evenly spaced values
/// from k_min to n.
std::vector<std::size_t> default_k_grid(std::size_t n, std::size_t k_min);

/// For each k, fits on series[n-k, n) (0-based), forecasts h steps and scores
/// them against series[n, n+h). r_p is relative to the k = n score.
EfficiencyCurve efficiency_curve(std::span<const double> series, std::size_t n, std::size_t h,
                                 std::span<const std::size_t> k_grid, const FitMethod& method,
                                 Criterion criterion = Criterion::MSE);

/// Smallest k attaining the minimum score.
std::size_t select_optimal_k(const EfficiencyCurve& curve);

struct KGridRule {
  enum class Kind { Default, All, FullOnly, Explicit };
  Kind kind = Kind::Default;
  std::vector<std::size_t> explicit_k;

  std::vector<std::size_t> resolve(std::size_t n, std::size_t k_min) const;
};

struct StudyConfig {
  Generator generator = Tar1Generator{};
  std::vector<std::size_t> ns;
  std::vector<std::size_t> hs;
  std::size_t replicates = 1;
  KGridRule k_grid;
  std::vector<FitMethod> methods;
  std::uint64_t base_seed = 0;
  std::size_t burn_in = 500;
  Criterion criterion = Criterion::MSE;
  std::size_t jobs = 1;
};

struct StudyCell {
  std::size_t n = 0;
  std::size_t h = 0;
  std::string method;
  std::vector<std::size_t> k;
  std::vector<double> median_rp;
  std::vector<double> mean_score;
  std::vector<double> se_score;
  std::vector<std::size_t> count;  // replicates contributing at each k
  double mean_score_n = 0.0;       // mean of score(n): the baseline MSE(n)
  double se_score_n = 0.0;
  double median_score_n = 0.0;
  std::size_t failed_replicates = 0;
};

struct StudySummary {
  std::size_t replicates = 0;
  std::uint64_t base_seed = 0;
  std::vector<StudyCell> cells;
};

/// Monte Carlo replication of efficiency curves. Replicate r simulates
/// n + h observations with seed base_seed + r. Output is independent of jobs.
StudySummary monte_carlo_study(const StudyConfig& config);

struct FukuchiResult {
  std::size_t k_selected = 0;
  std::vector<std::size_t> k;
  std::vector<double> mean_risk;
};

/// Overlapping sliding-window risk estimate: for each window size k, the mean
/// h-step MSE over all n - k - h + 1 placements inside the series; returns the
/// minimizing k (smallest on ties). An empty grid means [k_min, n - h].
FukuchiResult fukuchi_baseline(std::span<const double> series, std::size_t h, std::span<const std::size_t> k_grid,
                               const FitMethod& method);

}  // namespace paeback
