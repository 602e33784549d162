#include "paeback/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "paeback/error.hpp"

namespace paeback {

namespace {

constexpr std::size_t kFullGridLimit = 300;
constexpr std::size_t kSparseGridPoints = 100;

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct MeanSe {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  if (v.empty()) return out;
  const double n = static_cast<double>(v.size());
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

// Runs body(i) for i in [0, count) on up to `jobs` threads. The first
// exception is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t count, std::size_t jobs, Body&& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

FitMethod FitMethod::yule_walker(std::size_t p) {
  FitMethod m;
  m.kind = Kind::YuleWalker;
  m.order = p;
  return m;
}

FitMethod FitMethod::penalized(TuneMethod t, std::size_t p_m) {
  FitMethod m;
  switch (t) {
    case TuneMethod::AdaptiveLasso: m.kind = Kind::AdaptiveLasso; break;
    case TuneMethod::AdaptiveElasticNet: m.kind = Kind::AdaptiveElasticNet; break;
    case TuneMethod::TunedAdaptiveElasticNet: m.kind = Kind::TunedAdaptiveElasticNet; break;
  }
  m.order = p_m;
  return m;
}

TuneMethod FitMethod::tune_method() const {
  switch (kind) {
    case Kind::AdaptiveLasso: return TuneMethod::AdaptiveLasso;
    case Kind::AdaptiveElasticNet: return TuneMethod::AdaptiveElasticNet;
    case Kind::TunedAdaptiveElasticNet: return TuneMethod::TunedAdaptiveElasticNet;
    case Kind::YuleWalker: break;
  }
  fail(ErrorCode::InvalidArgument, "Yule-Walker is not a tuned method");
}

std::size_t FitMethod::min_window() const {
  if (!is_penalized()) return order + 1;
  // tune_sw needs at least one scored row after max(p_m, 10) training rows.
  return order + std::max<std::size_t>(order, 10) + 1;
}

std::string FitMethod::name() const {
  switch (kind) {
    case Kind::YuleWalker: return "YW(" + std::to_string(order) + ")";
    case Kind::AdaptiveLasso: return "AL(" + std::to_string(order) + ")";
    case Kind::AdaptiveElasticNet: return "AE(" + std::to_string(order) + ")";
    case Kind::TunedAdaptiveElasticNet: return "ATE(" + std::to_string(order) + ")";
  }
  return "?";
}

FitMethod::Kind parse_method_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "YW" || upper == "YW-ORACLE") return FitMethod::Kind::YuleWalker;
  if (upper == "AL") return FitMethod::Kind::AdaptiveLasso;
  if (upper == "AE") return FitMethod::Kind::AdaptiveElasticNet;
  if (upper == "ATE") return FitMethod::Kind::TunedAdaptiveElasticNet;
  fail(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "' (expected YW, AL, AE or ATE)");
}

ARModel fit_window(const FitMethod& method, std::span<const double> window) {
  if (!method.is_penalized()) return yule_walker_fit(window, method.order);

  const double mean = std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(window.size());
  std::vector<double> centered(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) centered[i] = window[i] - mean;

  const auto tuned = tune_sw(centered, method.order, method.tune_method(), method.lambda_grid,
                             method.alpha_grid, method.tune);
  const DesignProblem d = build_design(centered, method.order);
  const double rss = (d.y - d.Z * tuned.coef).squaredNorm();

  ARModel model;
  model.phi.assign(tuned.coef.data(), tuned.coef.data() + tuned.coef.size());
  model.sigma2 = std::max(rss / static_cast<double>(d.k_m), std::numeric_limits<double>::min());
  model.mean = mean;
  return model;
}

std::vector<std::size_t> default_k_grid(std::size_t n, std::size_t k_min) {
  require(k_min >= 1, "k_min must be >= 1");
  if (k_min > n) {
    fail(ErrorCode::InsufficientData, "insufficient data: n = " + std::to_string(n) +
                                          " is below the minimum development size " + std::to_string(k_min));
  }
  std::vector<std::size_t> grid;
  if (n <= kFullGridLimit || n - k_min + 1 <= kSparseGridPoints) {
    for (std::size_t k = k_min; k <= n; ++k) grid.push_back(k);
    return grid;
  }
  const double span = static_cast<double>(n - k_min);
  for (std::size_t i = 0; i < kSparseGridPoints; ++i) {
    const double k = static_cast<double>(k_min) + span * static_cast<double>(i) / (kSparseGridPoints - 1);
    grid.push_back(static_cast<std::size_t>(std::llround(k)));
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

EfficiencyCurve efficiency_curve(std::span<const double> series, std::size_t n, std::size_t h,
                                 std::span<const std::size_t> k_grid, const FitMethod& method, Criterion criterion) {
  require(n >= 1, "history length n must be >= 1");
  require(h >= 1, "horizon h must be >= 1");
  if (series.size() < n + h) {
    fail(ErrorCode::InsufficientData, "insufficient data: need n + h = " + std::to_string(n + h) +
                                          " observations, series has " + std::to_string(series.size()));
  }
  const std::size_t k_min = method.min_window();
  if (n < k_min) {
    fail(ErrorCode::InsufficientData, "insufficient data: n = " + std::to_string(n) + " is below the minimum " +
                                          "development size " + std::to_string(k_min) + " of " + method.name());
  }

  std::vector<std::size_t> ks(k_grid.begin(), k_grid.end());
  if (ks.empty()) ks = default_k_grid(n, k_min);
  for (std::size_t k : ks) require(k >= 1 && k <= n, "development sizes must lie in [1, n]");
  ks.push_back(n);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  const auto validation = series.subspan(n, h);
  EfficiencyCurve curve;
  curve.n = n;
  curve.h = h;
  curve.criterion = criterion;
  curve.model_spec = method.name();

  for (std::size_t k : ks) {
    if (k < k_min) {
      curve.failures.push_back({k, "below minimum development size " + std::to_string(k_min)});
      continue;
    }
    const auto window = series.subspan(n - k, k);
    try {
      const ARModel model = fit_window(method, window);
      const auto pred = forecast(model, window, h);
      curve.points.push_back({k, static_cast<double>(k) / static_cast<double>(n), evaluate(validation, pred, criterion), 0.0});
    } catch (const Error& e) {
      if (k == n) throw;
      curve.failures.push_back({k, e.what()});
    }
  }

  const double base = curve.points.back().score;
  for (auto& pt : curve.points) pt.r_p = pt.k == n ? 1.0 : pt.score / base;
  return curve;
}

std::size_t select_optimal_k(const EfficiencyCurve& curve) {
  require(!curve.points.empty(), "empty efficiency curve");
  const CurvePoint* best = &curve.points.front();
  for (const auto& pt : curve.points) {
    if (pt.score < best->score || (pt.score == best->score && pt.k < best->k)) best = &pt;
  }
  return best->k;
}

std::vector<std::size_t> KGridRule::resolve(std::size_t n, std::size_t k_min) const {
  switch (kind) {
    case Kind::Default: return default_k_grid(n, k_min);
    case Kind::All: {
      std::vector<std::size_t> g;
      for (std::size_t k = std::min(k_min, n); k <= n; ++k) g.push_back(k);
      return g;
    }
    case Kind::FullOnly: return {n};
    case Kind::Explicit: {
      std::vector<std::size_t> g;
      for (std::size_t k : explicit_k) {
        if (k <= n) g.push_back(k);
      }
      return g;
    }
  }
  return {n};
}

StudySummary monte_carlo_study(const StudyConfig& config) {
  require(config.replicates >= 1, "replicates must be >= 1");
  require(!config.ns.empty() && !config.hs.empty(), "study needs at least one n and one h");
  require(!config.methods.empty(), "study needs at least one fitting method");
  if (const auto* ar = std::get_if<ArGenerator>(&config.generator)) {
    if (!is_stationary(ar->model.phi)) fail(ErrorCode::NotStationary, "AR generator is not stationary");
  }

  StudySummary summary;
  summary.replicates = config.replicates;
  summary.base_seed = config.base_seed;

  for (std::size_t n : config.ns) {
    for (std::size_t h : config.hs) {
      for (const auto& method : config.methods) {
        const auto ks = config.k_grid.resolve(n, method.min_window());
        std::vector<EfficiencyCurve> curves(config.replicates);
        std::vector<char> failed(config.replicates, 0);

        parallel_for(config.replicates, config.jobs, [&](std::size_t r) {
          SimSpec spec;
          spec.n = n + h;
          spec.seed = config.base_seed + r;
          spec.burn_in = config.burn_in;
          spec.generator = config.generator;
          const auto series = simulate(spec);
          try {
            curves[r] = efficiency_curve(series.values(), n, h, ks, method, config.criterion);
          } catch (const Error&) {
            failed[r] = 1;
          }
        });

        StudyCell cell;
        cell.n = n;
        cell.h = h;
        cell.method = method.name();
        std::vector<std::size_t> all_k;
        for (std::size_t r = 0; r < config.replicates; ++r) {
          if (failed[r]) {
            ++cell.failed_replicates;
            continue;
          }
          for (const auto& pt : curves[r].points) all_k.push_back(pt.k);
        }
        std::sort(all_k.begin(), all_k.end());
        all_k.erase(std::unique(all_k.begin(), all_k.end()), all_k.end());

        std::vector<double> base;
        for (std::size_t r = 0; r < config.replicates; ++r) {
          if (!failed[r]) base.push_back(curves[r].points.back().score);
        }
        const auto base_stats = mean_se(base);
        cell.mean_score_n = base_stats.mean;
        cell.se_score_n = base_stats.se;
        cell.median_score_n = median(base);

        for (std::size_t k : all_k) {
          std::vector<double> rp;
          std::vector<double> sc;
          for (std::size_t r = 0; r < config.replicates; ++r) {
            if (failed[r]) continue;
            const auto& pts = curves[r].points;
            auto it = std::lower_bound(pts.begin(), pts.end(), k,
                                       [](const CurvePoint& p, std::size_t v) { return p.k < v; });
            if (it == pts.end() || it->k != k) continue;
            rp.push_back(it->r_p);
            sc.push_back(it->score);
          }
          const auto st = mean_se(sc);
          cell.k.push_back(k);
          cell.median_rp.push_back(median(rp));
          cell.mean_score.push_back(st.mean);
          cell.se_score.push_back(st.se);
          cell.count.push_back(sc.size());
        }
        summary.cells.push_back(std::move(cell));
      }
    }
  }
  return summary;
}

FukuchiResult fukuchi_baseline(std::span<const double> series, std::size_t h, std::span<const std::size_t> k_grid,
                               const FitMethod& method) {
  require(h >= 1, "horizon h must be >= 1");
  const std::size_t n = series.size();
  const std::size_t k_min = method.min_window();
  if (n < k_min + h) {
    fail(ErrorCode::InsufficientData, "insufficient data: series of length " + std::to_string(n) +
                                          " cannot hold a window of " + std::to_string(k_min) + " plus horizon " +
                                          std::to_string(h));
  }
  std::vector<std::size_t> ks(k_grid.begin(), k_grid.end());
  if (ks.empty()) {
    for (std::size_t k = k_min; k + h <= n; ++k) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (std::size_t k : ks) {
    if (k < k_min || k + h > n) {
      fail(ErrorCode::InsufficientData, "window size " + std::to_string(k) + " outside [" + std::to_string(k_min) +
                                            ", " + std::to_string(n - h) + "]");
    }
  }

  FukuchiResult out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k : ks) {
    const std::size_t placements = n - k - h + 1;
    double total = 0.0;
    for (std::size_t l = 0; l < placements; ++l) {
      const auto window = series.subspan(l, k);
      const ARModel model = fit_window(method, window);
      const auto pred = forecast(model, window, h);
      total += evaluate(series.subspan(l + k, h), pred, Criterion::MSE);
    }
    const double risk = total / static_cast<double>(placements);
    out.k.push_back(k);
    out.mean_risk.push_back(risk);
    if (risk < best) {
      best = risk;
      out.k_selected = k;
    }
  }
  return out;
}

}  // namespace paeback
