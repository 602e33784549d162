// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// numbers alongside. Exits nonzero when any criterion fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "paeback/ar.hpp"
#include "paeback/asymptotics.hpp"
#include "paeback/engine.hpp"

#ifndef PAEBACK_UNIT_TESTS_PATH
#error "PAEBACK_UNIT_TESTS_PATH must point at the unit test binary"
#endif

using namespace paeback;

namespace {

const std::vector<double> kAr5{0.5, -0.4, 0.3, -0.2, 0.1};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << "\n    [" << (ok ? "ok" : "MISS") << "] " << what;
  }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(prec) << v;
  return s.str();
}

bool near(double got, double want, double tol) { return std::abs(got - want) <= tol; }

std::size_t jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

StudyConfig ar5_study(std::vector<std::size_t> ns, std::vector<std::size_t> hs, std::size_t reps, std::uint64_t seed) {
  StudyConfig c;
  c.generator = ArGenerator{ARModel{kAr5, 1.0, 0.0}};
  c.ns = std::move(ns);
  c.hs = std::move(hs);
  c.replicates = reps;
  c.methods = {FitMethod::yule_walker(5)};
  c.base_seed = seed;
  c.jobs = jobs();
  return c;
}

Verdict golden_ar5() {
  Verdict v;
  const auto r = ab_ratio(kAr5, 1.0, 3);
  v.check(near(r.a_numerator(), 3.5225, 1e-3), "A-numerator " + fmt(r.a_numerator()) + " vs 3.5225");
  const double want[] = {5.0, 9.9468, 8.1480};
  for (std::size_t j = 0; j < 3; ++j) {
    v.check(near(r.traces[j], want[j], 1e-3),
            "tr" + std::to_string(j + 1) + " " + fmt(r.traces[j]) + " vs " + fmt(want[j]));
  }
  v.check(near(r.ratio, 0.1525, 1e-3), "A/B " + fmt(r.ratio) + " vs 0.1525");
  return v;
}

Verdict golden_ar2() {
  Verdict v;
  const std::vector<double> phi{-0.2446, 0.0571};
  const auto r = ab_ratio(phi, 1.0, 3);
  v.check(near(r.a_numerator(), 3.1334, 1e-3), "A-numerator " + fmt(r.a_numerator()) + " vs 3.1334");
  const double want[] = {2.0, 1.4993, 0.4819};
  for (std::size_t j = 0; j < 3; ++j) {
    v.check(near(r.traces[j], want[j], 1e-3),
            "tr" + std::to_string(j + 1) + " " + fmt(r.traces[j]) + " vs " + fmt(want[j]));
  }
  v.check(near(r.ratio, 0.7870, 1e-3), "A/B " + fmt(r.ratio) + " vs 0.7870");
  // Sample fractions 0.2 and 0.1 bound lambda; epsilon_n = lambda / n with n = 1000.
  const double lo = lambda_for_fraction(0.2, r.ratio);
  const double hi = lambda_for_fraction(0.1, r.ratio);
  v.check(near(lo, 5.0824, 1e-3), "lambda(r=0.2) " + fmt(lo) + " vs 5.0824");
  v.check(near(hi, 11.4354, 1e-3), "lambda(r=0.1) " + fmt(hi) + " vs 11.4354");
  const auto e_lo = IrrelevancySpec::from_lambda(lo, 1000).epsilon_n;
  const auto e_hi = IrrelevancySpec::from_lambda(hi, 1000).epsilon_n;
  v.check(near(e_lo, 0.005, 1e-3), "epsilon_n low " + fmt(e_lo) + " vs 0.005");
  v.check(near(e_hi, 0.011, 1e-3), "epsilon_n high " + fmt(e_hi) + " vs 0.011");
  return v;
}

Verdict optimal_fraction() {
  Verdict v;
  const std::size_t n = 10000;
  const double lambdas[] = {4.37, 15.30};
  const double want[] = {0.600, 0.300};
  for (int i = 0; i < 2; ++i) {
    const double frac = static_cast<double>(optimal_k(n, lambdas[i], 0.1525)) / n;
    v.check(near(frac, want[i], 0.002), "lambda " + fmt(lambdas[i], 2) + ": k_opt/n " + fmt(frac) + " vs " + fmt(want[i], 3));
  }
  return v;
}

Verdict baseline_mse() {
  Verdict v;
  auto cfg = ar5_study({100, 1000}, {3, 10}, 1000, 4'000'000);
  cfg.k_grid.kind = KGridRule::Kind::FullOnly;
  const auto s = monte_carlo_study(cfg);
  auto want = [](std::size_t n, std::size_t h) {
    if (h == 3) return n == 100 ? 1.192 : 1.222;
    return n == 100 ? 1.287 : 1.264;
  };
  for (const auto& c : s.cells) {
    const double w = want(c.n, c.h);
    v.check(near(c.mean_score_n, w, 0.06), "n=" + std::to_string(c.n) + " h=" + std::to_string(c.h) + ": MSE(n) " +
                                               fmt(c.mean_score_n) + " (SE " + fmt(c.se_score_n) + ") vs " + fmt(w, 3));
  }
  return v;
}

Verdict median_curve() {
  Verdict v;
  const auto s = monte_carlo_study(ar5_study({1000}, {3}, 1000, 5'000'000));
  const auto& c = s.cells.at(0);
  double worst = 0.0, worst_rs = 0.0, best_mid = 1e9, best_rs = 0.0;
  for (std::size_t i = 0; i < c.k.size(); ++i) {
    const double rs = static_cast<double>(c.k[i]) / c.n;
    if (rs < 0.3) continue;
    if (c.median_rp[i] > worst) {
      worst = c.median_rp[i];
      worst_rs = rs;
    }
    if (rs <= 0.6 && c.median_rp[i] < best_mid) {
      best_mid = c.median_rp[i];
      best_rs = rs;
    }
  }
  v.check(worst <= 1.05, "max median r_p over k/n >= 0.3: " + fmt(worst) + " at k/n " + fmt(worst_rs, 3));
  v.check(best_mid <= 1.00, "min median r_p over k/n in [0.3, 0.6]: " + fmt(best_mid) + " at k/n " + fmt(best_rs, 3));
  return v;
}

Verdict tar_ate() {
  Verdict v;
  StudyConfig cfg;
  cfg.generator = Tar1Generator{};
  cfg.ns = {1000};
  cfg.hs = {5};
  cfg.replicates = 1000;
  cfg.methods = {FitMethod::penalized(TuneMethod::TunedAdaptiveElasticNet, 10)};
  cfg.k_grid.kind = KGridRule::Kind::FullOnly;
  cfg.base_seed = 6'000'000;
  cfg.jobs = jobs();
  const auto s = monte_carlo_study(cfg);
  const auto& c = s.cells.at(0);
  v.check(near(c.mean_score_n, 0.804, 0.1),
          "ATE(10) MSE(n) " + fmt(c.mean_score_n) + " (SE " + fmt(c.se_score_n) + ") vs 0.804");
  v.check(c.failed_replicates == 0, "failed replicates " + std::to_string(c.failed_replicates));
  return v;
}

Verdict fukuchi() {
  Verdict v;
  const auto method = FitMethod::yule_walker(5);
  for (std::size_t h : {3u, 5u, 7u}) {
    std::size_t hits = 0;
    std::vector<std::size_t> picks;
    for (std::uint64_t r = 0; r < 100; ++r) {
      SimSpec spec;
      spec.n = 100;
      spec.seed = 7'000'000 + r;
      spec.generator = ArGenerator{ARModel{kAr5, 1.0, 0.0}};
      const auto x = simulate(spec);
      // Total length n + h = 100; the baseline sees only the first n values.
      const std::size_t n = 100 - h;
      const auto res = fukuchi_baseline(x.values().first(n), h, {}, method);
      picks.push_back(res.k_selected);
      if (res.k_selected == n - h) ++hits;
    }
    std::sort(picks.begin(), picks.end());
    v.check(hits >= 90, "h=" + std::to_string(h) + ": k = n-h = " + std::to_string(100 - 2 * h) + " chosen in " + std::to_string(hits) +
                            "/100 (median pick " + std::to_string(picks[50]) + ")");
  }
  return v;
}

Verdict amse_oracle() {
  Verdict v;
  auto cfg = ar5_study({1000}, {3}, 2000, 8'000'000);
  cfg.k_grid.kind = KGridRule::Kind::Explicit;
  cfg.k_grid.explicit_k = {100, 200, 500};
  const auto s = monte_carlo_study(cfg);
  const auto& c = s.cells.at(0);
  const auto report = ab_ratio(kAr5, 1.0, 3);
  for (std::size_t i = 0; i < c.k.size(); ++i) {
    if (c.k[i] == c.n) continue;
    const double want = amse(report, static_cast<double>(c.k[i]));
    const double z = (c.mean_score[i] - want) / c.se_score[i];
    v.check(std::abs(z) <= 3.0, "k=" + std::to_string(c.k[i]) + ": mean score " + fmt(c.mean_score[i]) + " vs " +
                                    fmt(want) + " (z = " + fmt(z, 2) + ")");
  }
  return v;
}

Verdict properties() {
  Verdict v;
  const std::string cmd = std::string(PAEBACK_UNIT_TESTS_PATH) + " --test-suite-exclude=slow --minimal 2>&1";
  const auto t0 = std::chrono::steady_clock::now();
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) {
    v.check(false, "could not start the unit test binary");
    return v;
  }
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  const int raw = pclose(p);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = WIFEXITED(raw) && WEXITSTATUS(raw) == 0;
  v.check(ok, std::string("property and unit suites ") + (ok ? "passed" : "failed"));
  v.check(secs < 30.0, "suite runtime " + fmt(secs, 1) + " s (limit 30 s)");
  if (!ok) v.detail << "\n" << out;
  return v;
}

}  // namespace

// With arguments, only the listed criterion numbers run.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

  struct Criterion {
    int id;
    const char* title;
    Verdict (*run)();
  };
  const Criterion criteria[] = {
      {1, "AR(5) h=3 golden constants", golden_ar5},
      {2, "AR(2) plug-in golden constants and lambda bounds", golden_ar2},
      {3, "optimal development fraction for lambda in {4.37, 15.30}", optimal_fraction},
      {4, "Monte Carlo MSE(n), YW oracle AR(5), 1000 replicates", baseline_mse},
      {5, "median predictive-efficiency curve, n=1000 h=3", median_curve},
      {6, "TAR(1) with ATE, n=1000 h=5, 1000 replicates", tar_ate},
      {7, "overlapping-window baseline prefers the largest window", fukuchi},
      {8, "Monte Carlo score vs (A + B/k)/h at k in {100, 200, 500}", amse_oracle},
      {9, "property suites", properties},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const Verdict v = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << fmt(secs, 1) << " s)"
              << v.detail.str() << '\n'
              << std::flush;
  }
  if (only.empty() || std::find(only.begin(), only.end(), 10) != only.end())
    std::cout << "N/A  criterion 10: real-data studies need external stock and COVID data and the full "
               "model zoo; not reproducible offline, covered by criteria 1-9\n";
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
