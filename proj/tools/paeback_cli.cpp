// Command-line front-end. Every subcommand is a thin adapter over the C API
// in paeback.h; numeric output is whatever the library encodes.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paeback/paeback.h"

namespace {

using nlohmann::json;

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(pb_status s) {
  if (s == PB_OK) return;
  std::string msg = pb_last_error();
  if (msg.empty()) msg = pb_status_string(s);
  if (s == PB_ERR_INVALID_ARGUMENT) throw UsageError(msg);
  throw DataError(msg);
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using SeriesPtr = std::unique_ptr<pb_series, Deleter<pb_series, pb_series_free>>;
using ModelPtr = std::unique_ptr<pb_model, Deleter<pb_model, pb_model_free>>;
using ReportPtr = std::unique_ptr<pb_report, Deleter<pb_report, pb_report_free>>;
using CurvePtr = std::unique_ptr<pb_curve, Deleter<pb_curve, pb_curve_free>>;
using StudyPtr = std::unique_ptr<pb_study, Deleter<pb_study, pb_study_free>>;
using FukuchiPtr = std::unique_ptr<pb_fukuchi, Deleter<pb_fukuchi, pb_fukuchi_free>>;
using TunePtr = std::unique_ptr<pb_tune, Deleter<pb_tune, pb_tune_free>>;

std::string take_string(char* s) {
  std::string out(s);
  pb_string_free(s);
  return out;
}

// JSON config file: a flat object whose keys are long option names of the
// selected subcommand. An optional "subcommand" key must name that subcommand.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* app) : app_(app) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw CLI::ConfigError(std::string("invalid JSON in config file: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConfigError("config file must hold a JSON object");

    const auto selected = app_->get_subcommands();
    const std::string sub = selected.empty() ? std::string() : selected.front()->get_name();
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      if (key == "subcommand") {
        if (!value.is_string() || value.get<std::string>() != sub) {
          throw CLI::ConfigError("config file is for subcommand " + value.dump() + ", not '" + sub + "'");
        }
        continue;
      }
      if (selected.empty() || selected.front()->get_option_no_throw("--" + key) == nullptr) {
        throw CLI::ConfigError("unknown config key '" + key + "' for " + sub);
      }
      CLI::ConfigItem item;
      item.parents = {sub};
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(key, v));
      } else {
        item.inputs.push_back(scalar(key, value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const std::string& key, const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConfigError("config key '" + key + "' must be a scalar or an array of scalars");
  }

  const CLI::App* app_;
};

// Options shared by every subcommand.
struct Common {
  std::string format = "json";
  std::string output;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--output,-o", c.output, "Output file (default: stdout)");
  sub->fallthrough();
}

pb_format format_of(const Common& c) { return c.format == "csv" ? PB_FORMAT_CSV : PB_FORMAT_JSON; }

void require_json(const Common& c, const std::string& cmd) {
  if (c.format != "json") throw UsageError("--format csv is not available for '" + cmd + "'");
}

void emit(const Common& c, const std::string& text) {
  std::string body = text;
  if (body.empty() || body.back() != '\n') body += '\n';
  if (c.output.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw DataError("cannot open output file '" + c.output + "'");
  out << body;
  if (!out) throw DataError("cannot write output file '" + c.output + "'");
}

// --seed N|auto with PAEBACK_SEED as a fallback.
struct SeedOption {
  std::string value;

  std::uint64_t resolve() const {
    std::string text = value;
    if (text.empty()) {
      if (const char* env = std::getenv("PAEBACK_SEED")) text = env;
    }
    if (text.empty()) throw UsageError("a seed is required: pass --seed N, --seed auto, or set PAEBACK_SEED");
    if (text == "auto") {
      std::random_device rd;
      const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      std::cerr << "paeback: using seed " << seed << '\n';
      return seed;
    }
    std::size_t pos = 0;
    unsigned long long parsed = 0;
    try {
      parsed = std::stoull(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != text.size() || text.front() == '-') throw UsageError("invalid seed '" + text + "'");
    return parsed;
  }
};

void add_seed(CLI::App* sub, SeedOption& s) {
  sub->add_option("--seed", s.value, "Random seed (integer or 'auto'); falls back to PAEBACK_SEED");
}

// --input with a value column and optional label column.
struct InputOption {
  std::string path;
  std::string column = "value";
  std::optional<std::size_t> column_index;
  std::string label_column;

  SeriesPtr load() const {
    pb_series* s = nullptr;
    check(pb_series_load_csv(path.c_str(), column_index ? nullptr : column.c_str(), column_index.value_or(0),
                             label_column.empty() ? nullptr : label_column.c_str(), &s));
    return SeriesPtr(s);
  }
};

CLI::Option* add_input(CLI::App* sub, InputOption& in, bool required = true) {
  auto* opt = sub->add_option("--input,-i", in.path, "Input CSV file (header row required)");
  if (required) opt->required();
  sub->add_option("--column", in.column, "Value column name")->capture_default_str();
  sub->add_option("--column-index", in.column_index, "Value column, 0-based (overrides --column)");
  sub->add_option("--label-column", in.label_column, "Optional label column name");
  return opt;
}

// Fitting method: KIND[:ORDER] where KIND is YW, AL, AE or ATE.
struct MethodOption {
  std::string spec = "YW";
  std::size_t order = 1;
  std::vector<double> lambda_grid;
  std::vector<double> alpha_grid;
  double gamma = 1.0;
  bool no_monotone = false;
};

void add_method_tuning(CLI::App* sub, MethodOption& m) {
  sub->add_option("--lambda-grid", m.lambda_grid, "Penalty grid (default: 50 log-spaced values)")->delimiter(',');
  sub->add_option("--alpha-grid", m.alpha_grid, "Mixing grid for ATE (default: 0.1..0.9)")->delimiter(',');
  sub->add_option("--gamma", m.gamma, "Adaptive-weight exponent")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--no-monotone", m.no_monotone, "Skip the non-increasing weight adjustment");
}

void add_method(CLI::App* sub, MethodOption& m, const char* default_spec = "YW") {
  m.spec = default_spec;
  sub->add_option("--method", m.spec, "YW, AL, AE or ATE, optionally with :ORDER")->capture_default_str();
  sub->add_option("--order,-p", m.order, "AR order (YW) or maximum order p_m (penalized)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_method_tuning(sub, m);
}

pb_method to_method(const std::string& spec, const MethodOption& m) {
  std::string kind = spec;
  std::size_t order = m.order;
  if (const auto colon = spec.find(':'); colon != std::string::npos) {
    kind = spec.substr(0, colon);
    const std::string digits = spec.substr(colon + 1);
    std::size_t pos = 0;
    try {
      order = std::stoul(digits, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (digits.empty() || pos != digits.size() || order == 0) throw UsageError("invalid order in method '" + spec + "'");
  }
  pb_method_kind k{};
  check(pb_parse_method_kind(kind.c_str(), &k));
  pb_method out;
  pb_method_init(&out, k, order);
  out.lambda_grid = m.lambda_grid.empty() ? nullptr : m.lambda_grid.data();
  out.lambda_count = m.lambda_grid.size();
  out.alpha_grid = m.alpha_grid.empty() ? nullptr : m.alpha_grid.data();
  out.alpha_count = m.alpha_grid.size();
  out.gamma = m.gamma;
  out.monotone_weights = m.no_monotone ? 0 : 1;
  return out;
}

// Data-generating process: --ar-phi or --tar1.
struct GeneratorOption {
  std::vector<double> ar_phi;
  bool tar1 = false;
  double sigma2 = 1.0;
  double mean = 0.0;
  double tar_sigma = 1.0;
  std::size_t burn_in = 500;

  ModelPtr ar_model() const {
    if (tar1) return nullptr;
    pb_model* m = nullptr;
    check(pb_model_create(ar_phi.data(), ar_phi.size(), sigma2, mean, &m));
    return ModelPtr(m);
  }
};

void add_generator(CLI::App* sub, GeneratorOption& g) {
  auto* phi = sub->add_option("--ar-phi", g.ar_phi, "Simulate AR(p) with these coefficients")->delimiter(',');
  auto* tar = sub->add_flag("--tar1", g.tar1, "Simulate the threshold AR(1) process");
  phi->excludes(tar);
  tar->excludes(phi);
  sub->add_option("--sigma2", g.sigma2, "AR innovation variance")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--mean", g.mean, "AR process mean")->capture_default_str();
  sub->add_option("--tar-sigma", g.tar_sigma, "TAR innovation standard deviation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--burn-in", g.burn_in, "Discarded warm-up samples")->capture_default_str();
}

void validate_generator(const GeneratorOption& g) {
  if (!g.tar1 && g.ar_phi.empty()) throw UsageError("one of --ar-phi or --tar1 is required");
}


// ---------------------------------------------------------------------------

struct SimulateCmd {
  Common common;
  GeneratorOption gen;
  SeedOption seed;
  std::size_t n = 0;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("simulate", "Simulate an AR or threshold AR series");
    add_common(sub, common);
    add_generator(sub, gen);
    add_seed(sub, seed);
    sub->add_option("--n", n, "Series length")->required()->check(CLI::PositiveNumber);
  }

  void run() {
    validate_generator(gen);
    const auto model = gen.ar_model();
    pb_sim_spec spec;
    pb_sim_spec_init(&spec);
    spec.n = n;
    spec.seed = seed.resolve();
    spec.burn_in = gen.burn_in;
    spec.generator = gen.tar1 ? PB_GEN_TAR1 : PB_GEN_AR;
    spec.ar_model = model.get();
    spec.tar_sigma = gen.tar_sigma;
    pb_series* s = nullptr;
    check(pb_simulate(&spec, &s));
    SeriesPtr series(s);
    char* text = nullptr;
    check(pb_series_encode(series.get(), format_of(common), &text));
    emit(common, take_string(text));
  }
};

struct FitCmd {
  Common common;
  InputOption input;
  MethodOption method;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("fit", "Fit an AR model (Yule-Walker or tuned penalized)");
    add_common(sub, common);
    add_input(sub, input);
    add_method(sub, method);
  }

  void run() {
    require_json(common, "fit");
    const pb_method m = to_method(method.spec, method);
    const auto series = input.load();
    pb_model* out = nullptr;
    check(pb_model_fit(series.get(), &m, &out));
    ModelPtr model(out);
    char* text = nullptr;
    check(pb_model_encode(model.get(), &text));
    emit(common, take_string(text));
  }
};

struct ForecastCmd {
  Common common;
  InputOption input;
  MethodOption method;
  std::size_t h = 1;
  std::optional<std::size_t> k;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("forecast", "Fit on the most recent k values and forecast h steps");
    add_common(sub, common);
    add_input(sub, input);
    add_method(sub, method);
    sub->add_option("--h", h, "Forecast horizon")->required()->check(CLI::PositiveNumber);
    sub->add_option("--k", k, "Development size (default: the whole series)")->check(CLI::PositiveNumber);
  }

  void run() {
    const pb_method m = to_method(method.spec, method);
    const auto series = input.load();
    const std::size_t len = pb_series_length(series.get());
    const std::size_t dev = k.value_or(len);
    if (dev > len) throw DataError("insufficient data: --k " + std::to_string(dev) + " exceeds series length " + std::to_string(len));
    pb_series* w = nullptr;
    check(pb_series_slice(series.get(), len - dev, dev, &w));
    SeriesPtr window(w);
    pb_model* fitted = nullptr;
    check(pb_model_fit(window.get(), &m, &fitted));
    ModelPtr model(fitted);
    std::vector<double> out(h);
    check(pb_forecast(model.get(), window.get(), h, out.data()));

    if (common.format == "csv") {
      std::ostringstream csv;
      csv.precision(17);
      csv << "step,forecast\n";
      for (std::size_t i = 0; i < h; ++i) csv << i + 1 << ',' << out[i] << '\n';
      emit(common, csv.str());
      return;
    }
    char* text = nullptr;
    check(pb_model_encode(model.get(), &text));
    json doc{{"k", dev}, {"h", h}, {"model", json::parse(take_string(text))}, {"forecast", out}};
    emit(common, doc.dump());
  }
};

struct CurveCmd {
  Common common;
  InputOption input;
  MethodOption method;
  std::optional<std::size_t> n;
  std::size_t h = 1;
  std::vector<std::size_t> k_grid;
  std::string criterion = "MSE";

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("curve", "Dual-efficiency curve over development sizes k");
    add_common(sub, common);
    add_input(sub, input);
    add_method(sub, method);
    sub->add_option("--n", n, "History length (default: series length - h)")->check(CLI::PositiveNumber);
    sub->add_option("--h", h, "Validation horizon")->required()->check(CLI::PositiveNumber);
    sub->add_option("--k", k_grid, "Development sizes (default grid when omitted)")->delimiter(',');
    sub->add_option("--criterion", criterion, "MSE, MAE, MAPE, RMSE or SMAPE")->capture_default_str();
  }

  void run() {
    const pb_method m = to_method(method.spec, method);
    pb_criterion crit{};
    check(pb_parse_criterion(criterion.c_str(), &crit));
    const auto series = input.load();
    const std::size_t len = pb_series_length(series.get());
    const std::size_t hist = n.value_or(len > h ? len - h : 0);
    if (hist == 0) throw DataError("insufficient data: series of length " + std::to_string(len) + " leaves no history for h = " + std::to_string(h));
    pb_curve* c = nullptr;
    check(pb_curve_compute(series.get(), hist, h, k_grid.empty() ? nullptr : k_grid.data(), k_grid.size(), &m, crit, &c));
    CurvePtr curve(c);
    char* text = nullptr;
    check(pb_curve_encode(curve.get(), format_of(common), &text));
    emit(common, take_string(text));
  }
};

struct AsymCmd {
  Common common;
  InputOption input;
  std::vector<double> phi;
  std::size_t order = 1;
  std::size_t h = 1;
  double sigma2 = 1.0;
  std::optional<double> lambda;
  std::optional<std::size_t> n;
  std::vector<std::size_t> ks;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("asym", "Asymptotic constants A, B, A/B and the optimal subsample size");
    add_common(sub, common);
    auto* phi_opt = sub->add_option("--phi", phi, "AR coefficients")->delimiter(',');
    auto* in_opt = add_input(sub, input, false);
    phi_opt->excludes(in_opt);
    in_opt->excludes(phi_opt);
    sub->add_option("--order,-p", order, "AR order for the Yule-Walker plug-in (with --input)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--h", h, "Forecast horizon")->required()->check(CLI::PositiveNumber);
    sub->add_option("--sigma2", sigma2, "Innovation variance (with --phi)")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--lambda", lambda, "Limit of n times the irrelevancy tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--n", n, "History length for k_opt and Ar_p")->check(CLI::PositiveNumber);
    sub->add_option("--k", ks, "Development sizes at which to report Ar_p (needs --n)")->delimiter(',');
  }

  void run() {
    require_json(common, "asym");
    if (phi.empty() && input.path.empty()) throw UsageError("one of --phi or --input is required");
    if (lambda && !n) throw UsageError("--lambda needs --n");
    if (!ks.empty() && !n) throw UsageError("--k needs --n");

    pb_report* r = nullptr;
    if (!phi.empty()) {
      check(pb_report_compute(phi.data(), phi.size(), sigma2, h, &r));
    } else {
      const auto series = input.load();
      check(pb_report_estimate(series.get(), order, h, &r));
    }
    ReportPtr report(r);
    char* text = nullptr;
    check(pb_report_encode(report.get(), &text));
    json doc = json::parse(take_string(text));
    const double ab = pb_report_ratio(report.get());

    if (n) doc["n"] = *n;
    if (lambda) {
      std::size_t k_opt = 0;
      check(pb_optimal_k(*n, *lambda, ab, &k_opt));
      doc["lambda"] = *lambda;
      doc["epsilon_n"] = *lambda / static_cast<double>(*n);
      doc["k_opt"] = k_opt;
    }
    if (!ks.empty()) {
      json rows = json::array();
      for (std::size_t k : ks) {
        double rp = 0.0;
        check(pb_asymptotic_rp(k, *n, ab, &rp));
        double am = 0.0;
        check(pb_amse(report.get(), static_cast<double>(k), &am));
        rows.push_back(json{{"k", k}, {"ar_p", rp}, {"amse", am}});
      }
      doc["ar_p"] = rows;
    }
    emit(common, doc.dump());
  }
};

struct TuneCmd {
  Common common;
  InputOption input;
  MethodOption method;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("tune", "Sliding-window penalty tuning on a development window");
    add_common(sub, common);
    add_input(sub, input);
    add_method(sub, method, "ATE");
  }

  void run() {
    require_json(common, "tune");
    const pb_method m = to_method(method.spec, method);
    if (m.kind == PB_METHOD_YW) throw UsageError("tune needs a penalized method (AL, AE or ATE)");
    const auto series = input.load();
    pb_tune* t = nullptr;
    check(pb_tune_sw(series.get(), &m, &t));
    TunePtr tune(t);
    char* text = nullptr;
    check(pb_tune_encode(tune.get(), &text));
    emit(common, take_string(text));
  }
};

struct McCmd {
  Common common;
  GeneratorOption gen;
  SeedOption seed;
  MethodOption method;
  std::vector<std::string> methods{"YW"};
  std::vector<std::size_t> ns;
  std::vector<std::size_t> hs;
  std::size_t replicates = 100;
  std::string k_rule = "default";
  std::vector<std::size_t> k_values;
  std::string criterion = "MSE";
  std::size_t jobs = 1;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("mc", "Monte Carlo study of efficiency curves");
    add_common(sub, common);
    add_generator(sub, gen);
    add_seed(sub, seed);
    sub->add_option("--method", methods, "Methods, each KIND[:ORDER]")->delimiter(',')->capture_default_str();
    sub->add_option("--order,-p", method.order, "Default order for methods given without :ORDER")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_method_tuning(sub, method);
    sub->add_option("--n", ns, "History lengths")->required()->delimiter(',')->check(CLI::PositiveNumber);
    sub->add_option("--h", hs, "Horizons")->required()->delimiter(',')->check(CLI::PositiveNumber);
    sub->add_option("--replicates,-r", replicates, "Replicates")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--k-grid", k_rule, "default, all, full or explicit (with --k)")
        ->check(CLI::IsMember({"default", "all", "full", "explicit"}))
        ->capture_default_str();
    sub->add_option("--k", k_values, "Development sizes for --k-grid explicit")->delimiter(',');
    sub->add_option("--criterion", criterion, "MSE, MAE, MAPE, RMSE or SMAPE")->capture_default_str();
    sub->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  }

  void run() {
    validate_generator(gen);
    std::vector<pb_method> ms;
    for (const auto& spec : methods) ms.push_back(to_method(spec, method));
    pb_criterion crit{};
    check(pb_parse_criterion(criterion.c_str(), &crit));
    if (k_rule == "explicit" && k_values.empty()) throw UsageError("--k-grid explicit needs --k");
    if (k_rule != "explicit" && !k_values.empty()) throw UsageError("--k needs --k-grid explicit");

    const auto model = gen.ar_model();
    pb_study_config c;
    pb_study_config_init(&c);
    c.generator = gen.tar1 ? PB_GEN_TAR1 : PB_GEN_AR;
    c.ar_model = model.get();
    c.tar_sigma = gen.tar_sigma;
    c.ns = ns.data();
    c.n_count = ns.size();
    c.hs = hs.data();
    c.h_count = hs.size();
    c.replicates = replicates;
    c.k_grid_rule = k_rule == "all"        ? PB_KGRID_ALL
                    : k_rule == "full"     ? PB_KGRID_FULL_ONLY
                    : k_rule == "explicit" ? PB_KGRID_EXPLICIT
                                           : PB_KGRID_DEFAULT;
    c.k_values = k_values.empty() ? nullptr : k_values.data();
    c.k_count = k_values.size();
    c.methods = ms.data();
    c.method_count = ms.size();
    c.base_seed = seed.resolve();
    c.burn_in = gen.burn_in;
    c.criterion = crit;
    c.jobs = jobs;

    pb_study* s = nullptr;
    check(pb_study_run(&c, &s));
    StudyPtr study(s);
    char* text = nullptr;
    check(pb_study_encode(study.get(), format_of(common), &text));
    emit(common, take_string(text));
  }
};

struct FukuchiCmd {
  Common common;
  InputOption input;
  MethodOption method;
  std::size_t h = 1;
  std::vector<std::size_t> k_grid;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("fukuchi", "Overlapping sliding-window risk baseline");
    add_common(sub, common);
    add_input(sub, input);
    add_method(sub, method);
    sub->add_option("--h", h, "Forecast horizon")->required()->check(CLI::PositiveNumber);
    sub->add_option("--k", k_grid, "Window sizes (default: all feasible)")->delimiter(',');
  }

  void run() {
    const pb_method m = to_method(method.spec, method);
    const auto series = input.load();
    pb_fukuchi* f = nullptr;
    check(pb_fukuchi_run(series.get(), h, k_grid.empty() ? nullptr : k_grid.data(), k_grid.size(), &m, &f));
    FukuchiPtr result(f);
    char* text = nullptr;
    check(pb_fukuchi_encode(result.get(), format_of(common), &text));
    emit(common, take_string(text));
  }
};

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Back-subsample selection for autoregressive forecasting"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(pb_version()));
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON file with option values; command-line flags take precedence");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  SimulateCmd simulate;
  FitCmd fit;
  ForecastCmd forecast;
  CurveCmd curve;
  AsymCmd asym;
  TuneCmd tune;
  McCmd mc;
  FukuchiCmd fukuchi;
  simulate.attach(app);
  fit.attach(app);
  forecast.attach(app);
  curve.attach(app);
  asym.attach(app);
  tune.attach(app);
  mc.attach(app);
  fukuchi.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "paeback: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "simulate") simulate.run();
    else if (name == "fit") fit.run();
    else if (name == "forecast") forecast.run();
    else if (name == "curve") curve.run();
    else if (name == "asym") asym.run();
    else if (name == "tune") tune.run();
    else if (name == "mc") mc.run();
    else if (name == "fukuchi") fukuchi.run();
  } catch (const UsageError& e) {
    std::cerr << "paeback: " << one_line(e.what()) << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "paeback: " << one_line(e.what()) << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "paeback: " << one_line(e.what()) << '\n';
    return kExitData;
  }
  return 0;
}
