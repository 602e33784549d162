#include "paeback/paeback.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "paeback/asymptotics.hpp"
#include "paeback/engine.hpp"
#include "paeback/error.hpp"
#include "paeback/serialize.hpp"

struct pb_series {
  paeback::TimeSeries value;
};
struct pb_model {
  paeback::ARModel value;
};
struct pb_tune {
  paeback::TuneResult value;
};
struct pb_report {
  paeback::AsymptoticReport value;
};
struct pb_curve {
  paeback::EfficiencyCurve value;
};
struct pb_study {
  paeback::StudySummary value;
};
struct pb_fukuchi {
  paeback::FukuchiResult value;
};

namespace {

thread_local std::string last_error;

pb_status to_status(paeback::ErrorCode c) {
  switch (c) {
    case paeback::ErrorCode::InvalidArgument: return PB_ERR_INVALID_ARGUMENT;
    case paeback::ErrorCode::Io: return PB_ERR_IO;
    case paeback::ErrorCode::Parse: return PB_ERR_PARSE;
    case paeback::ErrorCode::InsufficientData: return PB_ERR_INSUFFICIENT_DATA;
    case paeback::ErrorCode::Singular: return PB_ERR_SINGULAR;
    case paeback::ErrorCode::NotStationary: return PB_ERR_NOT_STATIONARY;
    case paeback::ErrorCode::Convergence: return PB_ERR_CONVERGENCE;
  }
  return PB_ERR_INTERNAL;
}

template <class F>
pb_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return PB_OK;
  } catch (const paeback::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PB_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) paeback::fail(paeback::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

paeback::Criterion to_criterion(pb_criterion c) {
  switch (c) {
    case PB_MSE: return paeback::Criterion::MSE;
    case PB_MAE: return paeback::Criterion::MAE;
    case PB_MAPE: return paeback::Criterion::MAPE;
    case PB_RMSE: return paeback::Criterion::RMSE;
    case PB_SMAPE: return paeback::Criterion::SMAPE;
  }
  paeback::fail(paeback::ErrorCode::InvalidArgument, "unknown criterion");
}

paeback::FitMethod to_method(const pb_method* m) {
  need(m, "method");
  paeback::FitMethod out;
  switch (m->kind) {
    case PB_METHOD_YW: out = paeback::FitMethod::yule_walker(m->order); break;
    case PB_METHOD_AL: out = paeback::FitMethod::penalized(paeback::TuneMethod::AdaptiveLasso, m->order); break;
    case PB_METHOD_AE: out = paeback::FitMethod::penalized(paeback::TuneMethod::AdaptiveElasticNet, m->order); break;
    case PB_METHOD_ATE:
      out = paeback::FitMethod::penalized(paeback::TuneMethod::TunedAdaptiveElasticNet, m->order);
      break;
    default: paeback::fail(paeback::ErrorCode::InvalidArgument, "unknown method kind");
  }
  if (m->lambda_count > 0) {
    need(m->lambda_grid, "lambda_grid");
    out.lambda_grid.assign(m->lambda_grid, m->lambda_grid + m->lambda_count);
  }
  if (m->alpha_count > 0) {
    need(m->alpha_grid, "alpha_grid");
    out.alpha_grid.assign(m->alpha_grid, m->alpha_grid + m->alpha_count);
  }
  out.tune.gamma = m->gamma;
  out.tune.monotone_weights = m->monotone_weights != 0;
  return out;
}

paeback::Generator to_generator(pb_generator g, const pb_model* ar, double tar_sigma) {
  if (g == PB_GEN_AR) {
    need(ar, "ar_model");
    return paeback::ArGenerator{ar->value};
  }
  if (g == PB_GEN_TAR1) return paeback::Tar1Generator{tar_sigma};
  paeback::fail(paeback::ErrorCode::InvalidArgument, "unknown generator");
}

std::span<const std::size_t> sizes(const size_t* p, size_t n) {
  if (n == 0) return {};
  need(p, "size array");
  return {p, n};
}

}  // namespace

extern "C" {

const char* pb_version(void) { return "0.1.0"; }

const char* pb_last_error(void) { return last_error.c_str(); }

const char* pb_status_string(pb_status status) {
  switch (status) {
    case PB_OK: return "ok";
    case PB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PB_ERR_IO: return "i/o error";
    case PB_ERR_PARSE: return "parse error";
    case PB_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case PB_ERR_SINGULAR: return "singular system";
    case PB_ERR_NOT_STATIONARY: return "not stationary";
    case PB_ERR_CONVERGENCE: return "no convergence";
    case PB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void pb_string_free(char* s) { std::free(s); }

void pb_method_init(pb_method* m, pb_method_kind kind, size_t order) {
  if (m == nullptr) return;
  *m = pb_method{};
  m->kind = kind;
  m->order = order;
  m->gamma = 1.0;
  m->monotone_weights = 1;
}

void pb_sim_spec_init(pb_sim_spec* s) {
  if (s == nullptr) return;
  *s = pb_sim_spec{};
  s->burn_in = 500;
  s->generator = PB_GEN_TAR1;
  s->tar_sigma = 1.0;
}

void pb_study_config_init(pb_study_config* c) {
  if (c == nullptr) return;
  *c = pb_study_config{};
  c->generator = PB_GEN_AR;
  c->tar_sigma = 1.0;
  c->replicates = 1;
  c->k_grid_rule = PB_KGRID_DEFAULT;
  c->burn_in = 500;
  c->criterion = PB_MSE;
  c->jobs = 1;
}

pb_status pb_parse_method_kind(const char* name, pb_method_kind* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    switch (paeback::parse_method_kind(name)) {
      case paeback::FitMethod::Kind::YuleWalker: *out = PB_METHOD_YW; break;
      case paeback::FitMethod::Kind::AdaptiveLasso: *out = PB_METHOD_AL; break;
      case paeback::FitMethod::Kind::AdaptiveElasticNet: *out = PB_METHOD_AE; break;
      case paeback::FitMethod::Kind::TunedAdaptiveElasticNet: *out = PB_METHOD_ATE; break;
    }
  });
}

pb_status pb_parse_criterion(const char* name, pb_criterion* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<pb_criterion>(static_cast<int>(paeback::parse_criterion(name)));
  });
}

pb_status pb_series_create(const double* values, size_t n, pb_series** out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(values, "values");
    *out = new pb_series{paeback::TimeSeries(std::vector<double>(values, values + n))};
  });
}

pb_status pb_series_load_csv(const char* path, const char* column_name, size_t column_index, const char* label_name,
                             pb_series** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    paeback::ColumnRef col = column_name ? paeback::ColumnRef(std::string(column_name)) : paeback::ColumnRef(column_index);
    std::optional<paeback::ColumnRef> label;
    if (label_name) label = paeback::ColumnRef(std::string(label_name));
    *out = new pb_series{paeback::load_csv(path, col, label)};
  });
}

void pb_series_free(pb_series* s) { delete s; }

size_t pb_series_length(const pb_series* s) { return s ? s->value.size() : 0; }

const double* pb_series_data(const pb_series* s) { return s ? s->value.values().data() : nullptr; }

pb_status pb_series_slice(const pb_series* s, size_t first, size_t count, pb_series** out) {
  return guarded([&] {
    need(s, "series");
    need(out, "out");
    *out = new pb_series{s->value.slice(first, count)};
  });
}

pb_status pb_series_log_return(const pb_series* prices, pb_series** out) {
  return guarded([&] {
    need(prices, "prices");
    need(out, "out");
    *out = new pb_series{paeback::log_return(prices->value)};
  });
}

pb_status pb_series_encode(const pb_series* s, pb_format format, char** out) {
  return guarded([&] {
    need(s, "series");
    need(out, "out");
    *out = dup_string(format == PB_FORMAT_CSV ? paeback::to_csv(s->value) : paeback::to_json(s->value));
  });
}

pb_status pb_evaluate(const double* actual, const double* predicted, size_t len, pb_criterion criterion, double* out) {
  return guarded([&] {
    need(out, "out");
    if (len > 0) {
      need(actual, "actual");
      need(predicted, "predicted");
    }
    *out = paeback::evaluate({actual, len}, {predicted, len}, to_criterion(criterion));
  });
}

pb_status pb_model_create(const double* phi, size_t p, double sigma2, double mean, pb_model** out) {
  return guarded([&] {
    need(out, "out");
    if (p > 0) need(phi, "phi");
    paeback::require(sigma2 > 0.0, "innovation variance must be positive");
    paeback::ARModel m;
    m.phi.assign(phi, phi + p);
    m.sigma2 = sigma2;
    m.mean = mean;
    *out = new pb_model{std::move(m)};
  });
}

pb_status pb_model_fit(const pb_series* window, const pb_method* method, pb_model** out) {
  return guarded([&] {
    need(window, "window");
    need(out, "out");
    *out = new pb_model{paeback::fit_window(to_method(method), window->value.values())};
  });
}

void pb_model_free(pb_model* m) { delete m; }
size_t pb_model_order(const pb_model* m) { return m ? m->value.order() : 0; }
const double* pb_model_phi(const pb_model* m) { return m ? m->value.phi.data() : nullptr; }
double pb_model_sigma2(const pb_model* m) { return m ? m->value.sigma2 : 0.0; }
double pb_model_mean(const pb_model* m) { return m ? m->value.mean : 0.0; }

pb_status pb_model_encode(const pb_model* m, char** out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    *out = dup_string(paeback::to_json(m->value));
  });
}

int pb_is_stationary(const double* phi, size_t p) {
  if (p > 0 && phi == nullptr) return 0;
  return paeback::is_stationary({phi, p}) ? 1 : 0;
}

pb_status pb_forecast(const pb_model* m, const pb_series* history, size_t h, double* out) {
  return guarded([&] {
    need(m, "model");
    need(history, "history");
    need(out, "out");
    const auto f = paeback::forecast(m->value, history->value, h);
    std::copy(f.begin(), f.end(), out);
  });
}

pb_status pb_simulate(const pb_sim_spec* spec, pb_series** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    paeback::SimSpec s;
    s.n = spec->n;
    s.seed = spec->seed;
    s.burn_in = spec->burn_in;
    s.generator = to_generator(spec->generator, spec->ar_model, spec->tar_sigma);
    *out = new pb_series{paeback::simulate(s)};
  });
}

pb_status pb_tune_sw(const pb_series* window, const pb_method* method, pb_tune** out) {
  return guarded([&] {
    need(window, "window");
    need(out, "out");
    const auto m = to_method(method);
    paeback::require(m.is_penalized(), "tuning needs method AL, AE or ATE");
    *out = new pb_tune{paeback::tune_sw(window->value.values(), m.order, m.tune_method(), m.lambda_grid, m.alpha_grid, m.tune)};
  });
}

void pb_tune_free(pb_tune* t) { delete t; }
double pb_tune_lambda(const pb_tune* t) { return t ? t->value.penalty.lambda : 0.0; }
double pb_tune_alpha(const pb_tune* t) { return t ? t->value.penalty.alpha : 0.0; }
size_t pb_tune_order(const pb_tune* t) { return t ? static_cast<size_t>(t->value.coef.size()) : 0; }
const double* pb_tune_coefficients(const pb_tune* t) { return t ? t->value.coef.data() : nullptr; }

pb_status pb_tune_encode(const pb_tune* t, char** out) {
  return guarded([&] {
    need(t, "tune");
    need(out, "out");
    const auto& c = t->value.coef;
    *out = dup_string(paeback::to_json(t->value.penalty, {c.data(), static_cast<std::size_t>(c.size())}));
  });
}

pb_status pb_report_compute(const double* phi, size_t p, double sigma2, size_t h, pb_report** out) {
  return guarded([&] {
    need(out, "out");
    if (p > 0) need(phi, "phi");
    *out = new pb_report{paeback::ab_ratio({phi, p}, sigma2, h)};
  });
}

pb_status pb_report_estimate(const pb_series* s, size_t p, size_t h, pb_report** out) {
  return guarded([&] {
    need(s, "series");
    need(out, "out");
    *out = new pb_report{paeback::estimate_ab_ratio(s->value, p, h)};
  });
}

void pb_report_free(pb_report* r) { delete r; }
double pb_report_ratio(const pb_report* r) { return r ? r->value.ratio : 0.0; }
double pb_report_a(const pb_report* r) { return r ? r->value.A : 0.0; }
double pb_report_b(const pb_report* r) { return r ? r->value.B : 0.0; }

pb_status pb_report_encode(const pb_report* r, char** out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    *out = dup_string(paeback::to_json(r->value));
  });
}

pb_status pb_amse(const pb_report* r, double k, double* out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    *out = paeback::amse(r->value, k);
  });
}

pb_status pb_asymptotic_rp(size_t k, size_t n, double ab, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = paeback::asymptotic_rp(k, n, ab);
  });
}

pb_status pb_optimal_k(size_t n, double lambda, double ab, size_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = paeback::optimal_k(n, lambda, ab);
  });
}

pb_status pb_curve_compute(const pb_series* s, size_t n, size_t h, const size_t* k_grid, size_t k_count,
                           const pb_method* method, pb_criterion criterion, pb_curve** out) {
  return guarded([&] {
    need(s, "series");
    need(out, "out");
    *out = new pb_curve{paeback::efficiency_curve(s->value.values(), n, h, sizes(k_grid, k_count), to_method(method),
                                                  to_criterion(criterion))};
  });
}

void pb_curve_free(pb_curve* c) { delete c; }
size_t pb_curve_size(const pb_curve* c) { return c ? c->value.points.size() : 0; }

pb_status pb_curve_point(const pb_curve* c, size_t i, size_t* k, double* r_s, double* score, double* r_p) {
  return guarded([&] {
    need(c, "curve");
    paeback::require(i < c->value.points.size(), "curve point index out of range");
    const auto& pt = c->value.points[i];
    if (k) *k = pt.k;
    if (r_s) *r_s = pt.r_s;
    if (score) *score = pt.score;
    if (r_p) *r_p = pt.r_p;
  });
}

size_t pb_curve_optimal_k(const pb_curve* c) {
  if (c == nullptr || c->value.points.empty()) return 0;
  return paeback::select_optimal_k(c->value);
}

pb_status pb_curve_encode(const pb_curve* c, pb_format format, char** out) {
  return guarded([&] {
    need(c, "curve");
    need(out, "out");
    *out = dup_string(format == PB_FORMAT_CSV ? paeback::to_csv(c->value) : paeback::to_json(c->value));
  });
}

pb_status pb_study_run(const pb_study_config* config, pb_study** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    paeback::StudyConfig c;
    c.generator = to_generator(config->generator, config->ar_model, config->tar_sigma);
    const auto ns = sizes(config->ns, config->n_count);
    const auto hs = sizes(config->hs, config->h_count);
    c.ns.assign(ns.begin(), ns.end());
    c.hs.assign(hs.begin(), hs.end());
    c.replicates = config->replicates;
    switch (config->k_grid_rule) {
      case PB_KGRID_DEFAULT: c.k_grid.kind = paeback::KGridRule::Kind::Default; break;
      case PB_KGRID_ALL: c.k_grid.kind = paeback::KGridRule::Kind::All; break;
      case PB_KGRID_FULL_ONLY: c.k_grid.kind = paeback::KGridRule::Kind::FullOnly; break;
      case PB_KGRID_EXPLICIT: {
        c.k_grid.kind = paeback::KGridRule::Kind::Explicit;
        const auto ks = sizes(config->k_values, config->k_count);
        c.k_grid.explicit_k.assign(ks.begin(), ks.end());
        break;
      }
      default: paeback::fail(paeback::ErrorCode::InvalidArgument, "unknown k grid rule");
    }
    if (config->method_count > 0) need(config->methods, "methods");
    for (size_t i = 0; i < config->method_count; ++i) c.methods.push_back(to_method(&config->methods[i]));
    c.base_seed = config->base_seed;
    c.burn_in = config->burn_in;
    c.criterion = to_criterion(config->criterion);
    c.jobs = config->jobs;
    *out = new pb_study{paeback::monte_carlo_study(c)};
  });
}

void pb_study_free(pb_study* s) { delete s; }
size_t pb_study_cell_count(const pb_study* s) { return s ? s->value.cells.size() : 0; }

pb_status pb_study_cell_baseline(const pb_study* s, size_t cell, double* mean_score_n, double* se_score_n) {
  return guarded([&] {
    need(s, "study");
    paeback::require(cell < s->value.cells.size(), "cell index out of range");
    if (mean_score_n) *mean_score_n = s->value.cells[cell].mean_score_n;
    if (se_score_n) *se_score_n = s->value.cells[cell].se_score_n;
  });
}

pb_status pb_study_encode(const pb_study* s, pb_format format, char** out) {
  return guarded([&] {
    need(s, "study");
    need(out, "out");
    *out = dup_string(format == PB_FORMAT_CSV ? paeback::to_csv(s->value) : paeback::to_json(s->value));
  });
}

pb_status pb_fukuchi_run(const pb_series* s, size_t h, const size_t* k_grid, size_t k_count, const pb_method* method,
                         pb_fukuchi** out) {
  return guarded([&] {
    need(s, "series");
    need(out, "out");
    *out = new pb_fukuchi{paeback::fukuchi_baseline(s->value.values(), h, sizes(k_grid, k_count), to_method(method))};
  });
}

void pb_fukuchi_free(pb_fukuchi* f) { delete f; }
size_t pb_fukuchi_selected(const pb_fukuchi* f) { return f ? f->value.k_selected : 0; }

pb_status pb_fukuchi_encode(const pb_fukuchi* f, pb_format format, char** out) {
  return guarded([&] {
    need(f, "fukuchi");
    need(out, "out");
    *out = dup_string(format == PB_FORMAT_CSV ? paeback::to_csv(f->value) : paeback::to_json(f->value));
  });
}

}  // extern "C"
