#include "paeback/serialize.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

namespace paeback {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json report_json(const AsymptoticReport& r) {
  return json{{"phi", numbers(r.phi)},
              {"sigma2", number(r.sigma2)},
              {"h", r.h},
              {"a1", numbers(r.a1)},
              {"sigma_h2", numbers(r.sigma_h2)},
              {"traces", numbers(r.traces)},
              {"A", number(r.A)},
              {"B", number(r.B)},
              {"a_numerator", number(r.a_numerator())},
              {"trace_sum", number(r.trace_sum())},
              {"ratio", number(r.ratio)}};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string to_csv(const TimeSeries& s) {
  std::string out = "label,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.has_labels()) {
      const auto& l = s.labels()[i];
      if (l.find_first_of(",\"\r\n") != std::string::npos) {
        out += '"';
        for (char c : l) {
          if (c == '"') out += '"';
          out += c;
        }
        out += '"';
      } else {
        out += l;
      }
    } else {
      out += std::to_string(i + 1);
    }
    out += ',';
    out += format_number(s[i]);
    out += '\n';
  }
  return out;
}

std::string to_json(const TimeSeries& s) {
  json a = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.has_labels()) {
      a.push_back(json{{"label", s.labels()[i]}, {"value", s[i]}});
    } else {
      a.push_back(s[i]);
    }
  }
  return a.dump();
}

std::string to_json(const ARModel& m) {
  return json{{"phi", numbers(m.phi)}, {"order", m.order()}, {"sigma2", number(m.sigma2)}, {"mean", number(m.mean)}}
      .dump();
}

std::string to_json(const AsymptoticReport& r) { return report_json(r).dump(); }

std::string to_json(const PenaltySpec& p, std::span<const double> coef) {
  return json{{"lambda", number(p.lambda)},
              {"alpha", number(p.alpha)},
              {"gamma", number(p.gamma)},
              {"weights", numbers(p.weights)},
              {"monotone_adjusted", p.monotone_adjusted},
              {"coefficients", numbers(coef)}}
      .dump();
}

std::string to_csv(const EfficiencyCurve& c) {
  std::string out = "k,r_s,score,r_p\n";
  for (const auto& p : c.points) {
    out += std::to_string(p.k) + ',' + format_number(p.r_s) + ',' + format_number(p.score) + ',' +
           format_number(p.r_p) + '\n';
  }
  return out;
}

std::string to_json(const EfficiencyCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points) {
    pts.push_back(json{{"k", p.k}, {"r_s", number(p.r_s)}, {"score", number(p.score)}, {"r_p", number(p.r_p)}});
  }
  json fails = json::array();
  for (const auto& f : c.failures) fails.push_back(json{{"k", f.k}, {"message", f.message}});
  return json{{"n", c.n},
              {"h", c.h},
              {"criterion", std::string(criterion_name(c.criterion))},
              {"model", c.model_spec},
              {"points", pts},
              {"failures", fails}}
      .dump();
}

std::string to_csv(const StudySummary& s) {
  std::string out = "n,h,method,k,median_rp,mean_score,se_score,count\n";
  for (const auto& c : s.cells) {
    for (std::size_t i = 0; i < c.k.size(); ++i) {
      out += std::to_string(c.n) + ',' + std::to_string(c.h) + ',' + c.method + ',' + std::to_string(c.k[i]) + ',' +
             format_number(c.median_rp[i]) + ',' + format_number(c.mean_score[i]) + ',' +
             format_number(c.se_score[i]) + ',' + std::to_string(c.count[i]) + '\n';
    }
  }
  return out;
}

std::string to_json(const StudySummary& s) {
  json cells = json::array();
  for (const auto& c : s.cells) {
    cells.push_back(json{{"n", c.n},
                         {"h", c.h},
                         {"method", c.method},
                         {"k", c.k},
                         {"median_rp", numbers(c.median_rp)},
                         {"mean_score", numbers(c.mean_score)},
                         {"se_score", numbers(c.se_score)},
                         {"count", c.count},
                         {"mean_score_n", number(c.mean_score_n)},
                         {"se_score_n", number(c.se_score_n)},
                         {"median_score_n", number(c.median_score_n)},
                         {"failed_replicates", c.failed_replicates}});
  }
  return json{{"replicates", s.replicates}, {"base_seed", s.base_seed}, {"cells", cells}}.dump();
}

std::string to_csv(const FukuchiResult& f) {
  std::string out = "k,mean_risk\n";
  for (std::size_t i = 0; i < f.k.size(); ++i) out += std::to_string(f.k[i]) + ',' + format_number(f.mean_risk[i]) + '\n';
  return out;
}

std::string to_json(const FukuchiResult& f) {
  return json{{"k_selected", f.k_selected}, {"k", f.k}, {"mean_risk", numbers(f.mean_risk)}}.dump();
}

}  // namespace paeback
