#pragma once

#include <string>

#include "paeback/ar.hpp"
#include "paeback/asymptotics.hpp"
#include "paeback/engine.hpp"
#include "paeback/order_select.hpp"
#include "paeback/series.hpp"

// Text encodings shared by the C API and the CLI. Numbers are written in the
// shortest form that round-trips to the same double.
namespace paeback {

/// Shortest round-trip decimal form of a double ("nan"/"inf" for non-finite).
std::string format_number(double v);

/// "label,value" rows; unlabeled series use the 1-based position as label.
std::string to_csv(const TimeSeries& s);
/// Array of numbers, or of {"label", "value"} objects for labeled series.
std::string to_json(const TimeSeries& s);

std::string to_json(const ARModel& m);
std::string to_json(const AsymptoticReport& r);
std::string to_json(const PenaltySpec& p, std::span<const double> coef);

/// Columns k, r_s, score, r_p.
std::string to_csv(const EfficiencyCurve& c);
std::string to_json(const EfficiencyCurve& c);

/// Long format: n, h, method, k, median_rp, mean_score, se_score, count.
std::string to_csv(const StudySummary& s);
std::string to_json(const StudySummary& s);

std::string to_csv(const FukuchiResult& f);
std::string to_json(const FukuchiResult& f);

}  // namespace paeback
