#include "paeback/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "paeback/error.hpp"

namespace paeback {

namespace {

void check_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      fail(ErrorCode::InvalidArgument, "non-finite value at index " + std::to_string(i));
    }
  }
}

using Record = std::vector<std::string>;

// RFC-4180 records: quoted fields may hold separators, doubled quotes and
// line breaks. Both LF and CRLF terminate a record.
std::vector<Record> split_records(std::string_view text) {
  std::vector<Record> records;
  Record record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A blank line is not a record.
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) {
          fail(ErrorCode::Parse, "stray quote inside unquoted field on line " + std::to_string(line));
        }
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) fail(ErrorCode::Parse, "unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

std::size_t resolve_column(const Record& header, const ColumnRef& ref) {
  if (const auto* idx = std::get_if<std::size_t>(&ref)) {
    if (*idx >= header.size()) {
      fail(ErrorCode::InvalidArgument, "column index " + std::to_string(*idx) + " out of range (" +
                                           std::to_string(header.size()) + " columns)");
    }
    return *idx;
  }
  const auto& name = std::get<std::string>(ref);
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) fail(ErrorCode::InvalidArgument, "column '" + name + "' not found");
  return static_cast<std::size_t>(it - header.begin());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t row) {
  const auto s = trim(cell);
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  // from_chars accepts a leading '-' but not '+'.
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (s.empty() || ec != std::errc() || ptr != last) {
    fail(ErrorCode::Parse, "row " + std::to_string(row) + ": cannot parse '" + std::string(cell) + "' as a number");
  }
  if (!std::isfinite(value)) {
    fail(ErrorCode::Parse, "row " + std::to_string(row) + ": non-finite value '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) { check_finite(values_); }

TimeSeries::TimeSeries(std::vector<double> values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
  check_finite(values_);
  if (!labels_.empty()) require(labels_.size() == values_.size(), "label count must equal value count");
}

TimeSeries TimeSeries::slice(std::size_t first, std::size_t count) const {
  require(first <= values_.size() && count <= values_.size() - first, "slice out of range");
  std::vector<double> v(values_.begin() + first, values_.begin() + first + count);
  if (labels_.empty()) return TimeSeries(std::move(v));
  std::vector<std::string> l(labels_.begin() + first, labels_.begin() + first + count);
  return TimeSeries(std::move(v), std::move(l));
}

double TimeSeries::mean() const {
  require(!values_.empty(), "mean of an empty series");
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

Criterion parse_criterion(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "MSE") return Criterion::MSE;
  if (upper == "MAE") return Criterion::MAE;
  if (upper == "MAPE") return Criterion::MAPE;
  if (upper == "RMSE") return Criterion::RMSE;
  if (upper == "SMAPE") return Criterion::SMAPE;
  fail(ErrorCode::InvalidArgument, "unknown criterion '" + std::string(name) + "'");
}

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::MSE: return "MSE";
    case Criterion::MAE: return "MAE";
    case Criterion::MAPE: return "MAPE";
    case Criterion::RMSE: return "RMSE";
    case Criterion::SMAPE: return "SMAPE";
  }
  return "?";
}

void SplitSpec::validate(std::size_t series_length) const {
  require(k >= 1 && k <= n, "development size k must satisfy 1 <= k <= n");
  require(h >= 1, "horizon h must be >= 1");
  if (n + h > series_length) {
    fail(ErrorCode::InsufficientData, "insufficient data: n + h = " + std::to_string(n + h) +
                                          " exceeds series length " + std::to_string(series_length));
  }
}

TimeSeries parse_csv(std::string_view text, const ColumnRef& column, const std::optional<ColumnRef>& label_column) {
  auto records = split_records(text);
  if (records.empty()) fail(ErrorCode::Parse, "CSV has no header row");
  const Record& header = records.front();
  const std::size_t col = resolve_column(header, column);
  std::optional<std::size_t> label_col;
  if (label_column) label_col = resolve_column(header, *label_column);

  std::vector<double> values;
  std::vector<std::string> labels;
  values.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const Record& rec = records[r];
    if (rec.size() != header.size()) {
      fail(ErrorCode::Parse, "row " + std::to_string(r) + ": expected " + std::to_string(header.size()) +
                                 " fields, found " + std::to_string(rec.size()));
    }
    values.push_back(parse_cell(rec[col], r));
    if (label_col) labels.push_back(rec[*label_col]);
  }
  if (values.empty()) fail(ErrorCode::InsufficientData, "CSV has no data rows");
  if (label_col) return TimeSeries(std::move(values), std::move(labels));
  return TimeSeries(std::move(values));
}

TimeSeries load_csv(const std::string& path, const ColumnRef& column, const std::optional<ColumnRef>& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), column, label_column);
}

TimeSeries log_return(const TimeSeries& prices) {
  if (prices.size() < 2) fail(ErrorCode::InsufficientData, "log_return needs at least 2 prices");
  const auto p = prices.values();
  std::vector<double> out(p.size() - 1);
  for (std::size_t t = 0; t < p.size(); ++t) {
    if (!(p[t] > 0.0)) fail(ErrorCode::InvalidArgument, "non-positive price at index " + std::to_string(t));
  }
  for (std::size_t t = 0; t + 1 < p.size(); ++t) out[t] = std::log(p[t + 1]) - std::log(p[t]);
  if (!prices.has_labels()) return TimeSeries(std::move(out));
  std::vector<std::string> labels(prices.labels().begin() + 1, prices.labels().end());
  return TimeSeries(std::move(out), std::move(labels));
}

double evaluate(std::span<const double> actual, std::span<const double> predicted, Criterion criterion) {
  require(actual.size() == predicted.size(), "actual and predicted lengths differ");
  require(!actual.empty(), "cannot evaluate an empty forecast");
  const auto h = static_cast<double>(actual.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < actual.size(); ++t) {
    const double a = actual[t];
    const double e = a - predicted[t];
    switch (criterion) {
      case Criterion::MSE:
      case Criterion::RMSE:
        acc += e * e;
        break;
      case Criterion::MAE:
        acc += std::abs(e);
        break;
      case Criterion::MAPE:
        if (a == 0.0) fail(ErrorCode::InvalidArgument, "MAPE undefined: actual value is zero at index " + std::to_string(t));
        acc += std::abs(e / a);
        break;
      case Criterion::SMAPE: {
        const double denom = (std::abs(a) + std::abs(predicted[t])) / 2.0;
        if (a == 0.0) fail(ErrorCode::InvalidArgument, "SMAPE undefined: actual value is zero at index " + std::to_string(t));
        acc += std::abs(e) / denom;
        break;
      }
    }
  }
  switch (criterion) {
    case Criterion::RMSE: return std::sqrt(acc / h);
    case Criterion::SMAPE: return 100.0 * acc / h;
    default: return acc / h;
  }
}

}  // namespace paeback
