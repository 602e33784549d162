#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace paeback {

/// Ordered, finite, real-valued observations with optional per-row labels.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> values);
  TimeSeries(std::vector<double> values, std::vector<std::string> labels);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return !labels_.empty(); }

  /// Contiguous sub-series [first, first + count), labels carried along.
  TimeSeries slice(std::size_t first, std::size_t count) const;

  double mean() const;

 private:
  std::vector<double> values_;
  std::vector<std::string> labels_;
};

enum class Criterion { MSE, MAE, MAPE, RMSE, SMAPE };

Criterion parse_criterion(std::string_view name);
std::string_view criterion_name(Criterion c);

/// Development/validation split over a series: the development window is the
/// k observations ending at position n (1-based), validation is the next h.
struct SplitSpec {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t h = 0;

  void validate(std::size_t series_length) const;
};

/// Column selector for load_csv: header name or zero-based index.
using ColumnRef = std::variant<std::string, std::size_t>;

/// Reads one numeric column (and optionally a label column) from an
/// RFC-4180 CSV file with a mandatory header row.
TimeSeries load_csv(const std::string& path, const ColumnRef& column,
                    const std::optional<ColumnRef>& label_column = std::nullopt);

/// Same as load_csv but over in-memory text.
TimeSeries parse_csv(std::string_view text, const ColumnRef& column,
                     const std::optional<ColumnRef>& label_column = std::nullopt);

/// ln(p[t+1]) - ln(p[t]); labels (if any) follow the later observation.
TimeSeries log_return(const TimeSeries& prices);

/// Forecast error between actual and predicted under the given criterion.
/// MAPE is a fraction; SMAPE is on the 0-100 percent scale.
double evaluate(std::span<const double> actual, std::span<const double> predicted,
                Criterion criterion);

}  // namespace paeback
