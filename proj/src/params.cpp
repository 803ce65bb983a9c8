#include "robustfed/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "robustfed/errors.hpp"

namespace robustfed {

namespace {

void require_same_dim(const ParameterVector& a, const ParameterVector& b,
                      const char* op) {
  if (a.dim() != b.dim()) {
    throw StructuralError(std::string(op) + ": dimension mismatch (" +
                          std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
}

void require_finite(const ParameterVector& v, const char* op) {
  for (double x : v.values) {
    if (!std::isfinite(x)) {
      throw NumericError(std::string(op) + ": non-finite entry");
    }
  }
}

void require_nonempty(std::span<const ParameterVector> vs, const char* op) {
  if (vs.empty()) {
    throw UsageError(std::string(op) + ": empty list");
  }
  for (const auto& v : vs) {
    if (v.dim() != vs.front().dim()) {
      throw StructuralError(std::string(op) + ": dimension mismatch");
    }
  }
}

}  // namespace

ParameterVector add(const ParameterVector& a, const ParameterVector& b) {
  require_same_dim(a, b, "add");
  ParameterVector out = ParameterVector::zeros(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  require_finite(out, "add");
  return out;
}

ParameterVector subtract(const ParameterVector& a, const ParameterVector& b) {
  require_same_dim(a, b, "subtract");
  ParameterVector out = ParameterVector::zeros(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  require_finite(out, "subtract");
  return out;
}

ParameterVector scale(const ParameterVector& a, double c) {
  if (!std::isfinite(c)) throw UsageError("scale: non-finite scalar");
  ParameterVector out = ParameterVector::zeros(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] * c;
  require_finite(out, "scale");
  return out;
}

double euclidean_distance(const ParameterVector& a, const ParameterVector& b) {
  require_same_dim(a, b, "euclidean_distance");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double l2_norm(const ParameterVector& a) {
  double sum = 0.0;
  for (double x : a.values) sum += x * x;
  return std::sqrt(sum);
}

ParameterVector coordinate_median(std::span<const ParameterVector> vs) {
  require_nonempty(vs, "coordinate_median");
  const std::size_t n = vs.front().dim();
  ParameterVector out = ParameterVector::zeros(n);
  std::vector<double> column(vs.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < vs.size(); ++i) column[i] = vs[i][j];
    out[j] = median_of(column);
  }
  return out;
}

CoordinateStats coordinate_stats(std::span<const ParameterVector> vs) {
  require_nonempty(vs, "coordinate_stats");
  const std::size_t n = vs.front().dim();
  const double count = static_cast<double>(vs.size());
  CoordinateStats stats{ParameterVector::zeros(n), ParameterVector::zeros(n)};
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (const auto& v : vs) sum += v[j];
    const double mean = sum / count;
    double sq = 0.0;
    for (const auto& v : vs) {
      const double d = v[j] - mean;
      sq += d * d;
    }
    stats.mean[j] = mean;
    stats.stddev[j] = std::sqrt(sq / count);
  }
  return stats;
}

double median_of(std::span<const double> xs) {
  if (xs.empty()) throw UsageError("median_of: empty list");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double mean_of(std::span<const double> xs) {
  if (xs.empty()) throw UsageError("mean_of: empty list");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double population_stddev(std::span<const double> xs) {
  const double mean = mean_of(xs);
  double sq = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    sq += d * d;
  }
  return std::sqrt(sq / static_cast<double>(xs.size()));
}

}  // namespace robustfed
