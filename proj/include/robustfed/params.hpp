#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace robustfed {

/// Flat vector of model parameters or updates. All vectors participating in
/// one experiment share the same dimension; entries are finite after every
/// public operation.
struct ParameterVector {
  std::vector<double> values;

  ParameterVector() = default;
  explicit ParameterVector(std::vector<double> v) : values(std::move(v)) {}
  ParameterVector(std::initializer_list<double> v) : values(v) {}

  static ParameterVector zeros(std::size_t n) {
    return ParameterVector(std::vector<double>(n, 0.0));
  }

  std::size_t dim() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  bool operator==(const ParameterVector&) const = default;
};

/// Coordinate-wise sum. Throws StructuralError on dimension mismatch,
/// NumericError if the result is not finite.
ParameterVector add(const ParameterVector& a, const ParameterVector& b);

/// a - b, same contract as add.
ParameterVector subtract(const ParameterVector& a, const ParameterVector& b);

/// Coordinate-wise multiple by a finite scalar.
ParameterVector scale(const ParameterVector& a, double c);

/// sqrt of the sum of squared coordinate differences.
double euclidean_distance(const ParameterVector& a, const ParameterVector& b);

double l2_norm(const ParameterVector& a);

/// Per-coordinate median; even counts take the mean of the two middle
/// order statistics. Throws UsageError on an empty list.
ParameterVector coordinate_median(std::span<const ParameterVector> vs);

struct CoordinateStats {
  ParameterVector mean;
  ParameterVector stddev;  // population standard deviation (divide by count)
};

CoordinateStats coordinate_stats(std::span<const ParameterVector> vs);

// Scalar helpers shared by the aggregators and temporal statistics.
double median_of(std::span<const double> xs);
double mean_of(std::span<const double> xs);
double population_stddev(std::span<const double> xs);

}  // namespace robustfed
