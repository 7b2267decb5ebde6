#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace melotype {

// Uniform-width histogram. All series in a report share one set of edges so
// curves and Wasserstein distances are comparable.
struct Histogram {
  Eigen::ArrayXd bin_edges;  // size bins+1, strictly increasing
  Eigen::ArrayXi counts;     // size bins
  std::string series;

  int bins() const { return static_cast<int>(counts.size()); }
  double bin_width() const { return bin_edges[1] - bin_edges[0]; }
  std::int64_t total() const { return counts.cast<std::int64_t>().sum(); }
};

// Quantile with linear interpolation between order statistics (the numpy
// default); q in [0,1].
double quantile(std::span<const double> values, double q);

// Freedman-Diaconis bin width, 2*IQR/n^(1/3); falls back to a spread-based
// width when the IQR is degenerate.
double freedman_diaconis_width(std::span<const double> values);

// Uniform edges of the given width covering [lo, hi] (at least one bin; the
// bin count is capped at 2000 by widening).
Eigen::ArrayXd uniform_edges(double lo, double hi, double width);

// Counts values into the bins; values on the final edge land in the last
// bin. Every value must lie within [first, last] edge — callers build edges
// that span their pooled data, so nothing is dropped.
Histogram make_histogram(std::span<const double> values, const Eigen::ArrayXd& edges,
                         std::string series);

// 1-Wasserstein distance between the two normalized histograms; both must
// share the same edges.
double wasserstein1(const Histogram& a, const Histogram& b);

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double stdev = 0.0;  // sample standard deviation
  double iqr = 0.0;
};

SummaryStats summarize(std::span<const double> values);

}  // namespace melotype
