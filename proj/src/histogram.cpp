#include "melotype/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace melotype {

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty data");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile q outside [0,1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double pos = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(pos);
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double freedman_diaconis_width(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("bin width of empty data");
  double iqr = quantile(values, 0.75) - quantile(values, 0.25);
  double n = static_cast<double>(values.size());
  double width = 2.0 * iqr / std::cbrt(n);
  if (width > 0.0) return width;
  // degenerate IQR: spread-based fallback
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double spread = *hi - *lo;
  if (spread > 0.0) return spread / std::ceil(std::sqrt(n));
  return 1.0;  // all values identical; a single unit-width bin
}

Eigen::ArrayXd uniform_edges(double lo, double hi, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bin width must be positive");
  if (hi < lo) throw std::invalid_argument("hi must be >= lo");
  constexpr int kMaxBins = 2000;
  double span = hi - lo;
  int bins = span > 0.0 ? static_cast<int>(std::ceil(span / width)) : 1;
  if (bins < 1) bins = 1;
  if (bins > kMaxBins) {
    bins = kMaxBins;
    width = span / static_cast<double>(bins);
  }
  Eigen::ArrayXd edges(bins + 1);
  for (int i = 0; i <= bins; ++i) edges[i] = lo + width * static_cast<double>(i);
  if (edges[bins] < hi) edges[bins] = hi;  // guard against fp shortfall
  return edges;
}

Histogram make_histogram(std::span<const double> values, const Eigen::ArrayXd& edges,
                         std::string series) {
  if (edges.size() < 2) throw std::invalid_argument("need at least two bin edges");
  Histogram h;
  h.bin_edges = edges;
  h.counts = Eigen::ArrayXi::Zero(static_cast<int>(edges.size()) - 1);
  h.series = std::move(series);
  double lo = edges[0];
  double width = h.bin_width();
  int bins = h.bins();
  for (double v : values) {
    if (v < lo || v > edges[bins])
      throw std::invalid_argument("value " + std::to_string(v) +
                                  " outside histogram range");
    int idx = static_cast<int>((v - lo) / width);
    if (idx >= bins) idx = bins - 1;  // v on the final edge
    h.counts[idx] += 1;
  }
  return h;
}

double wasserstein1(const Histogram& a, const Histogram& b) {
  if (a.bin_edges.size() != b.bin_edges.size() ||
      !(a.bin_edges == b.bin_edges).all())
    throw std::invalid_argument("histograms must share bin edges");
  std::int64_t ta = a.total();
  std::int64_t tb = b.total();
  if (ta == 0 || tb == 0) throw std::invalid_argument("empty histogram");
  double cum_a = 0.0;
  double cum_b = 0.0;
  double dist = 0.0;
  double width = a.bin_width();
  for (int i = 0; i < a.bins(); ++i) {
    cum_a += static_cast<double>(a.counts[i]) / static_cast<double>(ta);
    cum_b += static_cast<double>(b.counts[i]) / static_cast<double>(tb);
    dist += std::abs(cum_a - cum_b) * width;
  }
  return dist;
}

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summary of empty data");
  SummaryStats s;
  s.count = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stdev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  s.median = quantile(values, 0.5);
  s.iqr = quantile(values, 0.75) - quantile(values, 0.25);
  return s;
}

}  // namespace melotype
