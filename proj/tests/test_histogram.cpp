#include <vector>

#include "doctest.h"
#include "melotype/histogram.hpp"

using namespace melotype;

TEST_CASE("quantile with linear interpolation") {
  std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK_THROWS_AS(quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("freedman-diaconis width with degenerate fallbacks") {
  std::vector<double> v = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  // IQR = 3.5, n = 8 -> width = 2 * 3.5 / 2 = 3.5
  CHECK(freedman_diaconis_width(v) == doctest::Approx(3.5));

  std::vector<double> mostly_same = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 9.0};
  CHECK(freedman_diaconis_width(mostly_same) > 0.0);

  std::vector<double> all_same = {2.0, 2.0, 2.0};
  CHECK(freedman_diaconis_width(all_same) == 1.0);
}

TEST_CASE("histogram counts everything in range") {
  Eigen::ArrayXd edges = uniform_edges(0.0, 10.0, 2.5);
  std::vector<double> values = {0.0, 1.0, 2.5, 5.0, 9.9, 10.0};
  Histogram h = make_histogram(values, edges, "test");
  CHECK(h.total() == static_cast<std::int64_t>(values.size()));
  CHECK(h.counts[h.bins() - 1] == 2);  // 9.9 and the right-edge value 10.0

  std::vector<double> outside = {-0.1};
  CHECK_THROWS_AS(make_histogram(outside, edges, "bad"), std::invalid_argument);
}

TEST_CASE("uniform_edges covers the span") {
  Eigen::ArrayXd edges = uniform_edges(-1.0, 1.0, 0.3);
  CHECK(edges[0] == -1.0);
  CHECK(edges[edges.size() - 1] >= 1.0);
  for (int i = 1; i < edges.size(); ++i) CHECK(edges[i] > edges[i - 1]);

  Eigen::ArrayXd single = uniform_edges(2.0, 2.0, 1.0);
  CHECK(single.size() == 2);
}

TEST_CASE("wasserstein distance between shifted point masses") {
  Eigen::ArrayXd edges = uniform_edges(0.0, 10.0, 1.0);
  std::vector<double> at2 = {2.5, 2.5};
  std::vector<double> at7 = {7.5, 7.5};
  Histogram a = make_histogram(at2, edges, "a");
  Histogram b = make_histogram(at7, edges, "b");
  CHECK(wasserstein1(a, a) == 0.0);
  CHECK(wasserstein1(a, b) == doctest::Approx(5.0));
  CHECK(wasserstein1(a, b) == wasserstein1(b, a));

  Eigen::ArrayXd other = uniform_edges(0.0, 12.0, 1.0);
  Histogram c = make_histogram(at2, other, "c");
  CHECK_THROWS_AS(wasserstein1(a, c), std::invalid_argument);
}

TEST_CASE("summary statistics") {
  std::vector<double> v = {1.0, 2.0, 3.0, 4.0, 5.0};
  SummaryStats s = summarize(v);
  CHECK(s.count == 5);
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.median == doctest::Approx(3.0));
  CHECK(s.stdev == doctest::Approx(std::sqrt(2.5)));
  CHECK(s.iqr == doctest::Approx(2.0));
}
