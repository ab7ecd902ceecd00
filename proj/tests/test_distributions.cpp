#include <doctest.h>

#include <cmath>
#include <vector>

#include "anscombe/distributions.hpp"

using namespace anscombe;

namespace {

// Independent oracle: composite-Simpson integral of the standard normal
// density on [0, x], plus 1/2. Panel count keeps the error well under 1e-10.
double simpson_normal_cdf(double x) {
  const int panels = 4000;
  const double h = x / panels;
  auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double acc = phi(0.0) + phi(x);
  for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * phi(i * h);
  return 0.5 + acc * h / 3.0;
}

const Space kLine = Space::euclidean(1);

}  // namespace

TEST_CASE("normal cdf against a quadrature oracle") {
  const double oracle_at_1 = simpson_normal_cdf(1.0);
  CHECK(oracle_at_1 == doctest::Approx(0.841345).epsilon(1e-6));
  CHECK(std::abs(normal_cdf(1.0) - oracle_at_1) < 1e-9);
  for (double x : {0.1, 0.5, 1.5, 2.337, 3.0, -0.75}) {
    CHECK(std::abs(normal_cdf(x) - simpson_normal_cdf(x)) < 1e-9);
  }
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(40.0) - 1.0) < 1e-12);

  SUBCASE("symmetry and monotonicity") {
    double prev = -1.0;
    for (double x = -6.0; x <= 6.0; x += 0.125) {
      CHECK(std::abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) <= 1e-12);
      CHECK(normal_cdf(x) >= prev);
      prev = normal_cdf(x);
    }
  }
}

TEST_CASE("exact probabilities") {
  const Law uni = Law::uniform_finite({MetricPoint::real(0), MetricPoint::real(1)});
  CHECK(uni.exact_prob(kLine, TestSet::half_line(HalfLineDir::ge, 0.5)) == doctest::Approx(0.5));

  const Law norm = Law::normal(0, 1);
  CHECK(norm.exact_prob(kLine, TestSet::half_line(HalfLineDir::le, 0.0)) == doctest::Approx(0.5));
  CHECK(norm.exact_prob(kLine, TestSet::half_line(HalfLineDir::le, 1.0)) ==
        doctest::Approx(0.841345).epsilon(1e-6));
  CHECK(norm.exact_prob(kLine, TestSet::interval_union({{-1.0, 1.0}})) ==
        doctest::Approx(2 * 0.841344746069 - 1).epsilon(1e-9));
  // finite point sets are null under a density; fattened ones are intervals
  CHECK(norm.exact_prob(kLine, TestSet::finite_points({MetricPoint::real(0)}, 0.0)) == 0.0);
  CHECK(norm.exact_prob(kLine, TestSet::finite_points({MetricPoint::real(0)}, 1.0)) ==
        doctest::Approx(2 * 0.841344746069 - 1).epsilon(1e-9));

  SUBCASE("unsupported combinations throw") {
    const Space plane = Space::euclidean(2);
    CHECK_THROWS_AS(norm.exact_prob(plane, TestSet::box({{0, 1}, {0, 1}})), Error);
  }

  SUBCASE("complement adds to one") {
    const std::vector<TestSet> sets = {
        TestSet::half_line(HalfLineDir::ge, 0.3),
        TestSet::interval_union({{-0.7, -0.1}, {0.4, 2.0}}),
        TestSet::finite_points({MetricPoint::real(0), MetricPoint::real(1)}, 0.25),
    };
    for (const auto& s : sets) {
      CHECK(std::abs(norm.exact_prob(kLine, s) + norm.exact_prob(kLine, complement_view(s)) -
                     1.0) <= 1e-12);
      CHECK(std::abs(uni.exact_prob(kLine, s) + uni.exact_prob(kLine, complement_view(s)) -
                     1.0) <= 1e-12);
    }
  }

  SUBCASE("finite law is additive over disjoint sets") {
    const Law law = Law::finite(FiniteDistribution::make(
        {MetricPoint::real(-1), MetricPoint::real(0.5), MetricPoint::real(2)},
        {0.2, 0.3, 0.5}));
    const TestSet a = TestSet::interval_union({{-1.5, -0.5}});
    const TestSet b = TestSet::interval_union({{0.0, 1.0}});
    const TestSet both = TestSet::interval_union({{-1.5, -0.5}, {0.0, 1.0}});
    CHECK(law.exact_prob(kLine, both) ==
          doctest::Approx(law.exact_prob(kLine, a) + law.exact_prob(kLine, b)).epsilon(1e-12));
  }
}

TEST_CASE("finite distribution invariants") {
  CHECK_THROWS_AS(
      FiniteDistribution::make({MetricPoint::real(0), MetricPoint::real(0)}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(FiniteDistribution::make({MetricPoint::real(0)}, {0.5}), Error);
  CHECK_THROWS_AS(FiniteDistribution::make({MetricPoint::real(0)}, {-1.0}), Error);
  const auto d = FiniteDistribution::make({MetricPoint::real(0), MetricPoint::real(1)},
                                          {0.25, 0.75});
  double sum = 0.0;
  for (double w : d.weights) sum += w;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("sampling") {
  SUBCASE("point mass is degenerate") {
    const Law pm = Law::point_mass(MetricPoint::real(3.5));
    RngStream rng(1, 0);
    for (int i = 0; i < 50; ++i) CHECK(pm.sample(rng) == MetricPoint::real(3.5));
  }

  SUBCASE("same seed and stream give the same draws") {
    const Law law = Law::uniform_finite(
        {MetricPoint::real(0), MetricPoint::real(1), MetricPoint::real(2)});
    RngStream a(99, 7), b(99, 7), c(99, 8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 200; ++i) {
      const double x = law.sample_scalar(a), y = law.sample_scalar(b),
                   z = law.sample_scalar(c);
      all_equal &= (x == y);
      any_diff |= (x != z);
    }
    CHECK(all_equal);
    CHECK(any_diff);
  }

  SUBCASE("uniform frequencies converge") {
    const Law law = Law::uniform_finite({MetricPoint::real(0), MetricPoint::real(1)});
    RngStream rng(2024, 0);
    const int n = 100000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += law.sample_scalar(rng) == 1.0 ? 1 : 0;
    const double freq = double(ones) / n;
    CHECK(std::abs(freq - 0.5) < 0.01);
    CHECK(std::abs(freq - 0.5) < 4.0 * std::sqrt(0.25 / n));
  }

  SUBCASE("sampler matches the law on a probe family") {
    const std::vector<Law> laws = {
        Law::uniform_finite({MetricPoint::real(-1), MetricPoint::real(1)}),
        Law::finite(FiniteDistribution::make(
            {MetricPoint::real(0), MetricPoint::real(1), MetricPoint::real(4)},
            {0.6, 0.3, 0.1})),
        Law::normal(0.5, 2.0),
    };
    const std::vector<TestSet> probes = {
        TestSet::half_line(HalfLineDir::le, 0.0),
        TestSet::half_line(HalfLineDir::ge, 0.9),
        TestSet::interval_union({{-0.5, 1.1}}),
    };
    const int n = 40000;
    uint64_t stream = 0;
    for (std::size_t li = 0; li < laws.size(); ++li) {
      for (std::size_t si = 0; si < probes.size(); ++si) {
        RngStream rng(555, stream++);
        int hits = 0;
        for (int i = 0; i < n; ++i)
          hits += probes[si].contains(kLine, laws[li].sample(rng)) ? 1 : 0;
        const double p = laws[li].exact_prob(kLine, probes[si]);
        const double tol = 4.0 * std::sqrt(std::max(p * (1 - p), 1e-4) / n);
        CHECK(std::abs(double(hits) / n - p) <= tol);
      }
    }
  }
}

TEST_CASE("hat expectations agree between quadrature and finite sums") {
  const HatFunction hat(TestSet::half_line(HalfLineDir::ge, 0.5), 0.75);
  const Law norm = Law::normal(0, 1);
  // independent Riemann check of E[h]
  double riemann = 0.0;
  const int steps = 400000;
  const double lo = -8, hi = 8, dx = (hi - lo) / steps;
  for (int i = 0; i < steps; ++i) {
    const double x = lo + (i + 0.5) * dx;
    riemann += hat.eval_scalar(kLine, x) * std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI) * dx;
  }
  CHECK(norm.expect_hat(kLine, hat) == doctest::Approx(riemann).epsilon(1e-6));

  const Law fin = Law::uniform_finite({MetricPoint::real(0.5), MetricPoint::real(0.0)});
  CHECK(fin.expect_hat(kLine, hat) == doctest::Approx(0.5 * (1.0 + 1.0 / 3.0)));
}
