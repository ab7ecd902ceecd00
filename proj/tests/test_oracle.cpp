#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "anscombe/oracle.hpp"

using namespace anscombe;

namespace {

const Space kLine = Space::euclidean(1);

Law rademacher() {
  return Law::uniform_finite({MetricPoint::real(-1), MetricPoint::real(1)});
}

FiniteDistribution point_law(double x) {
  return FiniteDistribution::make({MetricPoint::real(x)}, {1.0});
}

ProcessModel mixed_model() {
  std::vector<ProcessModel::Outcome> outcomes(2);
  for (int i = 0; i < 60; ++i)
    outcomes[0].prefix.push_back(MetricPoint::real(i % 2 == 0 ? 1.0 : -1.0));
  outcomes[0].limit = MetricPoint::real(1);
  outcomes[0].probability = 0.25;
  outcomes[1].limit = MetricPoint::real(0);
  outcomes[1].probability = 0.75;
  return ProcessModel::eventually_constant(kLine, outcomes);
}

}  // namespace

TEST_CASE("exact window exceedance") {
  SUBCASE("constant spec") {
    const auto spec = exact_finite_spec(ProcessModel::constant(kLine, MetricPoint::real(1)),
                                        IndexModel::deterministic(KnSpec::linear(1.0)), 30);
    CHECK(exact_window_exceedance(spec, 20, 0.3, 0.5) == 0.0);
  }
  SUBCASE("alternating spec saturates once the window has two integers") {
    const auto spec = exact_finite_spec(
        ProcessModel::alternating(kLine, MetricPoint::real(-1), MetricPoint::real(1)),
        IndexModel::deterministic(KnSpec::linear(1.0)), 30);
    CHECK(exact_window_exceedance(spec, 20, 0.2, 1.5) == 1.0);
  }
  SUBCASE("mixed spec weights the oscillating outcome") {
    const auto spec =
        exact_finite_spec(mixed_model(), IndexModel::deterministic(KnSpec::linear(1.0)), 60);
    CHECK(exact_window_exceedance(spec, 30, 0.3, 0.5) == doctest::Approx(0.25));
  }
  SUBCASE("horizon guard") {
    const auto spec = exact_finite_spec(ProcessModel::constant(kLine, MetricPoint::real(1)),
                                        IndexModel::deterministic(KnSpec::linear(1.0)), 10);
    CHECK_THROWS_AS(exact_window_exceedance(spec, 10, 0.5, 0.5), Error);
  }
}

TEST_CASE("exact oscillation index") {
  EstimatorGrid g;
  g.epsilon_grid = {0.5, 1.0};
  g.delta_grid = {0.2, 0.3};
  g.n_lo = 20;
  g.n_hi = 40;
  g.stride = 5;
  g.samples = 100;

  SUBCASE("constant") {
    const auto spec = exact_finite_spec(ProcessModel::constant(kLine, MetricPoint::real(0)),
                                        IndexModel::deterministic(KnSpec::linear(1.0)), 52);
    CHECK(exact_chi_surrogate(spec, g) == 0.0);
  }
  SUBCASE("alternating") {
    const auto spec = exact_finite_spec(
        ProcessModel::alternating(kLine, MetricPoint::real(-1), MetricPoint::real(1)),
        IndexModel::deterministic(KnSpec::linear(1.0)), 52);
    CHECK(exact_chi_surrogate(spec, g) == 1.0);
  }
  SUBCASE("mixed oscillation probability") {
    const auto spec =
        exact_finite_spec(mixed_model(), IndexModel::deterministic(KnSpec::linear(1.0)), 60);
    CHECK(exact_chi_surrogate(spec, g) == doctest::Approx(0.25));
  }
}

TEST_CASE("exact deviation index") {
  EstimatorGrid g;
  g.epsilon_grid = {0.25, 0.5};
  g.delta_grid = {0.2};
  g.n_lo = 20;
  g.n_hi = 40;
  g.stride = 4;
  g.samples = 100;
  const auto spec = exact_finite_spec(ProcessModel::constant(kLine, MetricPoint::real(0)),
                                      IndexModel::two_point(0.3), 80);
  SUBCASE("matched deterministic index") {
    const auto dspec = exact_finite_spec(ProcessModel::constant(kLine, MetricPoint::real(0)),
                                         IndexModel::deterministic(KnSpec::linear(1.0)), 80);
    CHECK(exact_lambda_p(dspec, KnSpec::linear(1.0), g) == 0.0);
  }
  SUBCASE("far branch") { CHECK(exact_lambda_p(spec, KnSpec::linear(1.0), g) == doctest::Approx(0.3)); }
  SUBCASE("near branch") { CHECK(exact_lambda_p(spec, KnSpec::linear(2.0), g) == doctest::Approx(0.7)); }
}

TEST_CASE("five formulations coincide") {
  SUBCASE("identical laws give zero") {
    const FiniteDistribution u = FiniteDistribution::make(
        {MetricPoint::real(0), MetricPoint::real(1)}, {0.5, 0.5});
    const auto ff = lambda_w_five_forms(kLine, {u, u, u}, u);
    CHECK(ff.closed_form == 0.0);
    CHECK(ff.max_pairwise_gap() <= 1e-12);
  }

  SUBCASE("point mass against the uniform pair") {
    const FiniteDistribution target = FiniteDistribution::make(
        {MetricPoint::real(0), MetricPoint::real(1)}, {0.5, 0.5});
    const auto ff = lambda_w_five_forms(kLine, {point_law(0.0)}, target);
    CHECK(ff.closed_form == doctest::Approx(0.5));
    CHECK(ff.max_pairwise_gap() <= 1e-9);
  }

  SUBCASE("shrinking point masses against a point target") {
    std::vector<FiniteDistribution> marginals;
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n) {
      marginals.push_back(point_law(std::pow(0.5, n)));
      worst = std::max(worst, 1.0);  // every marginal misses the target atom
    }
    const auto ff = lambda_w_five_forms(kLine, marginals, point_law(0.0));
    CHECK(ff.closed_form == doctest::Approx(worst));
    CHECK(ff.max_pairwise_gap() <= 1e-9);
  }

  SUBCASE("randomized instances, euclidean and discrete") {
    RngStream rng(4242, 0);
    for (int inst = 0; inst < 8; ++inst) {
      const int k = 2 + static_cast<int>(rng.next_below(9));  // support size
      const bool discrete = inst % 2 == 1;
      Space space = kLine;
      std::vector<MetricPoint> pts;
      if (discrete) {
        std::vector<std::string> names;
        std::vector<std::vector<double>> table(k, std::vector<double>(k, 0.0));
        for (int i = 0; i < k; ++i) names.push_back("s" + std::to_string(i));
        for (int i = 0; i < k; ++i)
          for (int j = i + 1; j < k; ++j)
            table[i][j] = table[j][i] = 1.0 + rng.next_unit();  // [1,2): triangle-safe
        space = Space::discrete(names, table);
        for (int i = 0; i < k; ++i) pts.push_back(MetricPoint::symbol(i));
      } else {
        double x = 0.0;
        for (int i = 0; i < k; ++i) {
          x += 0.5 + rng.next_unit();
          pts.push_back(MetricPoint::real(x));
        }
      }
      auto random_law = [&] {
        std::vector<double> w(k);
        double sum = 0.0;
        for (int i = 0; i < k; ++i) {
          w[i] = rng.next_unit() + 1e-3;
          sum += w[i];
        }
        for (double& v : w) v /= sum;
        return FiniteDistribution::make(pts, w);
      };
      const int n_count = 1 + static_cast<int>(rng.next_below(12));
      std::vector<FiniteDistribution> marginals;
      for (int i = 0; i < n_count; ++i) marginals.push_back(random_law());
      const auto ff = lambda_w_five_forms(space, marginals, random_law());
      CHECK(ff.max_pairwise_gap() <= 1e-9);
      CHECK(ff.closed_form >= 0.0);
      CHECK(ff.closed_form <= 1.0);
    }
  }

  SUBCASE("support cap") {
    std::vector<FiniteDistribution> marginals;
    std::vector<MetricPoint> a, b;
    for (int i = 0; i < 11; ++i) a.push_back(MetricPoint::real(i));
    for (int i = 11; i < 22; ++i) b.push_back(MetricPoint::real(i));
    marginals.push_back(
        FiniteDistribution::make(a, std::vector<double>(11, 1.0 / 11)));
    CHECK_THROWS_AS(lambda_w_five_forms(
                        kLine, marginals,
                        FiniteDistribution::make(b, std::vector<double>(11, 1.0 / 11))),
                    Error);
  }

  SUBCASE("user alpha grid must reach below the support resolution") {
    const FiniteDistribution u = FiniteDistribution::make(
        {MetricPoint::real(0), MetricPoint::real(1)}, {0.5, 0.5});
    CHECK_THROWS_AS(lambda_w_five_forms(kLine, {u}, u, {1.5, 2.0}), Error);
    CHECK_NOTHROW(lambda_w_five_forms(kLine, {u}, u, {0.25, 1.5}));
  }
}

TEST_CASE("continuity realizations avoid support boundaries") {
  RngStream rng(777, 0);
  const std::vector<MetricPoint> pts = {MetricPoint::real(-1.0), MetricPoint::real(0.3),
                                        MetricPoint::real(0.9), MetricPoint::real(4.0)};
  for (uint32_t mask = 0; mask < 16; ++mask) {
    const TestSet set = continuity_realization(kLine, pts, mask);
    for (std::size_t j = 0; j < pts.size(); ++j)
      CHECK(set.contains(kLine, pts[j]) == static_cast<bool>(mask & (1u << j)));
    // boundaries sit strictly between support points
    for (const auto& [lo, hi] : set.kind() == TestSet::Kind::interval_union
                                    ? set.intervals()
                                    : std::vector<std::pair<double, double>>{}) {
      for (const auto& p : pts) {
        CHECK(p.scalar() != lo);
        CHECK(p.scalar() != hi);
      }
    }
  }
  const Space sym = Space::discrete({"a", "b"}, {{0, 1}, {1, 0}});
  const TestSet dset = continuity_realization(
      sym, {MetricPoint::symbol(0), MetricPoint::symbol(1)}, 0b01);
  CHECK(dset.contains(sym, MetricPoint::symbol(0)));
  CHECK_FALSE(dset.contains(sym, MetricPoint::symbol(1)));
}

TEST_CASE("pathwise proof inclusion") {
  const TestSet F = TestSet::half_line(HalfLineDir::ge, 0.25);

  SUBCASE("all premises hold and the conclusion follows") {
    // window [8,12] around k_n = 10; values stay within 0.4 of xi_10 = 0
    std::vector<double> values(12, 0.0);
    values[10 - 1] = 0.0;
    values[11 - 1] = 0.3;
    values[8 - 1] = 0.2;
    values[12 - 1] = -0.35;
    const Path path = Path::scalars(values);
    const auto res = proof_inclusion_check(kLine, path, 11, 10, 0.2, 0.5, F);
    CHECK(res.premises_hold);
    CHECK(res.conclusion_holds);
    // xi_10 = 0 lands in the enlargement ge(-0.25)
    CHECK(F.enlarged(0.5).contains(kLine, MetricPoint::real(0.0)));
  }

  SUBCASE("distant index violates the proximity premise") {
    const Path path = Path::scalars(std::vector<double>(15, 0.5));
    const auto res = proof_inclusion_check(kLine, path, 15, 10, 0.2, 0.5, F);
    CHECK_FALSE(res.premises_hold);
    CHECK(res.first_violated == ProofPremise::index_proximity);
  }

  SUBCASE("membership premise is checked first") {
    const Path path = Path::scalars(std::vector<double>(15, -2.0));
    const auto res = proof_inclusion_check(kLine, path, 11, 10, 0.2, 0.5, F);
    CHECK_FALSE(res.premises_hold);
    CHECK(res.first_violated == ProofPremise::randomized_membership);
  }

  SUBCASE("constant path is immediate") {
    const Path path = Path::scalars(std::vector<double>(15, 0.5));
    const auto res = proof_inclusion_check(kLine, path, 11, 10, 0.2, 0.5, F);
    CHECK(res.premises_hold);
    CHECK(res.conclusion_holds);
  }

  SUBCASE("randomized campaign never trips the theorem guard") {
    const auto models = std::vector<ProcessModel>{
        ProcessModel::partial_sum_normalized(kLine, rademacher()),
        ProcessModel::alternating(kLine, MetricPoint::real(-1), MetricPoint::real(1)),
        mixed_model(),
    };
    const std::vector<TestSet> sets = {
        TestSet::half_line(HalfLineDir::ge, 0.0),
        TestSet::half_line(HalfLineDir::le, -0.5),
        TestSet::interval_union({{-0.6, 0.4}}),
    };
    RngStream rng(31337, 0);
    int held = 0, violated = 0;
    for (int trial = 0; trial < 4000; ++trial) {
      const auto& m = models[static_cast<std::size_t>(rng.next_below(3))];
      const int64_t k_n = 10 + rng.next_below(20);
      const double delta = 0.2 + 0.1 * rng.next_below(2);
      const double eps = 0.5 + 0.5 * rng.next_below(2);
      const auto [lo, hi] = window_bounds(k_n, delta);
      const int64_t N_n = lo + rng.next_below(hi - lo + 3);  // sometimes outside
      const int64_t horizon = std::max(hi, N_n) + 1;
      RngStream path_rng(555, static_cast<uint64_t>(trial));
      const Path path = sample_path(m, path_rng, horizon);
      const auto& F2 = sets[static_cast<std::size_t>(rng.next_below(3))];
      const auto res = proof_inclusion_check(kLine, path, N_n, k_n, delta, eps, F2);
      (res.premises_hold ? held : violated) += 1;
      if (res.premises_hold) CHECK(res.conclusion_holds);
    }
    CHECK(held > 0);
    CHECK(violated > 0);
  }
}

TEST_CASE("binomial marginal agrees with enumeration") {
  for (int64_t n : {4, 9, 12}) {
    const auto exact = rademacher_partial_sum_marginal(n);
    const auto spec =
        exact_finite_spec(ProcessModel::partial_sum_normalized(kLine, rademacher()),
                          IndexModel::deterministic(KnSpec::linear(1.0)), n);
    const auto enumerated = spec.marginal_law(n);
    REQUIRE(exact.atoms.size() == enumerated.atoms.size());
    for (double t : {-2.0, -0.5, 0.0, 0.31, 1.7}) {
      const TestSet s = TestSet::half_line(HalfLineDir::le, t);
      CHECK(std::abs(exact.prob_of(kLine, s) - enumerated.prob_of(kLine, s)) <= 1e-12);
    }
  }
}

TEST_CASE("exact values are invariant under outcome order") {
  std::vector<ProcessModel::Outcome> outcomes(3);
  outcomes[0].prefix = {MetricPoint::real(1), MetricPoint::real(-1)};
  outcomes[0].limit = MetricPoint::real(0);
  outcomes[0].probability = 0.2;
  outcomes[1].prefix = {MetricPoint::real(0.5)};
  outcomes[1].limit = MetricPoint::real(0.5);
  outcomes[1].probability = 0.3;
  outcomes[2].limit = MetricPoint::real(-0.5);
  outcomes[2].probability = 0.5;

  EstimatorGrid g;
  g.epsilon_grid = {0.25, 0.75};
  g.delta_grid = {0.3};
  g.n_lo = 8;
  g.n_hi = 20;
  g.stride = 3;
  g.samples = 100;

  auto value_of = [&](const std::vector<ProcessModel::Outcome>& order) {
    const auto spec = exact_finite_spec(ProcessModel::eventually_constant(kLine, order),
                                        IndexModel::two_point(0.4), 40);
    return exact_chi_surrogate(spec, g) +
           exact_lambda_w_marginal(
               spec, Law::uniform_finite({MetricPoint::real(0.5), MetricPoint::real(-0.5)}),
               SetFamily::half_lines({-0.25, 0.25}, true, true), g);
  };
  const double base = value_of(outcomes);
  std::vector<ProcessModel::Outcome> shuffled = {outcomes[2], outcomes[0], outcomes[1]};
  CHECK(std::abs(value_of(shuffled) - base) <= 1e-12);
}

TEST_CASE("estimators against the oracle on small scenarios") {
  SUBCASE("constant scenario compares exactly") {
    Scenario sc;
    sc.space = kLine;
    sc.process = ProcessModel::constant(kLine, MetricPoint::real(0));
    sc.index_model = IndexModel::deterministic(KnSpec::linear(1.0));
    sc.target = Law::point_mass(MetricPoint::real(0));
    sc.family = SetFamily::half_lines({-0.5, 0.5}, true, true);
    sc.kn_candidates = {KnSpec::linear(1.0)};
    sc.grid.epsilon_grid = {0.5};
    sc.grid.delta_grid = {0.25};
    sc.grid.n_lo = 10;
    sc.grid.n_hi = 20;
    sc.grid.stride = 5;
    sc.grid.samples = 500;
    const auto table = mc_vs_oracle_compare(sc, McOptions{61, 1});
    CHECK_FALSE(table.any_flagged);
    for (const auto& row : table.rows) {
      CHECK(row.mc == 0.0);
      CHECK(row.oracle == 0.0);
      CHECK(row.z == 0.0);
    }
  }

  SUBCASE("two_point deviation row sits within four sigma") {
    Scenario sc;
    sc.space = kLine;
    sc.process = ProcessModel::alternating(kLine, MetricPoint::real(-1), MetricPoint::real(1));
    sc.index_model = IndexModel::two_point(0.3);
    sc.target = Law::uniform_finite({MetricPoint::real(-1), MetricPoint::real(1)});
    sc.family = SetFamily::half_lines({-0.5, 0.0, 0.5}, true, true);
    sc.kn_candidates = {KnSpec::linear(1.0)};
    sc.grid.epsilon_grid = {0.5, 1.0};
    sc.grid.delta_grid = {0.25};
    sc.grid.n_lo = 10;
    sc.grid.n_hi = 22;
    sc.grid.stride = 4;
    sc.grid.samples = 100000;
    const auto table = mc_vs_oracle_compare(sc, McOptions{71, 2});
    CHECK_FALSE(table.any_flagged);
    bool found_lp = false, found_chi = false;
    for (const auto& row : table.rows) {
      if (row.name.rfind("lambda_p", 0) == 0) {
        found_lp = true;
        CHECK(row.oracle == doctest::Approx(0.3));
        CHECK(std::abs(row.z) <= 4.0);
      }
      if (row.name == "chi_ansc") {
        found_chi = true;
        CHECK(row.mc == 1.0);
        CHECK(row.oracle == 1.0);
      }
    }
    CHECK(found_lp);
    CHECK(found_chi);
  }
}
