#include <doctest.h>

#include <cmath>

#include "anscombe/indices.hpp"
#include "anscombe/oracle.hpp"

using namespace anscombe;

namespace {

const Space kLine = Space::euclidean(1);

Law rademacher() {
  return Law::uniform_finite({MetricPoint::real(-1), MetricPoint::real(1)});
}

EstimatorGrid small_grid() {
  EstimatorGrid g;
  g.epsilon_grid = {0.5, 1.0};
  g.delta_grid = {0.2, 0.4};
  g.n_lo = 20;
  g.n_hi = 40;
  g.stride = 4;
  g.samples = 4000;
  return g;
}

}  // namespace

TEST_CASE("window bounds") {
  CHECK(window_bounds(10, 0.25) == std::pair<int64_t, int64_t>{8, 12});
  CHECK(window_bounds(10, 0.05) == std::pair<int64_t, int64_t>{10, 10});
  CHECK(window_bounds(7, 0.5) == std::pair<int64_t, int64_t>{4, 10});
  // products like 0.9*100 must not leak representation error into the bounds
  CHECK(window_bounds(100, 0.1) == std::pair<int64_t, int64_t>{90, 110});
  CHECK(window_bounds(1000, 0.002) == std::pair<int64_t, int64_t>{998, 1002});
  CHECK(window_bounds(3, 0.9) == std::pair<int64_t, int64_t>{1, 5});
}

TEST_CASE("grid validation") {
  EstimatorGrid g = small_grid();
  CHECK_NOTHROW(g.validate());
  SUBCASE("window rule") {
    g.delta_grid = {0.01};  // 0.01 * 20 < 2
    CHECK_THROWS_WITH_AS(g.validate(),
                         "ValidationError: delta grid violates delta * a >= 2", Error);
  }
  SUBCASE("samples floor") {
    g.samples = 99;
    CHECK_THROWS_AS(g.validate(), Error);
  }
  SUBCASE("sorted grids") {
    g.epsilon_grid = {1.0, 0.5};
    CHECK_THROWS_AS(g.validate(), Error);
  }
  SUBCASE("n points honor the stride") {
    const auto ns = small_grid().n_points();
    REQUIRE(ns.size() == 6);
    CHECK(ns.front() == 20);
    CHECK(ns.back() == 40);
  }
}

TEST_CASE("window exceedance") {
  const McOptions mc{2024, 1};

  SUBCASE("constant model never oscillates") {
    const auto m = ProcessModel::constant(kLine, MetricPoint::real(1.0));
    const auto probe = window_exceedance(m, 50, 0.3, 0.25, 500, mc);
    CHECK(probe.value == 0.0);
    CHECK(probe.stderr_ == 0.0);
  }

  SUBCASE("alternating windows always exceed") {
    const auto m =
        ProcessModel::alternating(kLine, MetricPoint::real(-1), MetricPoint::real(1));
    const auto probe = window_exceedance(m, 100, 0.1, 1.0, 500, mc);
    CHECK(probe.value == 1.0);
    // cross-check by enumeration
    const auto spec = exact_finite_spec(m, IndexModel::deterministic(KnSpec::linear(1.0)), 110);
    CHECK(exact_window_exceedance(spec, 100, 0.1, 1.0) == 1.0);
  }

  SUBCASE("two-outcome model matches the oracle within 3 sigma") {
    std::vector<ProcessModel::Outcome> outcomes(2);
    // oscillating outcome with probability 0.25
    for (int i = 0; i < 40; ++i)
      outcomes[0].prefix.push_back(MetricPoint::real(i % 2 == 0 ? 1.0 : -1.0));
    outcomes[0].limit = MetricPoint::real(0);
    outcomes[0].probability = 0.25;
    outcomes[1].limit = MetricPoint::real(0);
    outcomes[1].probability = 0.75;
    const auto m = ProcessModel::eventually_constant(kLine, outcomes);
    const auto spec = exact_finite_spec(m, IndexModel::deterministic(KnSpec::linear(1.0)), 40);
    const double exact = exact_window_exceedance(spec, 20, 0.3, 0.5);
    CHECK(exact == doctest::Approx(0.25));
    const auto probe = window_exceedance(m, 20, 0.3, 0.5, 20000, mc);
    CHECK(std::abs(probe.value - exact) <= 3.0 * probe.stderr_ + 1e-12);
  }
}

TEST_CASE("oscillation index") {
  const McOptions mc{7, 1};

  SUBCASE("constant model is exactly zero") {
    const auto est = chi_ansc(ProcessModel::constant(kLine, MetricPoint::real(0)), small_grid(), mc);
    CHECK(est.value == 0.0);
    for (const auto& cell : est.per_grid) CHECK(cell.value == 0.0);
  }

  SUBCASE("alternating model saturates") {
    EstimatorGrid g;
    g.epsilon_grid = {0.5, 1.0};
    g.delta_grid = {0.1, 0.2};
    g.n_lo = 100;
    g.n_hi = 200;
    g.stride = 20;
    g.samples = 1000;
    const auto est = chi_ansc(
        ProcessModel::alternating(kLine, MetricPoint::real(-1), MetricPoint::real(1)), g, mc);
    CHECK(est.value == 1.0);
  }

  SUBCASE("value recomputes from the per-grid table") {
    const auto m = ProcessModel::partial_sum_normalized(kLine, rademacher());
    EstimatorGrid g;
    g.epsilon_grid = {0.25, 0.5, 1.0};
    g.delta_grid = {0.1, 0.2};
    g.n_lo = 24;
    g.n_hi = 48;
    g.stride = 8;
    g.samples = 2000;
    const auto est = chi_ansc(m, g, mc);
    // rebuild max-min-max from the table
    double recomposed = 0.0;
    for (double eps : g.epsilon_grid) {
      double inner = 2.0;
      for (double delta : g.delta_grid) {
        double mx = 0.0;
        for (const auto& cell : est.per_grid)
          if (*cell.epsilon == eps && *cell.delta == delta) mx = std::max(mx, cell.value);
        inner = std::min(inner, mx);
      }
      recomposed = std::max(recomposed, inner);
    }
    CHECK(est.value == doctest::Approx(recomposed).epsilon(1e-12));

    SUBCASE("monotone in epsilon and delta at fixed seeds") {
      auto cell_value = [&](double eps, double delta, int64_t n) {
        for (const auto& cell : est.per_grid)
          if (*cell.epsilon == eps && *cell.delta == delta && *cell.n == n) return cell.value;
        return -1.0;
      };
      for (int64_t n : g.n_points()) {
        for (std::size_t e = 1; e < g.epsilon_grid.size(); ++e)
          CHECK(cell_value(g.epsilon_grid[e], 0.2, n) <=
                cell_value(g.epsilon_grid[e - 1], 0.2, n));
        CHECK(cell_value(0.25, 0.1, n) <= cell_value(0.25, 0.2, n));
      }
    }
  }

  SUBCASE("estimator agrees with the enumeration oracle on partial sums") {
    const auto m = ProcessModel::partial_sum_normalized(kLine, rademacher());
    EstimatorGrid g;
    g.epsilon_grid = {0.75, 1.25};
    g.delta_grid = {0.25, 0.5};
    g.n_lo = 8;
    g.n_hi = 16;
    g.stride = 4;
    g.samples = 100000;
    const auto spec = exact_finite_spec(m, IndexModel::deterministic(KnSpec::linear(1.0)), 24);
    const double exact = exact_chi_surrogate(spec, g);
    const auto est = chi_ansc(m, g, McOptions{99, 2});
    CHECK(std::abs(est.value - exact) <= 3.0 * est.stderr_ + 1e-9);
    CHECK(exact > 0.0);
    CHECK(exact < 1.0);
  }
}

TEST_CASE("deviation index of N_n/k_n") {
  const McOptions mc{13, 1};
  EstimatorGrid g = small_grid();
  g.samples = 100000;

  SUBCASE("matched deterministic index is zero") {
    const auto est =
        lambda_p_ratio(IndexModel::deterministic(KnSpec::linear(1.0)), KnSpec::linear(1.0), g, mc);
    CHECK(est.value == 0.0);
  }

  SUBCASE("two_point against k_n = n picks up the far branch") {
    const auto est = lambda_p_ratio(IndexModel::two_point(0.3), KnSpec::linear(1.0), g, mc);
    CHECK(std::abs(est.value - 0.3) < 0.02);
  }

  SUBCASE("two_point against k_n = 2n picks up the near branch") {
    const auto est = lambda_p_ratio(IndexModel::two_point(0.3), KnSpec::linear(2.0), g, mc);
    CHECK(std::abs(est.value - 0.7) < 0.02);
  }

  SUBCASE("per-epsilon values are nonincreasing and recompose to the value") {
    EstimatorGrid fine = g;
    fine.epsilon_grid = {0.25, 0.5, 0.75, 1.5};
    fine.samples = 20000;
    const auto est = lambda_p_ratio(IndexModel::two_point(0.4), KnSpec::linear(1.0), fine, mc);
    for (int64_t n : fine.n_points()) {
      double prev = 2.0;
      for (double eps : fine.epsilon_grid) {
        for (const auto& cell : est.per_grid)
          if (*cell.epsilon == eps && *cell.n == n) {
            CHECK(cell.value <= prev);
            prev = cell.value;
          }
      }
    }
    double recomposed = 0.0;
    for (const auto& cell : est.per_grid) recomposed = std::max(recomposed, cell.value);
    CHECK(est.value == doctest::Approx(recomposed).epsilon(1e-12));
  }
}

TEST_CASE("infimum over kn candidates") {
  const McOptions mc{21, 1};
  EstimatorGrid g = small_grid();
  g.epsilon_grid = {0.25, 0.5};
  g.samples = 100000;

  SUBCASE("deterministic match is found") {
    const std::vector<KnSpec> cands = {KnSpec::linear(0.5), KnSpec::linear(1.0),
                                       KnSpec::linear(2.0)};
    const auto [best, est] =
        infimum_over_kn(IndexModel::deterministic(KnSpec::linear(1.0)), cands, g, mc);
    CHECK(best.linear_c() == 1.0);
    CHECK(est.value == 0.0);
  }

  SUBCASE("two_point lands at min(q, 1-q)") {
    const std::vector<KnSpec> cands = {KnSpec::linear(0.5), KnSpec::linear(1.0),
                                       KnSpec::linear(1.5), KnSpec::linear(2.0),
                                       KnSpec::linear(3.0)};
    const auto [best, est] = infimum_over_kn(IndexModel::two_point(0.3), cands, g, mc);
    CHECK(best.linear_c() == 1.0);
    CHECK(std::abs(est.value - 0.3) < 0.02);
  }

  SUBCASE("symmetric two_point ties break to the smaller c") {
    const std::vector<KnSpec> cands = {KnSpec::linear(0.5), KnSpec::linear(1.0),
                                       KnSpec::linear(1.5), KnSpec::linear(2.0),
                                       KnSpec::linear(3.0)};
    const auto [best, est] = infimum_over_kn(IndexModel::two_point(0.5), cands, g, mc);
    CHECK(std::abs(est.value - 0.5) < 0.02);
    CHECK(best.linear_c() == 1.0);
  }
}

TEST_CASE("weak defect estimator") {
  const McOptions mc{31, 1};
  EstimatorGrid g = small_grid();
  g.samples = 2000;
  const SetFamily family = SetFamily::half_lines({-0.5, 0.0, 0.5}, true, true);

  SUBCASE("disjoint point masses saturate") {
    const auto est = lambda_w_marginal(ProcessModel::constant(kLine, MetricPoint::real(0)),
                                       Law::point_mass(MetricPoint::real(1)), family, g, mc);
    CHECK(est.value == 1.0);
    CHECK(est.stderr_ == 0.0);
  }

  SUBCASE("identical laws vanish") {
    const auto est = lambda_w_marginal(ProcessModel::constant(kLine, MetricPoint::real(0)),
                                       Law::point_mass(MetricPoint::real(0)), family, g, mc);
    CHECK(est.value == 0.0);
  }

  SUBCASE("value recomputes from per-grid gaps") {
    const auto m = ProcessModel::alternating(kLine, MetricPoint::real(-1), MetricPoint::real(1));
    const auto est =
        lambda_w_marginal(m, Law::uniform_finite({MetricPoint::real(-1), MetricPoint::real(1)}),
                          family, g, mc);
    double mx = 0.0;
    for (const auto& cell : est.per_grid) mx = std::max(mx, cell.value);
    CHECK(est.value == doctest::Approx(std::min(1.0, std::max(0.0, mx))));
    CHECK(est.value == doctest::Approx(0.5));
    // widths sit below the atom spacing, so the hat cross-check collapses to
    // the indicator value and must reproduce the closed-set defect
    REQUIRE(est.hat_form.has_value());
    CHECK(*est.hat_form == doctest::Approx(0.5));
  }

  SUBCASE("partial sums against the normal law, exact binomial cross-check") {
    const auto m = ProcessModel::partial_sum_normalized(kLine, rademacher());
    EstimatorGrid clt;
    clt.epsilon_grid = {0.25, 0.5};
    clt.delta_grid = {0.01};
    clt.n_lo = 200;
    clt.n_hi = 216;
    clt.stride = 4;
    clt.samples = 40000;
    const SetFamily halls =
        SetFamily::half_lines({-1.5, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 1.5}, true, true);
    const Law target = Law::normal(0, 1);

    std::vector<FiniteDistribution> marginals;
    for (int64_t n : clt.n_points()) marginals.push_back(rademacher_partial_sum_marginal(n));
    const double exact = exact_lambda_w_marginals(kLine, marginals, target, halls);
    CHECK(exact > 0.0);
    CHECK(exact <= 0.05);

    const auto est = lambda_w_marginal(m, target, halls, clt, mc);
    CHECK(std::abs(est.value - exact) <= 3.0 * est.stderr_ + 0.01);
  }
}

TEST_CASE("randomized weak defect uses the index model") {
  const McOptions mc{41, 1};
  EstimatorGrid g = small_grid();
  g.samples = 50000;
  const SetFamily family = SetFamily::half_lines({-0.5, 0.0, 0.5}, true, true);
  const auto alternating =
      ProcessModel::alternating(kLine, MetricPoint::real(-1), MetricPoint::real(1));
  // deterministic shift: N_n = 2n lands on even positions, so the
  // randomized sequence is constant at a = -1
  const auto est = lambda_w_randomized(alternating, IndexModel::deterministic(KnSpec::linear(2.0)),
                                       Law::point_mass(MetricPoint::real(-1)), family, g, mc);
  CHECK(est.value == 0.0);
  const auto est2 = lambda_w_randomized(alternating, IndexModel::deterministic(KnSpec::linear(2.0)),
                                        Law::point_mass(MetricPoint::real(1)), family, g, mc);
  CHECK(est2.value == 1.0);
}

TEST_CASE("target modulus") {
  SUBCASE("normal with half-lines is density-bounded") {
    const SetFamily family = SetFamily::half_lines({-1.0, 0.0, 1.0}, true, true);
    const double eps = 0.25;
    const double w = target_modulus(kLine, Law::normal(0, 1), family, eps);
    CHECK(w > 0.0);
    CHECK(w <= eps / std::sqrt(2.0 * M_PI) + 1e-12);
  }
  SUBCASE("discrete subsets below the minimum distance have zero modulus") {
    const Space sym = Space::discrete({"a", "b"}, {{0, 1}, {1, 0}});
    const SetFamily family =
        SetFamily::support_subsets({MetricPoint::symbol(0), MetricPoint::symbol(1)});
    const Law target = Law::point_mass(MetricPoint::symbol(1));
    CHECK(target_modulus(sym, target, family, 0.5) == 0.0);
  }
}

namespace {

// The sensitivity scenario: laws tuned so the randomized defect is carried
// entirely by the oscillation term. Window holds odd n only; the marginal
// law there coincides with the target, the shifted index lands on even
// positions, and the space is discrete so the modulus vanishes.
Scenario chi_critical_scenario() {
  Scenario sc;
  sc.space = Space::discrete({"a", "b"}, {{0, 1}, {1, 0}});
  sc.process = ProcessModel::alternating(sc.space, MetricPoint::symbol(0), MetricPoint::symbol(1));
  std::vector<int64_t> shifted;
  for (int64_t n = 1; n <= 25; ++n) shifted.push_back(n + 1);
  sc.index_model = IndexModel::deterministic(KnSpec::explicit_list(shifted));
  sc.target = Law::point_mass(MetricPoint::symbol(1));
  sc.family = SetFamily::support_subsets({MetricPoint::symbol(0), MetricPoint::symbol(1)});
  sc.kn_candidates = {KnSpec::linear(1.0), KnSpec::explicit_list(shifted)};
  sc.grid.epsilon_grid = {0.5};
  sc.grid.delta_grid = {0.2};
  sc.grid.n_lo = 11;
  sc.grid.n_hi = 25;
  sc.grid.stride = 2;
  sc.grid.samples = 1000;
  return sc;
}

}  // namespace

TEST_CASE("inequality verifier") {
  const McOptions mc{51, 1};

  SUBCASE("degenerate scenario passes with every term zero") {
    Scenario sc;
    sc.space = kLine;
    sc.process = ProcessModel::constant(kLine, MetricPoint::real(0));
    sc.index_model = IndexModel::deterministic(KnSpec::linear(1.0));
    sc.target = Law::point_mass(MetricPoint::real(0));
    sc.family = SetFamily::half_lines({-0.5, 0.5}, true, true);
    sc.kn_candidates = {KnSpec::linear(1.0)};
    sc.grid = small_grid();
    sc.grid.epsilon_grid = {0.25, 0.5};  // eps_min below the threshold gap keeps the modulus 0
    sc.grid.samples = 500;
    const auto rep = verify_inequality(sc, mc);
    CHECK(rep.pass);
    CHECK(rep.lhs.value == 0.0);
    CHECK(rep.rhs_weak.value == 0.0);
    CHECK(rep.rhs_chi.value == 0.0);
    CHECK(rep.rhs_lp.value == 0.0);
    CHECK(rep.slack.total == 0.0);
  }

  SUBCASE("oscillation-dominated scenario passes") {
    Scenario sc;
    sc.space = kLine;
    sc.process = ProcessModel::alternating(kLine, MetricPoint::real(-1), MetricPoint::real(1));
    sc.index_model = IndexModel::two_point(0.3);
    sc.target = Law::uniform_finite({MetricPoint::real(-1), MetricPoint::real(1)});
    sc.family = SetFamily::half_lines({-0.5, 0.0, 0.5}, true, true);
    sc.kn_candidates = {KnSpec::linear(0.5), KnSpec::linear(1.0), KnSpec::linear(2.0)};
    sc.grid = small_grid();
    const auto rep = verify_inequality(sc, mc);
    CHECK(rep.pass);
    CHECK(rep.rhs_chi.value == 1.0);
  }

  SUBCASE("dropping the oscillation term breaks the tuned scenario") {
    const Scenario sc = chi_critical_scenario();
    const auto full = verify_inequality(sc, mc);
    CHECK(full.pass);
    CHECK(full.lhs.value == 1.0);
    CHECK(full.rhs_weak.value == 0.0);
    CHECK(full.rhs_chi.value == 1.0);
    CHECK(full.rhs_lp.value == 0.0);
    CHECK(full.slack.total == 0.0);

    VerifierTerms mutated;
    mutated.chi = false;
    const auto broken = verify_inequality(sc, mc, mutated);
    CHECK_FALSE(broken.pass);
  }
}

TEST_CASE("estimator tables are thread-count independent") {
  const auto m = ProcessModel::partial_sum_normalized(kLine, rademacher());
  EstimatorGrid g;
  g.epsilon_grid = {0.25, 0.5};
  g.delta_grid = {0.25};
  g.n_lo = 10;
  g.n_hi = 30;
  g.stride = 5;
  g.samples = 20000;
  const auto a = chi_ansc(m, g, McOptions{5, 1});
  const auto b = chi_ansc(m, g, McOptions{5, 4});
  REQUIRE(a.per_grid.size() == b.per_grid.size());
  for (std::size_t i = 0; i < a.per_grid.size(); ++i)
    CHECK(a.per_grid[i].value == b.per_grid[i].value);
  CHECK(a.value == b.value);

  const SetFamily family = SetFamily::half_lines({-0.5, 0.0, 0.5}, true, true);
  const auto wa = lambda_w_marginal(m, Law::normal(0, 1), family, g, McOptions{5, 1});
  const auto wb = lambda_w_marginal(m, Law::normal(0, 1), family, g, McOptions{5, 8});
  CHECK(wa.value == wb.value);
  CHECK(*wa.hat_form == *wb.hat_form);
}
