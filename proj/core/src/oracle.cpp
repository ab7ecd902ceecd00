#include "anscombe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "window_kernel.hpp"

namespace anscombe {

namespace {

int64_t required_horizon(const detail::WindowPlan& plan) { return plan.horizon; }

void require_horizon(const FiniteProcessSpec& spec, int64_t needed) {
  if (needed > spec.horizon())
    throw Error(Errc::HorizonExceeded, "window reaches beyond the enumerated horizon");
}

}  // namespace

double FiveFormResult::max_pairwise_gap() const {
  const double v[5] = {function_form, enlargement_form, open_form, closed_form, continuity_form};
  double lo = v[0], hi = v[0];
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi - lo;
}

// ---------------------------------------------------------------------------
// Exact window exceedance / oscillation index

double exact_window_exceedance(const FiniteProcessSpec& spec, int64_t n, double delta,
                               double epsilon) {
  if (n < 1 || !(delta > 0.0) || !(epsilon > 0.0))
    throw Error(Errc::ValidationError, "need n >= 1, delta > 0, epsilon > 0");
  const auto plan = detail::WindowPlan::build({epsilon}, {delta}, {n});
  require_horizon(spec, required_horizon(plan));
  std::vector<double> cells(1, 0.0);
  spec.for_each_outcome([&](const Path& path, double prob) {
    detail::accumulate_exceedance<double>(spec.space(), path, plan, prob, cells);
  });
  return cells[0];
}

double exact_chi_surrogate(const FiniteProcessSpec& spec, const EstimatorGrid& grid) {
  grid.validate();
  const auto plan =
      detail::WindowPlan::build(grid.epsilon_grid, grid.delta_grid, grid.n_points());
  require_horizon(spec, required_horizon(plan));
  std::vector<double> cells(plan.cell_count(), 0.0);
  spec.for_each_outcome([&](const Path& path, double prob) {
    detail::accumulate_exceedance<double>(spec.space(), path, plan, prob, cells);
  });
  return detail::compose_chi(plan, cells).value;
}

// ---------------------------------------------------------------------------
// Exact lambda_P

double exact_lambda_p(const FiniteProcessSpec& spec, const KnSpec& kn,
                      const EstimatorGrid& grid) {
  grid.validate();
  const auto ns = grid.n_points();
  const std::size_t E = grid.epsilon_grid.size(), N = ns.size();
  std::vector<double> probs(E * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const int64_t k = kn.at(ns[i]);
    for (const auto& [value, prob] : spec.index_marginal(ns[i])) {
      const double dev =
          std::abs(static_cast<double>(value) / static_cast<double>(k) - 1.0);
      for (std::size_t e = 0; e < E && grid.epsilon_grid[e] <= dev; ++e)
        probs[e * N + i] += prob;
    }
  }
  return detail::compose_max2(E, N, probs).value;
}

// ---------------------------------------------------------------------------
// Exact lambda_w

double exact_lambda_w_marginals(const Space& space,
                                const std::vector<FiniteDistribution>& marginals,
                                const Law& target, const SetFamily& family) {
  const auto sets = family.materialize();
  double best = 0.0;
  for (const auto& set : sets) {
    const double t = target.exact_prob(space, set);
    for (const auto& law : marginals) best = std::max(best, law.prob_of(space, set) - t);
  }
  return std::min(1.0, best);
}

double exact_lambda_w_marginal(const FiniteProcessSpec& spec, const Law& target,
                               const SetFamily& family, const EstimatorGrid& grid) {
  grid.validate();
  const auto ns = grid.n_points();
  require_horizon(spec, ns.back());
  const auto laws = spec.marginal_laws(ns);
  std::vector<FiniteDistribution> marginals;
  marginals.reserve(ns.size());
  for (int64_t n : ns) marginals.push_back(laws.at(n));
  return exact_lambda_w_marginals(spec.space(), marginals, target, family);
}

double exact_lambda_w_randomized(const FiniteProcessSpec& spec, const Law& target,
                                 const SetFamily& family, const EstimatorGrid& grid) {
  grid.validate();
  const auto ns = grid.n_points();
  // one enumeration pass over all index positions reachable from the window
  std::vector<int64_t> positions;
  for (int64_t n : ns)
    for (const auto& [k, q] : spec.index_marginal(n)) positions.push_back(k);
  for (int64_t k : positions) require_horizon(spec, k);
  const auto laws = spec.marginal_laws(positions);

  std::vector<FiniteDistribution> marginals;
  marginals.reserve(ns.size());
  for (int64_t n : ns) {
    std::map<MetricPoint, double> acc;
    for (const auto& [k, q] : spec.index_marginal(n)) {
      const FiniteDistribution& law = laws.at(k);
      for (std::size_t i = 0; i < law.atoms.size(); ++i) acc[law.atoms[i]] += q * law.weights[i];
    }
    std::vector<MetricPoint> atoms;
    std::vector<double> weights;
    for (const auto& [pt, w] : acc) {
      atoms.push_back(pt);
      weights.push_back(w);
    }
    marginals.push_back(FiniteDistribution::make(std::move(atoms), std::move(weights)));
  }
  return exact_lambda_w_marginals(spec.space(), marginals, target, family);
}

// ---------------------------------------------------------------------------
// Five formulations on a finite support

TestSet continuity_realization(const Space& space, const std::vector<MetricPoint>& support,
                               uint32_t mask) {
  if (space.kind() == SpaceKind::discrete) {
    // every subset of a discrete space is clopen; its boundary is empty
    std::vector<MetricPoint> sel;
    for (std::size_t j = 0; j < support.size(); ++j)
      if (mask & (1u << j)) sel.push_back(support[j]);
    return TestSet::finite_points(std::move(sel), 0.0);
  }
  if (!space.is_scalar())
    throw Error(Errc::DomainMismatch, "continuity realization needs a scalar or discrete space");

  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t j = 0; j < support.size(); ++j) order.emplace_back(support[j].scalar(), j);
  std::sort(order.begin(), order.end());

  double pad = 1.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    pad = std::min(pad, 0.5 * (order[i + 1].first - order[i].first));

  // maximal runs of selected points become closed intervals cut between
  // neighbours, so no support point sits on a boundary
  std::vector<std::pair<double, double>> ivs;
  std::size_t i = 0;
  while (i < order.size()) {
    if (!(mask & (1u << order[i].second))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < order.size() && (mask & (1u << order[j + 1].second))) ++j;
    const double lo =
        i == 0 ? order[i].first - pad : 0.5 * (order[i - 1].first + order[i].first);
    const double hi = j + 1 == order.size() ? order[j].first + pad
                                            : 0.5 * (order[j].first + order[j + 1].first);
    ivs.emplace_back(lo, hi);
    i = j + 1;
  }
  return TestSet::interval_union(std::move(ivs));
}

FiveFormResult lambda_w_five_forms(const Space& space,
                                   const std::vector<FiniteDistribution>& marginals,
                                   const FiniteDistribution& target,
                                   std::vector<double> alpha_grid) {
  if (marginals.empty())
    throw Error(Errc::ValidationError, "five-form evaluation needs at least one marginal");

  // combined support
  std::vector<MetricPoint> support;
  auto index_of = [&](const MetricPoint& p) -> std::size_t {
    for (std::size_t j = 0; j < support.size(); ++j)
      if (support[j] == p) return j;
    support.push_back(p);
    if (support.size() > 20)
      throw Error(Errc::SupportTooLarge, "combined support exceeds 20 points");
    return support.size() - 1;
  };

  std::vector<double> t_mass;
  for (std::size_t i = 0; i < target.atoms.size(); ++i) {
    const std::size_t j = index_of(target.atoms[i]);
    if (t_mass.size() <= j) t_mass.resize(j + 1, 0.0);
    t_mass[j] += target.weights[i];
  }
  std::vector<std::vector<double>> n_mass(marginals.size());
  for (std::size_t m = 0; m < marginals.size(); ++m) {
    for (std::size_t i = 0; i < marginals[m].atoms.size(); ++i) {
      const std::size_t j = index_of(marginals[m].atoms[i]);
      if (n_mass[m].size() <= j) n_mass[m].resize(j + 1, 0.0);
      n_mass[m][j] += marginals[m].weights[i];
    }
  }
  const std::size_t K = support.size();
  t_mass.resize(K, 0.0);
  for (auto& v : n_mass) v.resize(K, 0.0);

  // pairwise distances and the auto alpha grid
  std::vector<std::vector<double>> dist(K, std::vector<double>(K, 0.0));
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b < K; ++b) {
      dist[a][b] = space.distance(support[a], support[b]);
      if (a != b && dist[a][b] > 0.0) min_dist = std::min(min_dist, dist[a][b]);
    }
  if (!std::isfinite(min_dist)) min_dist = 1.0;  // single-point support
  if (alpha_grid.empty()) {
    alpha_grid.push_back(0.5 * min_dist);
    for (std::size_t a = 0; a < K; ++a)
      for (std::size_t b = a + 1; b < K; ++b)
        if (dist[a][b] > 0.0) alpha_grid.push_back(dist[a][b]);
    std::sort(alpha_grid.begin(), alpha_grid.end());
    alpha_grid.erase(std::unique(alpha_grid.begin(), alpha_grid.end()), alpha_grid.end());
  } else {
    bool has_sub_minimal = false;
    for (double a : alpha_grid) has_sub_minimal |= (a > 0.0 && a < min_dist);
    if (!has_sub_minimal)
      throw Error(Errc::ValidationError,
                  "alpha grid needs a value strictly below the smallest support distance");
  }
  const std::vector<double> widths = {0.5 * min_dist, min_dist, 2.0 * min_dist};

  const uint32_t total = 1u << K;
  const std::size_t M = marginals.size();
  FiveFormResult out;

  std::vector<double> st(total, 0.0);
  for (uint32_t mask = 1; mask < total; ++mask) {
    const uint32_t low = mask & (mask - 1);
    st[mask] = st[low] + t_mass[static_cast<std::size_t>(__builtin_ctz(mask))];
  }

  // per-alpha neighbourhood bitmasks (atom j, enlarged-set membership test)
  std::vector<std::vector<uint32_t>> near(alpha_grid.size(), std::vector<uint32_t>(K, 0));
  for (std::size_t a = 0; a < alpha_grid.size(); ++a)
    for (std::size_t j = 0; j < K; ++j) {
      uint32_t bits = 0;
      for (std::size_t b = 0; b < K; ++b)
        if (dist[j][b] <= alpha_grid[a]) bits |= (1u << b);
      near[a][j] = bits;
    }

  // one marginal at a time keeps memory at two 2^K buffers
  std::vector<double> sn(total, 0.0);
  for (std::size_t m = 0; m < M; ++m) {
    sn[0] = 0.0;
    for (uint32_t mask = 1; mask < total; ++mask) {
      const uint32_t low = mask & (mask - 1);
      sn[mask] = sn[low] + n_mass[m][static_cast<std::size_t>(__builtin_ctz(mask))];
    }
    for (uint32_t mask = 0; mask < total; ++mask) {
      // closed: P[xi_n in F] - P[target in F]
      out.closed_form = std::max(out.closed_form, sn[mask] - st[mask]);
      // continuity: |gap| over boundary-null realizations of the subset
      out.continuity_form = std::max(out.continuity_form, std::abs(st[mask] - sn[mask]));
      // open: complement masses accumulated directly, target minus sequence
      double tg = 0.0, ng = 0.0;
      for (std::size_t j = 0; j < K; ++j)
        if (!(mask & (1u << j))) {
          tg += t_mass[j];
          ng += n_mass[m][j];
        }
      out.open_form = std::max(out.open_form, tg - ng);
    }
    // enlargement: P[target in A] - P[xi_n in A^(alpha)]
    for (std::size_t a = 0; a < alpha_grid.size(); ++a) {
      const auto& nb = near[a];
      for (uint32_t mask = 0; mask < total; ++mask) {
        double enlarged = 0.0;
        for (std::size_t j = 0; j < K; ++j)
          if (nb[j] & mask) enlarged += n_mass[m][j];
        out.enlargement_form = std::max(out.enlargement_form, st[mask] - enlarged);
      }
    }
  }

  // function: hats on support subsets; widths include a sub-minimal value,
  // where the hat collapses to the subset indicator
  std::vector<double> dmin(K, 0.0);
  for (uint32_t mask = 1; mask < total; ++mask) {
    for (std::size_t j = 0; j < K; ++j) {
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < K; ++b)
        if (mask & (1u << b)) d = std::min(d, dist[j][b]);
      dmin[j] = d;
    }
    for (double w : widths) {
      double te = 0.0;
      for (std::size_t j = 0; j < K; ++j)
        if (dmin[j] < w) te += t_mass[j] * (1.0 - dmin[j] / w);
      for (std::size_t m = 0; m < M; ++m) {
        double ne = 0.0;
        for (std::size_t j = 0; j < K; ++j)
          if (dmin[j] < w) ne += n_mass[m][j] * (1.0 - dmin[j] / w);
        out.function_form = std::max(out.function_form, std::abs(te - ne));
      }
    }
  }

  return out;
}

// ---------------------------------------------------------------------------
// Pathwise proof inclusion

ProofCheckResult proof_inclusion_check(const Space& space, const Path& path, int64_t N_n,
                                       int64_t k_n, double delta, double epsilon,
                                       const TestSet& F) {
  if (k_n < 1 || N_n < 1) throw Error(Errc::ValidationError, "indices must be positive");
  if (!(delta > 0.0) || !(epsilon > 0.0))
    throw Error(Errc::ValidationError, "delta and epsilon must be positive");
  const auto [lo, hi] = window_bounds(k_n, delta);
  if (hi > path.horizon() || N_n > path.horizon())
    throw Error(Errc::HorizonExceeded, "window or index reaches beyond the path horizon");

  ProofCheckResult res;
  if (!F.contains(space, path.at(N_n))) {
    res.first_violated = ProofPremise::randomized_membership;
    return res;
  }
  const MetricPoint anchor = path.at(k_n);
  double osc = 0.0;
  for (int64_t m = lo; m <= hi; ++m) osc = std::max(osc, space.distance(anchor, path.at(m)));
  if (!(osc < epsilon)) {
    res.first_violated = ProofPremise::window_oscillation;
    return res;
  }
  if (std::abs(static_cast<double>(k_n - N_n)) > delta * static_cast<double>(k_n)) {
    res.first_violated = ProofPremise::index_proximity;
    return res;
  }
  res.premises_hold = true;
  res.conclusion_holds = F.enlarged(epsilon).contains(space, anchor);
  if (!res.conclusion_holds)
    throw Error(Errc::TheoremViolation,
                "premises hold but xi_{k_n} escaped the enlarged set; implementation bug");
  return res;
}

// ---------------------------------------------------------------------------
// Binomial marginal of the +-1 random walk

FiniteDistribution rademacher_partial_sum_marginal(int64_t n) {
  if (n < 1) throw Error(Errc::ValidationError, "marginal index must be >= 1");
  const double root = std::sqrt(static_cast<double>(n));
  const double ln2n = static_cast<double>(n) * std::log(2.0);
  std::vector<MetricPoint> atoms;
  std::vector<double> weights;
  double total = 0.0;
  for (int64_t j = 0; j <= n; ++j) {
    const double lw = std::lgamma(static_cast<double>(n) + 1.0) -
                      std::lgamma(static_cast<double>(j) + 1.0) -
                      std::lgamma(static_cast<double>(n - j) + 1.0) - ln2n;
    const double w = std::exp(lw);
    if (w < 1e-18) continue;  // mass below resolution; dropped before normalizing
    atoms.push_back(MetricPoint::real(static_cast<double>(2 * j - n) / root));
    weights.push_back(w);
    total += w;
  }
  for (double& w : weights) w /= total;
  return FiniteDistribution::make(std::move(atoms), std::move(weights));
}

// ---------------------------------------------------------------------------
// Estimator vs oracle comparison

namespace {

CompareRow make_row(std::string name, double mc, double oracle, double stderr_) {
  CompareRow row;
  row.name = std::move(name);
  row.mc = mc;
  row.oracle = oracle;
  row.stderr_ = stderr_;
  if (stderr_ > 0.0) {
    row.z = (mc - oracle) / stderr_;
  } else {
    row.z = std::abs(mc - oracle) <= 1e-12 ? 0.0 : (mc > oracle ? 1e9 : -1e9);
  }
  row.flagged = std::abs(row.z) > 4.0;
  return row;
}

}  // namespace

CompareTable mc_vs_oracle_compare(const Scenario& sc, const McOptions& mc) {
  sc.grid.validate();
  const auto ns = sc.grid.n_points();
  const auto plan =
      detail::WindowPlan::build(sc.grid.epsilon_grid, sc.grid.delta_grid, ns);
  int64_t horizon = plan.horizon;
  for (int64_t n : ns) horizon = std::max(horizon, sc.index_model.max_index_bound(n));
  const FiniteProcessSpec spec = exact_finite_spec(sc.process, sc.index_model, horizon);

  CompareTable table;

  {
    const double eps0 = sc.grid.epsilon_grid.front();
    const double delta0 = sc.grid.delta_grid.front();
    const int64_t n0 = ns.front();
    const auto probe = window_exceedance(sc.process, n0, delta0, eps0, sc.grid.samples, mc);
    const double exact = exact_window_exceedance(spec, n0, delta0, eps0);
    table.rows.push_back(make_row("window_exceedance", probe.value, exact, probe.stderr_));
  }
  {
    const auto est = chi_ansc(sc.process, sc.grid, mc);
    table.rows.push_back(
        make_row("chi_ansc", est.value, exact_chi_surrogate(spec, sc.grid), est.stderr_));
  }
  for (const auto& kn : sc.kn_candidates) {
    const auto est = lambda_p_ratio(sc.index_model, kn, sc.grid, mc);
    table.rows.push_back(make_row("lambda_p[" + kn.label() + "]", est.value,
                                  exact_lambda_p(spec, kn, sc.grid), est.stderr_));
  }
  {
    const auto est = lambda_w_marginal(sc.process, sc.target, sc.family, sc.grid, mc);
    table.rows.push_back(make_row("lambda_w", est.value,
                                  exact_lambda_w_marginal(spec, sc.target, sc.family, sc.grid),
                                  est.stderr_));
  }
  {
    const auto est =
        lambda_w_randomized(sc.process, sc.index_model, sc.target, sc.family, sc.grid, mc);
    table.rows.push_back(
        make_row("lambda_w_randomized", est.value,
                 exact_lambda_w_randomized(spec, sc.target, sc.family, sc.grid), est.stderr_));
  }

  for (const auto& row : table.rows) table.any_flagged |= row.flagged;
  return table;
}

}  // namespace anscombe
