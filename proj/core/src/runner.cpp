#include "anscombe/runner.hpp"

#include <algorithm>
#include <cstdio>

namespace anscombe {

namespace {

struct Prepared {
  ScenarioConfig cfg;
  Scenario sc;
  McOptions mc;
};

Prepared prepare(const ScenarioConfig& config, const RunnerOptions& opt) {
  Prepared p{config, {}, {}};
  if (opt.seed_override) p.cfg.seed = *opt.seed_override;
  if (opt.samples_override) {
    if (*opt.samples_override < 100)
      throw ConfigError(Errc::ValidationError, {"samples override must be >= 100"});
    p.cfg.grid.samples = *opt.samples_override;
  }
  p.sc = p.cfg.to_scenario();
  p.mc.master_seed = p.cfg.seed;
  p.mc.threads = std::max(1, opt.threads);
  return p;
}

bool wants(const ScenarioConfig& cfg, const char* name) {
  if (cfg.quantities.empty()) return true;
  return std::find(cfg.quantities.begin(), cfg.quantities.end(), name) != cfg.quantities.end();
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int64_t oracle_horizon(const Scenario& sc) {
  int64_t horizon = sc.grid.n_hi;
  const double top = (1.0 + sc.grid.delta_max()) * static_cast<double>(sc.grid.n_hi);
  horizon = std::max<int64_t>(horizon, static_cast<int64_t>(top) + 1);
  for (int64_t n : sc.grid.n_points())
    horizon = std::max(horizon, sc.index_model.max_index_bound(n));
  return horizon;
}

}  // namespace

RunReport run_estimate(const ScenarioConfig& config, const RunnerOptions& opt) {
  auto [cfg, sc, mc] = prepare(config, opt);
  RunReport rep;
  rep.command = "estimate";
  rep.canonical_config = cfg.canonical_json();

  std::string brief;
  if (wants(cfg, "chi")) {
    const auto est = chi_ansc(sc.process, sc.grid, mc);
    brief += " chi=" + fmt3(est.value);
    rep.quantities.push_back(QuantityRecord::from_estimate("chi_ansc", est));
  }
  if (wants(cfg, "lambda_p")) {
    for (const auto& kn : sc.kn_candidates) {
      const auto est = lambda_p_ratio(sc.index_model, kn, sc.grid, mc);
      rep.quantities.push_back(
          QuantityRecord::from_estimate("lambda_p[" + kn.label() + "]", est));
    }
    const auto [best, est] = infimum_over_kn(sc.index_model, sc.kn_candidates, sc.grid, mc);
    auto rec = QuantityRecord::from_estimate("lambda_p_infimum", est);
    rec.arg_set = best.label();
    brief += " lambda_p_inf=" + fmt3(est.value);
    rep.quantities.push_back(std::move(rec));
  }
  if (wants(cfg, "lambda_w")) {
    const auto est = lambda_w_marginal(sc.process, sc.target, sc.family, sc.grid, mc);
    brief += " lambda_w=" + fmt3(est.value);
    rep.quantities.push_back(QuantityRecord::from_estimate("lambda_w", est));
  }
  if (wants(cfg, "lambda_w_randomized")) {
    const auto est =
        lambda_w_randomized(sc.process, sc.index_model, sc.target, sc.family, sc.grid, mc);
    brief += " lambda_w_randomized=" + fmt3(est.value);
    rep.quantities.push_back(QuantityRecord::from_estimate("lambda_w_randomized", est));
  }
  rep.ok = true;
  rep.summary = "estimate OK" + brief;
  return rep;
}

RunReport run_verify(const ScenarioConfig& config, const RunnerOptions& opt) {
  auto [cfg, sc, mc] = prepare(config, opt);
  const InequalityReport ineq = verify_inequality(sc, mc, opt.terms);

  RunReport rep;
  rep.command = "verify";
  rep.canonical_config = cfg.canonical_json();
  InequalityRecord rec;
  rec.lhs = QuantityRecord::from_estimate("lambda_w_randomized", ineq.lhs);
  rec.rhs_weak = QuantityRecord::from_estimate("lambda_w", ineq.rhs_weak);
  rec.rhs_chi = QuantityRecord::from_estimate("chi_ansc", ineq.rhs_chi);
  rec.rhs_lp = QuantityRecord::from_estimate("lambda_p_infimum", ineq.rhs_lp);
  rec.best_kn = ineq.best_kn.label();
  rec.slack_mc = ineq.slack.mc;
  rec.slack_modulus = ineq.slack.modulus;
  rec.slack_total = ineq.slack.total;
  rec.pass = ineq.pass;
  rep.inequality = std::move(rec);
  rep.ok = ineq.pass;
  rep.summary = std::string("verify ") + (ineq.pass ? "PASS" : "FAIL") +
                " lhs=" + fmt3(ineq.lhs.value) + " rhs_weak=" + fmt3(ineq.rhs_weak.value) +
                " chi=" + fmt3(ineq.rhs_chi.value) + " lambda_p=" + fmt3(ineq.rhs_lp.value) +
                " slack=" + fmt3(ineq.slack.total);
  return rep;
}

RunReport run_oracle(const ScenarioConfig& config, const RunnerOptions& opt) {
  auto [cfg, sc, mc] = prepare(config, opt);
  const FiniteProcessSpec spec = exact_finite_spec(sc.process, sc.index_model, oracle_horizon(sc));

  RunReport rep;
  rep.command = "oracle";
  rep.canonical_config = cfg.canonical_json();

  auto push_exact = [&](std::string name, double value) {
    QuantityRecord rec;
    rec.name = std::move(name);
    rec.value = value;
    rep.quantities.push_back(std::move(rec));
  };

  push_exact("chi_ansc", exact_chi_surrogate(spec, sc.grid));
  double best = 2.0;
  std::string best_label;
  for (const auto& kn : sc.kn_candidates) {
    const double v = exact_lambda_p(spec, kn, sc.grid);
    if (v < best) {
      best = v;
      best_label = kn.label();
    }
    push_exact("lambda_p[" + kn.label() + "]", v);
  }
  {
    QuantityRecord rec;
    rec.name = "lambda_p_infimum";
    rec.value = best;
    rec.arg_set = best_label;
    rep.quantities.push_back(std::move(rec));
  }
  push_exact("lambda_w", exact_lambda_w_marginal(spec, sc.target, sc.family, sc.grid));
  push_exact("lambda_w_randomized",
             exact_lambda_w_randomized(spec, sc.target, sc.family, sc.grid));

  // five formulations, when the combined support stays within the cap
  if (sc.target.is_finite()) {
    try {
      const auto ns = sc.grid.n_points();
      const auto laws = spec.marginal_laws(ns);
      std::vector<FiniteDistribution> marginals;
      for (int64_t n : ns) marginals.push_back(laws.at(n));
      const auto ff = lambda_w_five_forms(sc.space, marginals, sc.target.finite_dist(),
                                          sc.grid.alpha_auto ? std::vector<double>{}
                                                             : sc.grid.alpha_grid);
      FiveFormRecord rec;
      rec.function_form = ff.function_form;
      rec.enlargement_form = ff.enlargement_form;
      rec.open_form = ff.open_form;
      rec.closed_form = ff.closed_form;
      rec.continuity_form = ff.continuity_form;
      rec.max_pairwise_gap = ff.max_pairwise_gap();
      rep.five_forms = rec;
    } catch (const Error& e) {
      if (e.code() != Errc::SupportTooLarge) throw;
    }
  }

  rep.ok = true;
  rep.summary = "oracle OK chi=" + fmt3(rep.quantities[0].value) +
                " lambda_p_inf=" + fmt3(best);
  return rep;
}

RunReport run_compare(const ScenarioConfig& config, const RunnerOptions& opt) {
  auto [cfg, sc, mc] = prepare(config, opt);
  const CompareTable table = mc_vs_oracle_compare(sc, mc);

  RunReport rep;
  rep.command = "compare";
  rep.canonical_config = cfg.canonical_json();
  rep.compare = table.rows;
  rep.ok = !table.any_flagged;
  double worst = 0.0;
  for (const auto& row : table.rows) worst = std::max(worst, std::abs(row.z));
  rep.summary = std::string("compare ") + (rep.ok ? "OK" : "FLAGGED") +
                " rows=" + std::to_string(table.rows.size()) + " max|z|=" + fmt3(worst);
  return rep;
}

}  // namespace anscombe
