#include "anscombe/indices.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "parallel.hpp"
#include "window_kernel.hpp"

namespace anscombe {

namespace {

// Fixed stream namespaces so the four estimators inside one run consume
// independent substreams from one master seed.
constexpr uint64_t kTagWindowProbe = 0x57494E;
constexpr uint64_t kTagChi = 0x434849;
constexpr uint64_t kTagWeak = 0x4C574D;
constexpr uint64_t kTagRandomized = 0x4C5752;
constexpr uint64_t kTagLambdaP = 0x4C5030;

double binom_stderr(double p, int64_t n) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

}  // namespace

// ---------------------------------------------------------------------------
// EstimatorGrid / window_bounds

void EstimatorGrid::validate() const {
  if (epsilon_grid.empty() || delta_grid.empty())
    throw Error(Errc::ValidationError, "epsilon and delta grids must be nonempty");
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0))
      throw Error(Errc::ValidationError, "epsilon grid entries must be positive");
    if (i > 0 && !(epsilon_grid[i] > epsilon_grid[i - 1]))
      throw Error(Errc::ValidationError, "epsilon grid must be strictly increasing");
  }
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    if (!(delta_grid[i] > 0.0))
      throw Error(Errc::ValidationError, "delta grid entries must be positive");
    if (i > 0 && !(delta_grid[i] > delta_grid[i - 1]))
      throw Error(Errc::ValidationError, "delta grid must be strictly increasing");
  }
  if (!alpha_auto) {
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
      if (alpha_grid[i] < 0.0)
        throw Error(Errc::ValidationError, "alpha grid entries must be nonnegative");
      if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))
        throw Error(Errc::ValidationError, "alpha grid must be strictly increasing");
    }
  }
  if (n_lo < 1) throw Error(Errc::ValidationError, "n-window start must be >= 1");
  if (n_hi < n_lo) throw Error(Errc::ValidationError, "n-window must satisfy a <= b");
  if (stride < 1) throw Error(Errc::ValidationError, "stride must be >= 1");
  if (samples < 100) throw Error(Errc::ValidationError, "samples must be >= 100");
  // Below delta ~ 2/a the windows collapse to {n} across the whole n-range
  // and the oscillation surrogate degenerates to 0 regardless of the model.
  for (double d : delta_grid)
    if (d * static_cast<double>(n_lo) < 2.0)
      throw Error(Errc::ValidationError, "delta grid violates delta * a >= 2");
}

std::vector<int64_t> EstimatorGrid::n_points() const {
  std::vector<int64_t> ns;
  for (int64_t n = n_lo; n <= n_hi; n += stride) ns.push_back(n);
  return ns;
}

std::pair<int64_t, int64_t> window_bounds(int64_t n, double delta) {
  const double nn = static_cast<double>(n);
  const int64_t lo = std::max<int64_t>(1, detail::ceil_index((1.0 - delta) * nn));
  const int64_t hi = detail::floor_index((1.0 + delta) * nn);
  return {lo, hi};
}

namespace detail {

WindowPlan WindowPlan::build(std::vector<double> eps, std::vector<double> deltas,
                             std::vector<int64_t> ns) {
  WindowPlan p;
  p.eps = std::move(eps);
  p.deltas = std::move(deltas);
  p.ns = std::move(ns);
  p.windows.resize(p.deltas.size());
  for (std::size_t d = 0; d < p.deltas.size(); ++d) {
    p.windows[d].reserve(p.ns.size());
    for (int64_t n : p.ns) {
      const auto w = window_bounds(n, p.deltas[d]);
      p.windows[d].push_back(w);
      p.horizon = std::max(p.horizon, w.second);
    }
  }
  return p;
}

ChiComposition compose_chi(const WindowPlan& plan, const std::vector<double>& probs) {
  const std::size_t E = plan.eps.size(), D = plan.deltas.size(), N = plan.ns.size();
  ChiComposition out;
  bool first_e = true;
  for (std::size_t e = 0; e < E; ++e) {
    double inner = 0.0;
    std::size_t inner_d = 0, inner_i = 0;
    bool first_d = true;
    for (std::size_t d = 0; d < D; ++d) {
      double mx = 0.0;
      std::size_t mx_i = 0;
      bool first_i = true;
      for (std::size_t i = 0; i < N; ++i) {
        const double v = probs[plan.cell_index(e, d, i)];
        if (first_i || v > mx) {
          mx = v;
          mx_i = i;
          first_i = false;
        }
      }
      if (first_d || mx < inner) {
        inner = mx;
        inner_d = d;
        inner_i = mx_i;
        first_d = false;
      }
    }
    if (first_e || inner > out.value) {
      out.value = inner;
      out.arg_e = e;
      out.arg_d = inner_d;
      out.arg_i = inner_i;
      first_e = false;
    }
  }
  return out;
}

MaxComposition compose_max2(std::size_t A, std::size_t B, const std::vector<double>& values) {
  MaxComposition out;
  bool first = true;
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t b = 0; b < B; ++b) {
      const double v = values[a * B + b];
      if (first || v > out.value) {
        out.value = v;
        out.arg_a = a;
        out.arg_b = b;
        first = false;
      }
    }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Window exceedance + oscillation index

namespace {

struct CellCounts {
  std::vector<int64_t> cells;
};

// Shared MC engine for window-exceedance cells.
std::vector<double> mc_exceedance_probs(const ProcessModel& m, const detail::WindowPlan& plan,
                                        int64_t samples, uint64_t seed, int threads) {
  std::vector<int64_t> total(plan.cell_count(), 0);
  detail::run_blocked<CellCounts>(
      samples, threads,
      [&](int64_t lo, int64_t hi, CellCounts& acc) {
        acc.cells.assign(plan.cell_count(), 0);
        for (int64_t s = lo; s < hi; ++s) {
          RngStream rng(seed, static_cast<uint64_t>(s));
          const Path path = sample_path(m, rng, plan.horizon);
          detail::accumulate_exceedance<int64_t>(m.space(), path, plan, 1, acc.cells);
        }
      },
      [&](CellCounts& acc) {
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += acc.cells[i];
      });
  std::vector<double> probs(total.size());
  for (std::size_t i = 0; i < total.size(); ++i)
    probs[i] = static_cast<double>(total[i]) / static_cast<double>(samples);
  return probs;
}

}  // namespace

ProbeEstimate window_exceedance(const ProcessModel& m, int64_t n, double delta, double epsilon,
                                int64_t samples, const McOptions& mc) {
  if (n < 1 || !(delta > 0.0) || !(epsilon > 0.0) || samples < 1)
    throw Error(Errc::ValidationError, "window_exceedance needs n>=1, delta>0, eps>0, samples>=1");
  const auto plan = detail::WindowPlan::build({epsilon}, {delta}, {n});
  const auto probs =
      mc_exceedance_probs(m, plan, samples, RngStream::derive_seed(mc.master_seed, kTagWindowProbe),
                          mc.threads);
  return ProbeEstimate{probs[0], binom_stderr(probs[0], samples)};
}

IndexEstimate chi_ansc(const ProcessModel& m, const EstimatorGrid& grid, const McOptions& mc) {
  grid.validate();
  const auto plan = detail::WindowPlan::build(grid.epsilon_grid, grid.delta_grid, grid.n_points());
  const auto probs = mc_exceedance_probs(
      m, plan, grid.samples, RngStream::derive_seed(mc.master_seed, kTagChi), mc.threads);

  IndexEstimate est;
  est.per_grid.reserve(plan.cell_count());
  for (std::size_t e = 0; e < plan.eps.size(); ++e)
    for (std::size_t d = 0; d < plan.deltas.size(); ++d)
      for (std::size_t i = 0; i < plan.ns.size(); ++i) {
        GridCell cell;
        cell.epsilon = plan.eps[e];
        cell.delta = plan.deltas[d];
        cell.n = plan.ns[i];
        cell.value = probs[plan.cell_index(e, d, i)];
        cell.stderr_ = binom_stderr(cell.value, grid.samples);
        est.per_grid.push_back(std::move(cell));
      }
  const auto comp = detail::compose_chi(plan, probs);
  est.value = comp.value;
  est.stderr_ = binom_stderr(comp.value, grid.samples);
  est.arg_epsilon = plan.eps[comp.arg_e];
  est.arg_delta = plan.deltas[comp.arg_d];
  est.arg_n = plan.ns[comp.arg_i];
  return est;
}

// ---------------------------------------------------------------------------
// lambda_P of N_n / k_n -> 1

namespace {

std::vector<IndexEstimate> lambda_p_all(const IndexModel& im, const std::vector<KnSpec>& kns,
                                        const EstimatorGrid& grid, const McOptions& mc) {
  grid.validate();
  if (kns.empty()) throw Error(Errc::ValidationError, "kn candidate list must be nonempty");
  const auto ns = grid.n_points();
  const std::size_t E = grid.epsilon_grid.size(), N = ns.size(), C = kns.size();

  // k_n per candidate, precomputed
  std::vector<std::vector<int64_t>> kvals(C, std::vector<int64_t>(N));
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t i = 0; i < N; ++i) kvals[c][i] = kns[c].at(ns[i]);

  const uint64_t seed = RngStream::derive_seed(mc.master_seed, kTagLambdaP);
  std::vector<int64_t> total(C * E * N, 0);
  detail::run_blocked<CellCounts>(
      grid.samples, mc.threads,
      [&](int64_t lo, int64_t hi, CellCounts& acc) {
        acc.cells.assign(C * E * N, 0);
        for (int64_t s = lo; s < hi; ++s) {
          RngStream rng(seed, static_cast<uint64_t>(s));
          for (std::size_t i = 0; i < N; ++i) {
            const int64_t nn = ns[i];
            const int64_t real = im.sample_at(nn, rng);
            for (std::size_t c = 0; c < C; ++c) {
              const double dev = std::abs(static_cast<double>(real) /
                                              static_cast<double>(kvals[c][i]) -
                                          1.0);
              for (std::size_t e = 0; e < E && grid.epsilon_grid[e] <= dev; ++e)
                ++acc.cells[(c * E + e) * N + i];
            }
          }
        }
      },
      [&](CellCounts& acc) {
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += acc.cells[i];
      });

  std::vector<IndexEstimate> out(C);
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<double> probs(E * N);
    for (std::size_t e = 0; e < E; ++e)
      for (std::size_t i = 0; i < N; ++i)
        probs[e * N + i] = static_cast<double>(total[(c * E + e) * N + i]) /
                           static_cast<double>(grid.samples);
    IndexEstimate& est = out[c];
    est.per_grid.reserve(E * N);
    for (std::size_t e = 0; e < E; ++e)
      for (std::size_t i = 0; i < N; ++i) {
        GridCell cell;
        cell.epsilon = grid.epsilon_grid[e];
        cell.n = ns[i];
        cell.value = probs[e * N + i];
        cell.stderr_ = binom_stderr(cell.value, grid.samples);
        est.per_grid.push_back(std::move(cell));
      }
    const auto comp = detail::compose_max2(E, N, probs);
    est.value = comp.value;
    est.stderr_ = binom_stderr(comp.value, grid.samples);
    est.arg_epsilon = grid.epsilon_grid[comp.arg_a];
    est.arg_n = ns[comp.arg_b];
  }
  return out;
}

}  // namespace

IndexEstimate lambda_p_ratio(const IndexModel& im, const KnSpec& kn, const EstimatorGrid& grid,
                             const McOptions& mc) {
  return lambda_p_all(im, {kn}, grid, mc)[0];
}

std::pair<KnSpec, IndexEstimate> infimum_over_kn(const IndexModel& im,
                                                 const std::vector<KnSpec>& candidates,
                                                 const EstimatorGrid& grid, const McOptions& mc) {
  const auto all = lambda_p_all(im, candidates, grid, mc);
  std::size_t best = 0;
  for (std::size_t c = 1; c < all.size(); ++c)
    if (all[c].value < all[best].value) best = c;
  return {candidates[best], all[best]};
}

// ---------------------------------------------------------------------------
// lambda_w

namespace {

// Fast membership/distance evaluation for one set in a fixed space.
class SetProbe {
 public:
  SetProbe(const Space& space, const TestSet& set) : set_(set), space_(&space) {
    if (space.is_scalar()) {
      switch (set.kind()) {
        case TestSet::Kind::half_line:
          mode_ = set.half_line_dir() == HalfLineDir::le ? Mode::hl_le : Mode::hl_ge;
          t_ = set.half_line_threshold();
          return;
        case TestSet::Kind::interval_union:
          mode_ = Mode::intervals;
          ivs_ = set.intervals();
          return;
        case TestSet::Kind::box:
          mode_ = Mode::intervals;
          ivs_ = {set.box_bounds()[0]};
          return;
        case TestSet::Kind::finite_points: {
          mode_ = Mode::points1d;
          r_ = set.radius();
          for (const auto& p : set.points()) centers_.push_back(p.scalar());
          std::sort(centers_.begin(), centers_.end());
          return;
        }
      }
    }
    if (space.kind() == SpaceKind::discrete) {
      mode_ = Mode::discrete;
      sym_dist_.resize(static_cast<std::size_t>(space.alphabet_size()));
      for (int32_t s = 0; s < space.alphabet_size(); ++s)
        sym_dist_[static_cast<std::size_t>(s)] = set.dist_to(space, MetricPoint::symbol(s));
      return;
    }
    mode_ = Mode::generic;
  }

  double dist_scalar(double x) const {
    switch (mode_) {
      case Mode::hl_le: return x > t_ ? x - t_ : 0.0;
      case Mode::hl_ge: return x < t_ ? t_ - x : 0.0;
      case Mode::intervals: {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [lo, hi] : ivs_) {
          const double d = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
          if (d < best) best = d;
          if (best == 0.0) return 0.0;
        }
        return best;
      }
      case Mode::points1d: {
        const auto it = std::lower_bound(centers_.begin(), centers_.end(), x);
        double best = std::numeric_limits<double>::infinity();
        if (it != centers_.end()) best = std::min(best, *it - x);
        if (it != centers_.begin()) best = std::min(best, x - *(it - 1));
        return std::max(0.0, best - r_);
      }
      default:
        return set_.dist_to(*space_, MetricPoint::real(x));
    }
  }

  double dist_symbol(int32_t s) const { return sym_dist_[static_cast<std::size_t>(s)]; }

  double dist_point(const MetricPoint& p) const { return set_.dist_to(*space_, p); }

 private:
  enum class Mode { hl_le, hl_ge, intervals, points1d, discrete, generic };
  Mode mode_ = Mode::generic;
  double t_ = 0.0, r_ = 0.0;
  std::vector<std::pair<double, double>> ivs_;
  std::vector<double> centers_;
  std::vector<double> sym_dist_;
  TestSet set_;
  const Space* space_;
};

struct LambdaWAcc {
  std::vector<int64_t> counts;  // [set][n]
  std::vector<double> hats;     // [set][w][n]
};

struct LambdaWData {
  std::vector<TestSet> sets;
  std::vector<std::string> labels;
  std::vector<double> target_probs;               // [set]
  std::vector<double> target_hats;                // [set][w]
  std::vector<int64_t> counts;                    // [set][n]
  std::vector<double> hats;                       // [set][w][n]
};

// One streamed pass over samples: membership counts and hat sums for every
// (set, n) cell, marginal (im == nullptr) or randomized (im != nullptr).
void lambda_w_scan(const ProcessModel& m, const IndexModel* im, const EstimatorGrid& grid,
                   const McOptions& mc, uint64_t tag, const std::vector<int64_t>& ns,
                   int64_t horizon, const std::vector<SetProbe>& probes,
                   std::size_t W, LambdaWData& data) {
  const std::size_t S = probes.size(), N = ns.size();
  const std::vector<double>& widths = grid.epsilon_grid;
  const uint64_t seed = RngStream::derive_seed(mc.master_seed, tag);
  data.counts.assign(S * N, 0);
  data.hats.assign(S * W * N, 0.0);
  const Space& space = m.space();
  const bool scalar = space.is_scalar();
  const bool symbolic = space.kind() == SpaceKind::discrete;

  detail::run_blocked<LambdaWAcc>(
      grid.samples, mc.threads,
      [&](int64_t lo, int64_t hi, LambdaWAcc& acc) {
        acc.counts.assign(S * N, 0);
        acc.hats.assign(S * W * N, 0.0);
        std::vector<int64_t> picked(N);
        for (int64_t smp = lo; smp < hi; ++smp) {
          RngStream rng(seed, static_cast<uint64_t>(smp));
          const Path path = sample_path(m, rng, horizon);
          if (im != nullptr) {
            for (std::size_t i = 0; i < N; ++i) picked[i] = im->sample_at(ns[i], rng);
          } else {
            for (std::size_t i = 0; i < N; ++i) picked[i] = ns[i];
          }
          for (std::size_t i = 0; i < N; ++i) {
            const int64_t pos = picked[i];
            for (std::size_t s = 0; s < S; ++s) {
              double d;
              if (scalar)
                d = probes[s].dist_scalar(path.scalar_at(pos));
              else if (symbolic)
                d = probes[s].dist_symbol(path.symbol_at(pos));
              else
                d = probes[s].dist_point(path.at(pos));
              if (d <= 0.0) ++acc.counts[s * N + i];
              for (std::size_t w = 0; w < W; ++w)
                if (d < widths[w]) acc.hats[(s * W + w) * N + i] += 1.0 - d / widths[w];
            }
          }
        }
      },
      [&](LambdaWAcc& acc) {
        for (std::size_t i = 0; i < data.counts.size(); ++i) data.counts[i] += acc.counts[i];
        for (std::size_t i = 0; i < data.hats.size(); ++i) data.hats[i] += acc.hats[i];
      });
}

IndexEstimate lambda_w_impl(const ProcessModel& m, const IndexModel* im, const Law& target,
                            const SetFamily& family, const EstimatorGrid& grid,
                            const McOptions& mc, uint64_t tag) {
  grid.validate();
  const Space& space = m.space();
  const auto ns = grid.n_points();
  const std::size_t N = ns.size();

  int64_t horizon = grid.n_hi;
  if (im != nullptr)
    for (int64_t n : ns) horizon = std::max(horizon, im->max_index_bound(n));

  LambdaWData data;
  data.sets = family.materialize();
  const std::size_t S = data.sets.size();
  const std::size_t W = grid.epsilon_grid.size();
  data.labels.reserve(S);
  std::vector<SetProbe> probes;
  probes.reserve(S);
  for (const auto& set : data.sets) {
    data.labels.push_back(set.label());
    probes.emplace_back(space, set);
  }
  data.target_probs.resize(S);
  data.target_hats.resize(S * W);
  for (std::size_t s = 0; s < S; ++s) {
    data.target_probs[s] = target.exact_prob(space, data.sets[s]);
    for (std::size_t w = 0; w < W; ++w)
      data.target_hats[s * W + w] =
          target.expect_hat(space, HatFunction(data.sets[s], grid.epsilon_grid[w]));
  }

  lambda_w_scan(m, im, grid, mc, tag, ns, horizon, probes, W, data);

  IndexEstimate est;
  std::vector<double> gaps(S * N);
  std::vector<double> phat(S * N);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t i = 0; i < N; ++i) {
      phat[s * N + i] =
          static_cast<double>(data.counts[s * N + i]) / static_cast<double>(grid.samples);
      gaps[s * N + i] = phat[s * N + i] - data.target_probs[s];
    }
  est.per_grid.reserve(S * N);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t i = 0; i < N; ++i) {
      GridCell cell;
      cell.set_label = data.labels[s];
      cell.n = ns[i];
      cell.value = gaps[s * N + i];
      cell.stderr_ = binom_stderr(phat[s * N + i], grid.samples);
      est.per_grid.push_back(std::move(cell));
    }
  const auto comp = detail::compose_max2(S, N, gaps);
  est.value = std::min(1.0, std::max(0.0, comp.value));
  est.stderr_ = binom_stderr(phat[comp.arg_a * N + comp.arg_b], grid.samples);
  est.arg_set = data.labels[comp.arg_a];
  est.arg_n = ns[comp.arg_b];

  double hat_best = 0.0;
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t w = 0; w < W; ++w)
      for (std::size_t i = 0; i < N; ++i) {
        const double ehat =
            data.hats[(s * W + w) * N + i] / static_cast<double>(grid.samples);
        hat_best = std::max(hat_best, std::abs(ehat - data.target_hats[s * W + w]));
      }
  est.hat_form = std::min(1.0, hat_best);
  return est;
}

}  // namespace

IndexEstimate lambda_w_marginal(const ProcessModel& m, const Law& target, const SetFamily& family,
                                const EstimatorGrid& grid, const McOptions& mc) {
  return lambda_w_impl(m, nullptr, target, family, grid, mc, kTagWeak);
}

IndexEstimate lambda_w_randomized(const ProcessModel& m, const IndexModel& im, const Law& target,
                                  const SetFamily& family, const EstimatorGrid& grid,
                                  const McOptions& mc) {
  return lambda_w_impl(m, &im, target, family, grid, mc, kTagRandomized);
}

// ---------------------------------------------------------------------------
// Verifier

double target_modulus(const Space& space, const Law& target, const SetFamily& family,
                      double eps) {
  if (eps < 0.0) throw Error(Errc::ValidationError, "modulus scale must be nonnegative");
  double worst = 0.0;
  for (const auto& set : family.materialize()) {
    const double base = target.exact_prob(space, set);
    const double grown = target.exact_prob(space, set.enlarged(eps));
    worst = std::max(worst, grown - base);
  }
  return worst;
}

double InequalityReport::rhs_total() const {
  return rhs_weak.value + rhs_chi.value + rhs_lp.value + slack.total;
}

InequalityReport verify_inequality(const Scenario& sc, const McOptions& mc,
                                   const VerifierTerms& terms) {
  sc.grid.validate();
  InequalityReport rep;
  rep.lhs = lambda_w_randomized(sc.process, sc.index_model, sc.target, sc.family, sc.grid, mc);
  double combined_stderr = rep.lhs.stderr_;
  if (terms.weak) {
    rep.rhs_weak = lambda_w_marginal(sc.process, sc.target, sc.family, sc.grid, mc);
    combined_stderr += rep.rhs_weak.stderr_;
  }
  if (terms.chi) {
    rep.rhs_chi = chi_ansc(sc.process, sc.grid, mc);
    combined_stderr += rep.rhs_chi.stderr_;
  }
  if (terms.lp) {
    auto [best, est] = infimum_over_kn(sc.index_model, sc.kn_candidates, sc.grid, mc);
    rep.best_kn = best;
    rep.rhs_lp = est;
    combined_stderr += rep.rhs_lp.stderr_;
  }
  rep.slack.mc = 3.0 * combined_stderr;
  rep.slack.modulus = target_modulus(sc.space, sc.target, sc.family, sc.grid.epsilon_min());
  rep.slack.total = rep.slack.mc + rep.slack.modulus;
  rep.pass = rep.lhs.value <= rep.rhs_total();
  return rep;
}

}  // namespace anscombe
