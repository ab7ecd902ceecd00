#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anscombe/processes.hpp"

namespace anscombe {

/// Discretization of the surrogate functionals: epsilon/delta/alpha grids,
/// the n-window [a,b] with stride standing in for limsup_n, and the Monte
/// Carlo sample count.
struct EstimatorGrid {
  std::vector<double> epsilon_grid;
  std::vector<double> delta_grid;
  std::vector<double> alpha_grid;  // ignored when alpha_auto
  bool alpha_auto = true;
  int64_t n_lo = 1;
  int64_t n_hi = 1;
  int64_t stride = 1;
  int64_t samples = 1000;

  /// Throws ValidationError on the first violated constraint. The config
  /// loader reports all violations; this is the library-level guard.
  void validate() const;

  std::vector<int64_t> n_points() const;
  double epsilon_min() const { return epsilon_grid.front(); }
  double delta_max() const { return delta_grid.back(); }
};

/// lo = max(1, ceil((1-delta) n)), hi = floor((1+delta) n). A 1e-9 guard
/// absorbs representation error in the products; half-integers resolve the
/// way the exact expressions do.
std::pair<int64_t, int64_t> window_bounds(int64_t n, double delta);

struct McOptions {
  uint64_t master_seed = 0;
  int threads = 1;
};

/// One per-grid table entry. Unused key dimensions stay disengaged.
struct GridCell {
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> alpha;
  std::optional<int64_t> n;
  std::string set_label;
  double value = 0.0;
  double stderr_ = 0.0;
};

/// An estimated index value in [0,1] with the full inner-probability table
/// it was composed from, the argmax/argmin grid points (ties resolve to the
/// smallest grid value), and the binomial standard error of the selected
/// cell.
struct IndexEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::vector<GridCell> per_grid;
  std::optional<double> arg_epsilon;
  std::optional<double> arg_delta;
  std::optional<int64_t> arg_n;
  std::string arg_set;
  std::optional<double> hat_form;  // companion test-function estimate (lambda_w only)
};

struct ProbeEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// P[max_{m in window(n, delta)} d(xi_n, xi_m) >= epsilon], Monte Carlo.
ProbeEstimate window_exceedance(const ProcessModel& m, int64_t n, double delta, double epsilon,
                                int64_t samples, const McOptions& mc);

/// The oscillation index surrogate:
///   max over eps of ( min over delta of ( max over the n-window of the
///   window exceedance probability ) ).
IndexEstimate chi_ansc(const ProcessModel& m, const EstimatorGrid& grid, const McOptions& mc);

/// Deviation-from-1 index of N_n/k_n:
///   max over eps of max over the n-window of P[|N_n/k_n - 1| >= eps].
IndexEstimate lambda_p_ratio(const IndexModel& im, const KnSpec& kn, const EstimatorGrid& grid,
                             const McOptions& mc);

/// Evaluates lambda_p_ratio for every candidate (shared index draws) and
/// returns the minimizer; a restricted-family upper bound on the true
/// infimum. Ties resolve to the earliest candidate.
std::pair<KnSpec, IndexEstimate> infimum_over_kn(const IndexModel& im,
                                                 const std::vector<KnSpec>& candidates,
                                                 const EstimatorGrid& grid, const McOptions& mc);

/// Weak-convergence defect of the plain sequence against the target law,
/// clamped to [0,1]:
///   max over F in the family of max over the n-window of
///   ( P[xi_n in F] - P[target in F] ).
/// The companion hat-form value (test functions on the family at the
/// epsilon-grid widths) is reported in .hat_form.
IndexEstimate lambda_w_marginal(const ProcessModel& m, const Law& target, const SetFamily& family,
                                const EstimatorGrid& grid, const McOptions& mc);

/// Same functional for the randomized sequence xi_{N_n}.
IndexEstimate lambda_w_randomized(const ProcessModel& m, const IndexModel& im, const Law& target,
                                  const SetFamily& family, const EstimatorGrid& grid,
                                  const McOptions& mc);

/// sup over the family of P[target in F^(eps)] - P[target in F]: the
/// target-law modulus absorbed into the verifier slack.
double target_modulus(const Space& space, const Law& target, const SetFamily& family, double eps);

/// Term toggles for sensitivity checks of the verifier (a dropped term must
/// make a suitably tuned scenario fail).
struct VerifierTerms {
  bool weak = true;
  bool chi = true;
  bool lp = true;
};

struct SlackBreakdown {
  double mc = 0.0;       // 3 x combined standard error
  double modulus = 0.0;  // target modulus at the smallest epsilon
  double total = 0.0;
};

struct InequalityReport {
  IndexEstimate lhs;        // lambda_w of the randomized sequence
  IndexEstimate rhs_weak;   // lambda_w of the plain sequence
  IndexEstimate rhs_chi;    // oscillation index
  IndexEstimate rhs_lp;     // deviation index at the best kn
  KnSpec best_kn = KnSpec::linear(1.0);
  SlackBreakdown slack;
  bool pass = false;
  double lhs_value() const { return lhs.value; }
  double rhs_total() const;
};

/// A fully assembled experiment: everything the estimators need.
struct Scenario {
  Space space = Space::euclidean(1);
  ProcessModel process = ProcessModel::constant(Space::euclidean(1), MetricPoint::real(0.0));
  IndexModel index_model = IndexModel::deterministic(KnSpec::linear(1.0));
  Law target = Law::point_mass(MetricPoint::real(0.0));
  SetFamily family = SetFamily::half_lines({0.0}, true, true);
  std::vector<KnSpec> kn_candidates = {KnSpec::linear(1.0)};
  EstimatorGrid grid;
};

/// Runs the four estimators on independent substreams and checks
///   lhs <= rhs_weak + rhs_chi + rhs_lp + slack,
/// slack = 3 x (sum of the four standard errors) + target modulus at the
/// smallest epsilon. Terms can be masked for sensitivity checks.
InequalityReport verify_inequality(const Scenario& sc, const McOptions& mc,
                                   const VerifierTerms& terms = {});

}  // namespace anscombe
