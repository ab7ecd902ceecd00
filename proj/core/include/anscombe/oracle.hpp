#pragma once

#include <string>
#include <vector>

#include "anscombe/indices.hpp"

namespace anscombe {

/// The five equivalent formulations of the weak-convergence defect,
/// evaluated exactly on a finite support. Under the documented grid
/// conditions (an alpha below the smallest nonzero pairwise distance, hat
/// widths likewise) all five coincide within 1e-9.
struct FiveFormResult {
  double function_form = 0.0;     // sup over hat test functions of |E-gap|
  double enlargement_form = 0.0;  // sup over alpha, A of P[target in A] - P[xi_n in A^(alpha)]
  double open_form = 0.0;         // sup over open G of P[target in G] - P[xi_n in G]
  double closed_form = 0.0;       // sup over closed F of P[xi_n in F] - P[target in F]
  double continuity_form = 0.0;   // sup over boundary-null A of |P-gap|

  double max_pairwise_gap() const;
};

/// Exact P[max over the (delta, n)-window of d(xi_n, xi_m) >= epsilon].
double exact_window_exceedance(const FiniteProcessSpec& spec, int64_t n, double delta,
                               double epsilon);

/// Exact grid surrogate of the oscillation index.
double exact_chi_surrogate(const FiniteProcessSpec& spec, const EstimatorGrid& grid);

/// Exact grid surrogate of the N_n/k_n deviation index.
double exact_lambda_p(const FiniteProcessSpec& spec, const KnSpec& kn, const EstimatorGrid& grid);

/// Closed-set weak defect from explicit per-n marginal laws (one entry per
/// evaluated n), clamped to [0,1].
double exact_lambda_w_marginals(const Space& space,
                                const std::vector<FiniteDistribution>& marginals,
                                const Law& target, const SetFamily& family);

double exact_lambda_w_marginal(const FiniteProcessSpec& spec, const Law& target,
                               const SetFamily& family, const EstimatorGrid& grid);

double exact_lambda_w_randomized(const FiniteProcessSpec& spec, const Law& target,
                                 const SetFamily& family, const EstimatorGrid& grid);

/// All five weak-defect formulations by exhaustive subset enumeration over
/// the combined support (cap 20 points; SupportTooLarge beyond). Passing an
/// empty alpha grid derives it automatically: the distinct pairwise support
/// distances plus half the minimum.
FiveFormResult lambda_w_five_forms(const Space& space,
                                   const std::vector<FiniteDistribution>& marginals,
                                   const FiniteDistribution& target,
                                   std::vector<double> alpha_grid = {});

/// Realization of a support subset as a boundary-null set: midpoint-cut
/// closed intervals on the line, the point set itself in a discrete space.
TestSet continuity_realization(const Space& space, const std::vector<MetricPoint>& support,
                               uint32_t mask);

enum class ProofPremise {
  none,
  randomized_membership,  // xi_{N_n} in F
  window_oscillation,     // max over the k_n window of d(xi_{k_n}, xi_m) < eps
  index_proximity,        // |k_n - N_n| <= delta k_n
};

struct ProofCheckResult {
  bool premises_hold = false;
  ProofPremise first_violated = ProofPremise::none;
  bool conclusion_holds = false;  // meaningful when premises_hold
};

/// Pathwise check of the inclusion driving the inequality: when all three
/// premises hold on a realization, xi_{k_n} must land in the eps-enlargement
/// of F. A premises-true/conclusion-false observation is impossible unless
/// the implementation is broken, and raises TheoremViolation.
ProofCheckResult proof_inclusion_check(const Space& space, const Path& path, int64_t N_n,
                                       int64_t k_n, double delta, double epsilon,
                                       const TestSet& F);

/// Exact law of S_n / sqrt(n) for +-1 equiprobable steps (binomial masses).
FiniteDistribution rademacher_partial_sum_marginal(int64_t n);

struct CompareRow {
  std::string name;
  double mc = 0.0;
  double oracle = 0.0;
  double stderr_ = 0.0;
  double z = 0.0;
  bool flagged = false;
};

struct CompareTable {
  std::vector<CompareRow> rows;
  bool any_flagged = false;
};

/// Runs every estimator and its exact counterpart on an enumerable scenario
/// and reports z-scores; |z| > 4 rows are flagged.
CompareTable mc_vs_oracle_compare(const Scenario& sc, const McOptions& mc);

}  // namespace anscombe
