#pragma once

#include <string>
#include <vector>

#include "anscombe/metric_space.hpp"
#include "anscombe/rng.hpp"

namespace anscombe {

/// Standard normal CDF, |error| <= 1e-9 (erfc-backed).
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Finite-support law: distinct atoms with nonnegative weights summing to 1
/// (renormalized at construction, rejected if off by more than 1e-9).
struct FiniteDistribution {
  std::vector<MetricPoint> atoms;
  std::vector<double> weights;

  static FiniteDistribution make(std::vector<MetricPoint> atoms, std::vector<double> weights);

  double prob_of(const Space& space, const TestSet& s) const;
  double prob_of(const Space& space, const OpenSetView& g) const;
  double expect_hat(const Space& space, const HatFunction& h) const;
};

struct NormalParams {
  double mean = 0.0;
  double stddev = 1.0;
};

/// Law of an X-valued random variable. Either finite-support (exact atom
/// bookkeeping) or normal (closed-form probabilities on half-lines and
/// interval unions). Point masses and uniform laws on finite atom lists are
/// finite-support special cases.
class Law {
 public:
  static Law normal(double mean, double stddev);
  static Law point_mass(MetricPoint p);
  static Law uniform_finite(std::vector<MetricPoint> atoms);
  static Law finite(FiniteDistribution d);

  bool is_normal() const noexcept { return is_normal_; }
  bool is_finite() const noexcept { return !is_normal_; }
  const NormalParams& normal_params() const;
  const FiniteDistribution& finite_dist() const;

  /// Exact P[xi in S]. Throws UnsupportedSetForLaw when no closed form
  /// exists (normal law with a set that is not reducible to intervals).
  double exact_prob(const Space& space, const TestSet& s) const;
  double exact_prob(const Space& space, const OpenSetView& g) const;

  /// Exact E[h(xi)]; quadrature against the normal density, weighted sum on
  /// finite support.
  double expect_hat(const Space& space, const HatFunction& h) const;

  /// One draw. Deterministic function of the stream state.
  MetricPoint sample(RngStream& rng) const;
  /// Fast path for 1-d laws; avoids MetricPoint allocation.
  double sample_scalar(RngStream& rng) const;

  bool is_scalar_law() const;
  std::string label(const Space& space) const;

 private:
  Law() = default;

  bool is_normal_ = false;
  NormalParams normal_{};
  FiniteDistribution finite_{};
};

}  // namespace anscombe
