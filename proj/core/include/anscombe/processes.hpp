#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "anscombe/distributions.hpp"

namespace anscombe {

/// Deterministic comparison sequence (k_n)_n: linear k_n = max(1, round(c*n))
/// or an explicit nondecreasing positive list.
class KnSpec {
 public:
  static KnSpec linear(double c);
  static KnSpec explicit_list(std::vector<int64_t> values);

  int64_t at(int64_t n) const;
  bool is_linear() const noexcept { return is_linear_; }
  double linear_c() const { return c_; }
  const std::vector<int64_t>& explicit_values() const { return values_; }
  std::string label() const;

 private:
  KnSpec() = default;
  bool is_linear_ = true;
  double c_ = 1.0;
  std::vector<int64_t> values_;
};

/// One realization xi_1..xi_H. Stored as flat scalars or symbols so the
/// estimators can stream millions of paths without per-point allocation.
class Path {
 public:
  static Path scalars(std::vector<double> values);
  static Path symbols(std::vector<int32_t> values, int alphabet_size);
  static Path vectors(std::vector<double> flat, int dim);

  int64_t horizon() const noexcept { return horizon_; }
  bool is_scalar() const noexcept { return kind_ == Repr::scalar; }
  bool is_symbolic() const noexcept { return kind_ == Repr::symbol; }

  double scalar_at(int64_t n) const { return data_[n - 1]; }          // 1-based
  int32_t symbol_at(int64_t n) const { return syms_[n - 1]; }         // 1-based
  MetricPoint at(int64_t n) const;                                    // 1-based, checked

 private:
  enum class Repr { scalar, symbol, vector };
  Repr kind_ = Repr::scalar;
  int64_t horizon_ = 0;
  int dim_ = 1;
  std::vector<double> data_;
  std::vector<int32_t> syms_;

  friend Path compose_randomized(const Path& path, const std::vector<int64_t>& indices);
};

struct BlockGrowth {
  enum class Kind { linear, exponential };
  Kind kind = Kind::linear;
  double param = 2.0;  // c (block length) or r (ratio)

  static BlockGrowth linear(double c);
  static BlockGrowth exponential(double r);
};

/// Generator of the random sequence (xi_n)_n.
class ProcessModel {
 public:
  enum class Kind {
    constant,
    alternating,
    partial_sum_normalized,
    eventually_constant,
    block_oscillating,
  };

  struct Outcome {
    std::vector<MetricPoint> prefix;
    MetricPoint limit;
    double probability = 0.0;
  };

  static ProcessModel constant(Space space, MetricPoint x);
  /// xi_n = a for even n, b for odd n.
  static ProcessModel alternating(Space space, MetricPoint a, MetricPoint b);
  /// xi_n = S_n / sqrt(n), S_n the sum of n i.i.d. steps. Finite step laws
  /// must have mean 0 and variance 1; normal(0,1) steps are also accepted.
  static ProcessModel partial_sum_normalized(Space space, Law step_law);
  /// Finite outcome list: each outcome follows its prefix, then sits at its
  /// limit point forever. Probabilities must sum to 1 (within 1e-12).
  static ProcessModel eventually_constant(Space space, std::vector<Outcome> outcomes);
  /// Constant on blocks, alternating a/b across blocks. The block pattern is
  /// shifted by a phase drawn uniformly from {0, 1/P, ..., (P-1)/P}, which
  /// makes window-straddle probabilities land strictly between 0 and 1.
  /// phase_count = 1 recovers the deterministic pattern.
  static ProcessModel block_oscillating(Space space, BlockGrowth growth, MetricPoint a,
                                        MetricPoint b, int phase_count);

  Kind kind() const noexcept { return kind_; }
  const Space& space() const noexcept { return space_; }
  bool scalar_valued() const;

  const MetricPoint& point_a() const { return a_; }
  const MetricPoint& point_b() const { return b_; }
  const Law& step_law() const { return step_; }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  const BlockGrowth& growth() const { return growth_; }
  int phase_count() const { return phase_count_; }

  /// Block index of position n at phase u in [0,1).
  static int64_t block_index(const BlockGrowth& g, int64_t n, double u);

  std::string label() const;

 private:
  ProcessModel() : space_(Space::euclidean(1)) {}

  Kind kind_ = Kind::constant;
  Space space_;
  MetricPoint a_, b_;
  Law step_ = Law::point_mass(MetricPoint::real(0.0));
  std::vector<Outcome> outcomes_;
  BlockGrowth growth_{};
  int phase_count_ = 1;
};

/// Generator of the random index sequence (N_n)_n. Realizations for
/// different n are independent (one draw per n from the caller's stream).
class IndexModel {
 public:
  enum class Kind { deterministic, two_point, uniform_window, linear_noise };

  struct Halfwidth {
    double base = 0.0;
    double relative = 0.0;
    int64_t at(int64_t n) const;
  };

  static IndexModel deterministic(KnSpec kn);
  /// N_n = n with probability 1-q, 2n with probability q.
  static IndexModel two_point(double q);
  /// N_n uniform on {n, ..., floor((1+beta) n)}.
  static IndexModel uniform_window(double beta);
  /// N_n = max(1, round(c n) + U), U uniform on {-h(n), ..., h(n)}.
  static IndexModel linear_noise(double c, Halfwidth hw);

  Kind kind() const noexcept { return kind_; }
  double q() const { return q_; }
  double beta() const { return beta_; }
  double c() const { return c_; }
  const Halfwidth& halfwidth() const { return hw_; }
  const KnSpec& kn() const { return kn_; }

  /// One realization of N_n. Non-deterministic kinds consume exactly one
  /// draw; the deterministic kind consumes none.
  int64_t sample_at(int64_t n, RngStream& rng) const;

  /// Tight upper bound on any realization of N_n.
  int64_t max_index_bound(int64_t n) const;

  /// Exact marginal law of N_n as (value, probability) pairs.
  std::vector<std::pair<int64_t, double>> marginal(int64_t n) const;

  std::string label() const;

 private:
  IndexModel() = default;

  Kind kind_ = Kind::deterministic;
  double q_ = 0.0, beta_ = 0.0, c_ = 1.0;
  Halfwidth hw_{};
  KnSpec kn_ = KnSpec::linear(1.0);
};

/// Draw a full realization xi_1..xi_horizon.
Path sample_path(const ProcessModel& m, RngStream& rng, int64_t horizon);

/// Draw one N_n per entry of n_list (in order, one stream).
std::vector<int64_t> sample_indices(const IndexModel& im, RngStream& rng,
                                    const std::vector<int64_t>& n_list);

int64_t max_index_bound(const IndexModel& im, int64_t n);

/// The randomized sequence (xi_{N_j})_j: output j equals path value at
/// indices[j]. Throws IndexOutOfHorizon when an index exceeds the horizon.
Path compose_randomized(const Path& path, const std::vector<int64_t>& indices);

/// Exact joint law carrier for enumerable scenarios: the finite outcome
/// space of the process together with exact per-n index marginals.
class FiniteProcessSpec {
 public:
  FiniteProcessSpec(ProcessModel model, IndexModel im, int64_t horizon);

  int64_t horizon() const noexcept { return horizon_; }
  const Space& space() const { return model_.space(); }
  const IndexModel& index_model() const { return im_; }
  const ProcessModel& model() const { return model_; }

  std::size_t outcome_count() const;
  /// Visit every (path, probability). Paths for step models are generated on
  /// the fly; the visitor must not keep references.
  void for_each_outcome(const std::function<void(const Path&, double)>& visit) const;

  std::vector<std::pair<int64_t, double>> index_marginal(int64_t n) const;

  /// Exact law of xi_n (1 <= n <= horizon).
  FiniteDistribution marginal_law(int64_t n) const;
  /// Exact laws of xi_n for several n in one enumeration pass.
  std::map<int64_t, FiniteDistribution> marginal_laws(const std::vector<int64_t>& ns) const;
  /// Exact law of xi_{N_n} under independence of the index draw.
  FiniteDistribution randomized_marginal_law(int64_t n) const;

 private:
  ProcessModel model_;
  IndexModel im_;
  int64_t horizon_;
  std::vector<std::pair<Path, double>> materialized_;  // empty for step models
  int64_t step_support_ = 0;                           // >0: enumerate step patterns
};

/// Builds the exact finite outcome space. Throws NotEnumerable for models
/// without a finite outcome space at this horizon (partial sums are capped
/// at horizon 25 / 2^25 outcomes).
FiniteProcessSpec exact_finite_spec(const ProcessModel& m, const IndexModel& im, int64_t horizon);

}  // namespace anscombe
