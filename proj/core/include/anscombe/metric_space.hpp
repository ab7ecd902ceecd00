#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anscombe/error.hpp"

namespace anscombe {

class Space;

/// A point of the state space: either a vector of Euclidean coordinates or
/// a symbol index into a discrete space's alphabet.
class MetricPoint {
 public:
  MetricPoint() = default;

  static MetricPoint real(double x) { return MetricPoint(std::vector<double>{x}); }
  static MetricPoint euclidean(std::vector<double> coords) { return MetricPoint(std::move(coords)); }
  static MetricPoint symbol(int32_t id);

  bool is_discrete() const noexcept { return symbol_ >= 0; }
  int32_t symbol_id() const;
  const std::vector<double>& coords() const;
  /// Coordinate of a 1-d Euclidean point.
  double scalar() const;

  bool operator==(const MetricPoint& o) const noexcept;
  bool operator!=(const MetricPoint& o) const noexcept { return !(*this == o); }
  /// Total order used only for deterministic bookkeeping (atom maps etc).
  bool operator<(const MetricPoint& o) const noexcept;

  std::string label(const Space& space) const;

 private:
  explicit MetricPoint(std::vector<double> coords) : coords_(std::move(coords)), symbol_(-1) {}

  std::vector<double> coords_;
  int32_t symbol_ = -1;
};

enum class SpaceKind { euclidean, discrete };

/// The separable metric space (X, d): R^d with the L2 metric, or a finite
/// symbol alphabet with an explicit distance table. Discrete tables are
/// validated at construction (symmetric, zero diagonal, positive off the
/// diagonal, triangle inequality).
class Space {
 public:
  static Space euclidean(int dim);
  static Space discrete(std::vector<std::string> alphabet,
                        std::vector<std::vector<double>> distance_table);

  SpaceKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  bool is_scalar() const noexcept { return kind_ == SpaceKind::euclidean && dim_ == 1; }
  int alphabet_size() const noexcept { return static_cast<int>(alphabet_.size()); }
  const std::string& symbol_name(int32_t id) const;
  std::optional<int32_t> symbol_id(const std::string& name) const;
  double table_distance(int32_t a, int32_t b) const { return table_[a][b]; }

  bool admits(const MetricPoint& p) const noexcept;
  /// Throws DomainMismatch if the point does not belong to this space.
  void require(const MetricPoint& p) const;

  double distance(const MetricPoint& p, const MetricPoint& q) const;

 private:
  Space() = default;

  SpaceKind kind_ = SpaceKind::euclidean;
  int dim_ = 1;
  std::vector<std::string> alphabet_;
  std::vector<std::vector<double>> table_;
};

/// Smallest nonzero pairwise distance of a point list (used to pick
/// enlargement scales that cannot merge distinct atoms).
double min_positive_pair_distance(const Space& space, const std::vector<MetricPoint>& pts);

enum class HalfLineDir { le, ge };

/// A closed test subset of X. Variants: half-lines and finite unions of
/// closed intervals (1-d Euclidean), axis-aligned boxes (R^d), and finite
/// point sets fattened by a closed radius (any space).
class TestSet {
 public:
  enum class Kind { half_line, interval_union, finite_points, box };

  static TestSet half_line(HalfLineDir dir, double threshold);
  /// Intervals are normalized: sorted and merged so members are disjoint.
  static TestSet interval_union(std::vector<std::pair<double, double>> intervals);
  static TestSet finite_points(std::vector<MetricPoint> points, double radius);
  static TestSet box(std::vector<std::pair<double, double>> bounds);

  Kind kind() const noexcept { return kind_; }
  bool empty() const noexcept;

  /// Closed-set membership; boundary comparisons are exact (<=, >=).
  bool contains(const Space& space, const MetricPoint& p) const;
  /// inf_{s in S} d(p, s); +infinity for the empty set.
  double dist_to(const Space& space, const MetricPoint& p) const;
  /// The closed enlargement {x : d(x, S) <= alpha}; every variant family is
  /// stable under it (boxes in dim >= 2 enlarge per axis, a superset of the
  /// metric enlargement).
  TestSet enlarged(double alpha) const;

  std::string label() const;

  // variant accessors (checked)
  HalfLineDir half_line_dir() const;
  double half_line_threshold() const;
  const std::vector<std::pair<double, double>>& intervals() const;
  const std::vector<MetricPoint>& points() const;
  double radius() const;
  const std::vector<std::pair<double, double>>& box_bounds() const;

  /// 1-d breakpoints of the distance function (interval/halfline/point
  /// boundaries); used by quadrature on Euclidean scalars.
  std::vector<double> scalar_breakpoints() const;

 private:
  TestSet() = default;

  Kind kind_ = Kind::half_line;
  HalfLineDir dir_ = HalfLineDir::le;
  double threshold_ = 0.0;
  std::vector<std::pair<double, double>> intervals_;
  std::vector<MetricPoint> points_;
  double radius_ = 0.0;
  std::vector<std::pair<double, double>> bounds_;
};

/// Open set realized as the complement of a closed TestSet; supports only
/// membership (and hence probability) queries.
struct OpenSetView {
  TestSet closed_complement;

  bool member(const Space& space, const MetricPoint& p) const {
    return !closed_complement.contains(space, p);
  }
};

inline OpenSetView complement_view(const TestSet& s) { return OpenSetView{s}; }

/// Continuous ramp f(x) = max(0, 1 - d(x, base)/width), a [0,1]-valued
/// (1/width)-Lipschitz function equal to 1 on the base set and 0 at
/// distance >= width from it.
class HatFunction {
 public:
  HatFunction(TestSet base, double width);

  double eval(const Space& space, const MetricPoint& p) const;
  /// Fast path for 1-d Euclidean scalars.
  double eval_scalar(const Space& space, double x) const;

  const TestSet& base() const noexcept { return base_; }
  double width() const noexcept { return width_; }

 private:
  TestSet base_;
  double width_;
};

enum class FamilyKind { half_lines, interval_unions, support_subsets };

/// Finite family of closed test sets standing in for "all closed F". Every
/// kind is stable under closed enlargement, which the inequality verifier
/// relies on.
class SetFamily {
 public:
  static SetFamily half_lines(std::vector<double> thresholds, bool le, bool ge);
  static SetFamily interval_unions(std::vector<double> endpoints, int max_components);
  /// All 2^k subsets of a declared point list; k <= 20 enforced.
  static SetFamily support_subsets(std::vector<MetricPoint> points);

  FamilyKind kind() const noexcept { return kind_; }
  std::size_t size() const;

  /// Deterministic enumeration of the member sets. For support_subsets the
  /// mask order is 1..2^k-1; callers needing the mask route should use
  /// points() directly instead of materializing 2^k sets.
  std::vector<TestSet> materialize() const;

  const std::vector<MetricPoint>& points() const;
  const std::vector<double>& thresholds() const { return thresholds_; }
  bool has_le() const noexcept { return le_; }
  bool has_ge() const noexcept { return ge_; }
  const std::vector<double>& endpoints() const { return endpoints_; }
  int max_components() const noexcept { return max_components_; }

 private:
  SetFamily() = default;

  FamilyKind kind_ = FamilyKind::half_lines;
  std::vector<double> thresholds_;
  bool le_ = true, ge_ = true;
  std::vector<double> endpoints_;
  int max_components_ = 1;
  std::vector<MetricPoint> points_;
};

}  // namespace anscombe
