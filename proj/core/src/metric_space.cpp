#include "anscombe/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace anscombe {

namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// MetricPoint

MetricPoint MetricPoint::symbol(int32_t id) {
  if (id < 0) throw Error(Errc::ValidationError, "symbol id must be nonnegative");
  MetricPoint p;
  p.symbol_ = id;
  return p;
}

int32_t MetricPoint::symbol_id() const {
  if (!is_discrete()) throw Error(Errc::DomainMismatch, "point is not discrete");
  return symbol_;
}

const std::vector<double>& MetricPoint::coords() const {
  if (is_discrete()) throw Error(Errc::DomainMismatch, "point is not euclidean");
  return coords_;
}

double MetricPoint::scalar() const {
  if (is_discrete() || coords_.size() != 1)
    throw Error(Errc::DomainMismatch, "point is not a 1-d euclidean scalar");
  return coords_[0];
}

bool MetricPoint::operator==(const MetricPoint& o) const noexcept {
  return symbol_ == o.symbol_ && coords_ == o.coords_;
}

bool MetricPoint::operator<(const MetricPoint& o) const noexcept {
  if (symbol_ != o.symbol_) return symbol_ < o.symbol_;
  return coords_ < o.coords_;
}

std::string MetricPoint::label(const Space& space) const {
  if (is_discrete()) return space.symbol_name(symbol_);
  if (coords_.size() == 1) return fmt_double(coords_[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ",";
    s += fmt_double(coords_[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// Space

Space Space::euclidean(int dim) {
  if (dim < 1) throw Error(Errc::ValidationError, "euclidean dimension must be >= 1");
  Space s;
  s.kind_ = SpaceKind::euclidean;
  s.dim_ = dim;
  return s;
}

Space Space::discrete(std::vector<std::string> alphabet,
                      std::vector<std::vector<double>> distance_table) {
  const std::size_t k = alphabet.size();
  if (k == 0) throw Error(Errc::ValidationError, "discrete alphabet must be nonempty");
  if (distance_table.size() != k)
    throw Error(Errc::ValidationError, "distance table size must match alphabet");
  for (const auto& row : distance_table)
    if (row.size() != k)
      throw Error(Errc::ValidationError, "distance table must be square");
  for (std::size_t i = 0; i < k; ++i) {
    if (distance_table[i][i] != 0.0)
      throw Error(Errc::ValidationError, "distance table diagonal must be zero");
    for (std::size_t j = 0; j < k; ++j) {
      if (distance_table[i][j] != distance_table[j][i])
        throw Error(Errc::ValidationError, "distance table must be symmetric");
      if (i != j && !(distance_table[i][j] > 0.0))
        throw Error(Errc::ValidationError, "off-diagonal distances must be positive");
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l)
        if (distance_table[i][j] > distance_table[i][l] + distance_table[l][j] + 1e-12)
          throw Error(Errc::ValidationError, "distance table violates the triangle inequality");

  Space s;
  s.kind_ = SpaceKind::discrete;
  s.dim_ = 0;
  s.alphabet_ = std::move(alphabet);
  s.table_ = std::move(distance_table);
  return s;
}

const std::string& Space::symbol_name(int32_t id) const {
  if (kind_ != SpaceKind::discrete || id < 0 || id >= alphabet_size())
    throw Error(Errc::DomainMismatch, "symbol id outside the alphabet");
  return alphabet_[static_cast<std::size_t>(id)];
}

std::optional<int32_t> Space::symbol_id(const std::string& name) const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == name) return static_cast<int32_t>(i);
  return std::nullopt;
}

bool Space::admits(const MetricPoint& p) const noexcept {
  if (kind_ == SpaceKind::euclidean)
    return !p.is_discrete() && static_cast<int>(p.coords().size()) == dim_;
  return p.is_discrete() && p.symbol_id() < alphabet_size();
}

void Space::require(const MetricPoint& p) const {
  if (!admits(p)) throw Error(Errc::DomainMismatch, "point does not belong to this space");
}

double Space::distance(const MetricPoint& p, const MetricPoint& q) const {
  require(p);
  require(q);
  if (kind_ == SpaceKind::discrete) return table_[p.symbol_id()][q.symbol_id()];
  const auto& a = p.coords();
  const auto& b = q.coords();
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double min_positive_pair_distance(const Space& space, const std::vector<MetricPoint>& pts) {
  double m = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = space.distance(pts[i], pts[j]);
      if (d > 0.0 && d < m) m = d;
    }
  return m;
}

// ---------------------------------------------------------------------------
// TestSet

TestSet TestSet::half_line(HalfLineDir dir, double threshold) {
  TestSet s;
  s.kind_ = Kind::half_line;
  s.dir_ = dir;
  s.threshold_ = threshold;
  return s;
}

TestSet TestSet::interval_union(std::vector<std::pair<double, double>> intervals) {
  for (const auto& [lo, hi] : intervals)
    if (!(lo <= hi)) throw Error(Errc::ValidationError, "interval endpoints must satisfy lo <= hi");
  std::sort(intervals.begin(), intervals.end());
  // merge overlapping or touching closed intervals
  std::vector<std::pair<double, double>> merged;
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, iv.second);
    } else {
      merged.push_back(iv);
    }
  }
  TestSet s;
  s.kind_ = Kind::interval_union;
  s.intervals_ = std::move(merged);
  return s;
}

TestSet TestSet::finite_points(std::vector<MetricPoint> points, double radius) {
  if (radius < 0.0) throw Error(Errc::ValidationError, "radius must be nonnegative");
  TestSet s;
  s.kind_ = Kind::finite_points;
  s.points_ = std::move(points);
  s.radius_ = radius;
  return s;
}

TestSet TestSet::box(std::vector<std::pair<double, double>> bounds) {
  if (bounds.empty()) throw Error(Errc::ValidationError, "box needs at least one dimension");
  for (const auto& [lo, hi] : bounds)
    if (!(lo <= hi)) throw Error(Errc::ValidationError, "box bounds must satisfy lo <= hi");
  TestSet s;
  s.kind_ = Kind::box;
  s.bounds_ = std::move(bounds);
  return s;
}

bool TestSet::empty() const noexcept {
  switch (kind_) {
    case Kind::half_line: return false;
    case Kind::interval_union: return intervals_.empty();
    case Kind::finite_points: return points_.empty();
    case Kind::box: return false;
  }
  return false;
}

namespace {

void require_scalar_space(const Space& space, const char* what) {
  if (!space.is_scalar())
    throw Error(Errc::DomainMismatch, std::string(what) + " requires a 1-d euclidean space");
}

}  // namespace

bool TestSet::contains(const Space& space, const MetricPoint& p) const {
  space.require(p);
  switch (kind_) {
    case Kind::half_line: {
      require_scalar_space(space, "half_line");
      const double x = p.scalar();
      return dir_ == HalfLineDir::le ? x <= threshold_ : x >= threshold_;
    }
    case Kind::interval_union: {
      require_scalar_space(space, "interval_union");
      const double x = p.scalar();
      for (const auto& [lo, hi] : intervals_)
        if (lo <= x && x <= hi) return true;
      return false;
    }
    case Kind::finite_points: {
      for (const auto& q : points_)
        if (space.distance(p, q) <= radius_) return true;
      return false;
    }
    case Kind::box: {
      if (space.kind() != SpaceKind::euclidean ||
          space.dim() != static_cast<int>(bounds_.size()))
        throw Error(Errc::DomainMismatch, "box dimension does not match the space");
      const auto& c = p.coords();
      for (std::size_t i = 0; i < bounds_.size(); ++i)
        if (c[i] < bounds_[i].first || c[i] > bounds_[i].second) return false;
      return true;
    }
  }
  return false;
}

double TestSet::dist_to(const Space& space, const MetricPoint& p) const {
  space.require(p);
  if (empty()) return kInf;  // EmptySet sentinel
  switch (kind_) {
    case Kind::half_line: {
      require_scalar_space(space, "half_line");
      const double x = p.scalar();
      return dir_ == HalfLineDir::le ? std::max(0.0, x - threshold_)
                                     : std::max(0.0, threshold_ - x);
    }
    case Kind::interval_union: {
      require_scalar_space(space, "interval_union");
      const double x = p.scalar();
      double best = kInf;
      for (const auto& [lo, hi] : intervals_) {
        const double d = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
        best = std::min(best, d);
      }
      return best;
    }
    case Kind::finite_points: {
      if (space.kind() == SpaceKind::euclidean) {
        double best = kInf;
        for (const auto& q : points_) best = std::min(best, space.distance(p, q));
        return std::max(0.0, best - radius_);
      }
      // Discrete: the ball union is a finite set; take the exact infimum
      // over alphabet members inside it.
      double best = kInf;
      for (int32_t s = 0; s < space.alphabet_size(); ++s) {
        const MetricPoint y = MetricPoint::symbol(s);
        double to_centers = kInf;
        for (const auto& q : points_) to_centers = std::min(to_centers, space.distance(y, q));
        if (to_centers <= radius_) best = std::min(best, space.distance(p, y));
      }
      return best;
    }
    case Kind::box: {
      if (space.kind() != SpaceKind::euclidean ||
          space.dim() != static_cast<int>(bounds_.size()))
        throw Error(Errc::DomainMismatch, "box dimension does not match the space");
      const auto& c = p.coords();
      double s = 0.0;
      for (std::size_t i = 0; i < bounds_.size(); ++i) {
        const double d = c[i] < bounds_[i].first ? bounds_[i].first - c[i]
                          : (c[i] > bounds_[i].second ? c[i] - bounds_[i].second : 0.0);
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  return kInf;
}

TestSet TestSet::enlarged(double alpha) const {
  if (alpha < 0.0) throw Error(Errc::ValidationError, "enlargement alpha must be nonnegative");
  switch (kind_) {
    case Kind::half_line:
      return half_line(dir_, dir_ == HalfLineDir::le ? threshold_ + alpha : threshold_ - alpha);
    case Kind::interval_union: {
      std::vector<std::pair<double, double>> widened;
      widened.reserve(intervals_.size());
      for (const auto& [lo, hi] : intervals_) widened.emplace_back(lo - alpha, hi + alpha);
      return interval_union(std::move(widened));
    }
    case Kind::finite_points:
      return finite_points(points_, radius_ + alpha);
    case Kind::box: {
      std::vector<std::pair<double, double>> widened;
      widened.reserve(bounds_.size());
      for (const auto& [lo, hi] : bounds_) widened.emplace_back(lo - alpha, hi + alpha);
      return box(std::move(widened));
    }
  }
  throw Error(Errc::ValidationError, "unknown set kind");
}

std::string TestSet::label() const {
  switch (kind_) {
    case Kind::half_line:
      return (dir_ == HalfLineDir::le ? std::string("le:") : std::string("ge:")) +
             fmt_double(threshold_);
    case Kind::interval_union: {
      std::string s = "iv:";
      for (std::size_t i = 0; i < intervals_.size(); ++i) {
        if (i) s += "+";
        s += "[" + fmt_double(intervals_[i].first) + "," + fmt_double(intervals_[i].second) + "]";
      }
      return s;
    }
    case Kind::finite_points: {
      std::string s = "pts:{";
      for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i) s += ",";
        if (points_[i].is_discrete())
          s += "#" + std::to_string(points_[i].symbol_id());
        else if (points_[i].coords().size() == 1)
          s += fmt_double(points_[i].coords()[0]);
        else
          s += "p" + std::to_string(i);
      }
      s += "}r=" + fmt_double(radius_);
      return s;
    }
    case Kind::box: {
      std::string s = "box:";
      for (std::size_t i = 0; i < bounds_.size(); ++i) {
        if (i) s += "x";
        s += "[" + fmt_double(bounds_[i].first) + "," + fmt_double(bounds_[i].second) + "]";
      }
      return s;
    }
  }
  return "?";
}

HalfLineDir TestSet::half_line_dir() const {
  if (kind_ != Kind::half_line) throw Error(Errc::DomainMismatch, "not a half_line");
  return dir_;
}

double TestSet::half_line_threshold() const {
  if (kind_ != Kind::half_line) throw Error(Errc::DomainMismatch, "not a half_line");
  return threshold_;
}

const std::vector<std::pair<double, double>>& TestSet::intervals() const {
  if (kind_ != Kind::interval_union) throw Error(Errc::DomainMismatch, "not an interval_union");
  return intervals_;
}

const std::vector<MetricPoint>& TestSet::points() const {
  if (kind_ != Kind::finite_points) throw Error(Errc::DomainMismatch, "not a finite_points set");
  return points_;
}

double TestSet::radius() const {
  if (kind_ != Kind::finite_points) throw Error(Errc::DomainMismatch, "not a finite_points set");
  return radius_;
}

const std::vector<std::pair<double, double>>& TestSet::box_bounds() const {
  if (kind_ != Kind::box) throw Error(Errc::DomainMismatch, "not a box");
  return bounds_;
}

std::vector<double> TestSet::scalar_breakpoints() const {
  std::vector<double> pts;
  switch (kind_) {
    case Kind::half_line:
      pts.push_back(threshold_);
      break;
    case Kind::interval_union:
      for (const auto& [lo, hi] : intervals_) {
        pts.push_back(lo);
        pts.push_back(hi);
      }
      break;
    case Kind::finite_points:
      for (const auto& p : points_) {
        if (!p.is_discrete() && p.coords().size() == 1) {
          pts.push_back(p.coords()[0] - radius_);
          pts.push_back(p.coords()[0] + radius_);
        }
      }
      break;
    case Kind::box:
      if (bounds_.size() == 1) {
        pts.push_back(bounds_[0].first);
        pts.push_back(bounds_[0].second);
      }
      break;
  }
  return pts;
}

// ---------------------------------------------------------------------------
// HatFunction

HatFunction::HatFunction(TestSet base, double width) : base_(std::move(base)), width_(width) {
  if (!(width > 0.0)) throw Error(Errc::ValidationError, "hat width must be positive");
}

double HatFunction::eval(const Space& space, const MetricPoint& p) const {
  const double d = base_.dist_to(space, p);
  if (d >= width_) return 0.0;
  return 1.0 - d / width_;
}

double HatFunction::eval_scalar(const Space& space, double x) const {
  return eval(space, MetricPoint::real(x));
}

// ---------------------------------------------------------------------------
// SetFamily

SetFamily SetFamily::half_lines(std::vector<double> thresholds, bool le, bool ge) {
  if (thresholds.empty()) throw Error(Errc::ValidationError, "half_lines needs thresholds");
  if (!le && !ge) throw Error(Errc::ValidationError, "half_lines needs at least one direction");
  std::sort(thresholds.begin(), thresholds.end());
  SetFamily f;
  f.kind_ = FamilyKind::half_lines;
  f.thresholds_ = std::move(thresholds);
  f.le_ = le;
  f.ge_ = ge;
  return f;
}

SetFamily SetFamily::interval_unions(std::vector<double> endpoints, int max_components) {
  if (endpoints.size() < 2) throw Error(Errc::ValidationError, "interval_unions needs >= 2 endpoints");
  if (max_components < 1) throw Error(Errc::ValidationError, "max_components must be >= 1");
  std::sort(endpoints.begin(), endpoints.end());
  endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
  SetFamily f;
  f.kind_ = FamilyKind::interval_unions;
  f.endpoints_ = std::move(endpoints);
  f.max_components_ = max_components;
  return f;
}

SetFamily SetFamily::support_subsets(std::vector<MetricPoint> points) {
  if (points.empty()) throw Error(Errc::ValidationError, "support_subsets needs points");
  if (points.size() > 20)
    throw Error(Errc::SupportTooLarge, "support_subsets is capped at 20 points");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j])
        throw Error(Errc::ValidationError, "support_subsets points must be distinct");
  SetFamily f;
  f.kind_ = FamilyKind::support_subsets;
  f.points_ = std::move(points);
  return f;
}

namespace {

// Enumerate index tuples (i1<=j1, i2<=j2, ...) with gaps j_t + 2 <= i_{t+1},
// so the realized closed intervals stay pairwise disjoint.
void enumerate_unions(const std::vector<double>& e, int max_components,
                      std::vector<std::pair<double, double>>& acc, std::size_t start,
                      std::vector<TestSet>& out) {
  for (std::size_t i = start; i < e.size(); ++i) {
    for (std::size_t j = i; j < e.size(); ++j) {
      acc.emplace_back(e[i], e[j]);
      out.push_back(TestSet::interval_union(acc));
      if (static_cast<int>(acc.size()) < max_components && j + 2 < e.size())
        enumerate_unions(e, max_components, acc, j + 2, out);
      acc.pop_back();
    }
  }
}

}  // namespace

std::size_t SetFamily::size() const {
  switch (kind_) {
    case FamilyKind::half_lines:
      return thresholds_.size() * ((le_ ? 1u : 0u) + (ge_ ? 1u : 0u));
    case FamilyKind::interval_unions:
      return materialize().size();
    case FamilyKind::support_subsets:
      return (std::size_t{1} << points_.size()) - 1;
  }
  return 0;
}

std::vector<TestSet> SetFamily::materialize() const {
  std::vector<TestSet> out;
  switch (kind_) {
    case FamilyKind::half_lines: {
      if (le_)
        for (double t : thresholds_) out.push_back(TestSet::half_line(HalfLineDir::le, t));
      if (ge_)
        for (double t : thresholds_) out.push_back(TestSet::half_line(HalfLineDir::ge, t));
      break;
    }
    case FamilyKind::interval_unions: {
      std::vector<std::pair<double, double>> acc;
      enumerate_unions(endpoints_, max_components_, acc, 0, out);
      break;
    }
    case FamilyKind::support_subsets: {
      if (points_.size() > 14)
        throw Error(Errc::SupportTooLarge,
                    "materializing support_subsets beyond 2^14 sets; use the mask route");
      const std::size_t total = std::size_t{1} << points_.size();
      for (std::size_t mask = 1; mask < total; ++mask) {
        std::vector<MetricPoint> sel;
        for (std::size_t b = 0; b < points_.size(); ++b)
          if (mask & (std::size_t{1} << b)) sel.push_back(points_[b]);
        out.push_back(TestSet::finite_points(std::move(sel), 0.0));
      }
      break;
    }
  }
  return out;
}

const std::vector<MetricPoint>& SetFamily::points() const {
  if (kind_ != FamilyKind::support_subsets)
    throw Error(Errc::DomainMismatch, "family has no point list");
  return points_;
}

}  // namespace anscombe
