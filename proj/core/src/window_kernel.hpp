#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "anscombe/metric_space.hpp"
#include "anscombe/processes.hpp"

// Shared surrogate machinery: the Monte Carlo estimators and the exact
// enumeration oracle must evaluate the *same* grid functional, so the window
// layout, the per-path exceedance scan, and the max/min compositions live
// here and are used by both sides.

namespace anscombe::detail {

inline int64_t floor_index(double v) { return static_cast<int64_t>(std::floor(v + 1e-9)); }
inline int64_t ceil_index(double v) { return static_cast<int64_t>(std::ceil(v - 1e-9)); }

/// Grid layout for window-exceedance cells, e-major: [e][d][i_n].
struct WindowPlan {
  std::vector<double> eps;     // ascending
  std::vector<double> deltas;  // ascending
  std::vector<int64_t> ns;     // the n-window with stride
  std::vector<std::vector<std::pair<int64_t, int64_t>>> windows;  // [d][i] = (lo, hi)
  int64_t horizon = 0;

  static WindowPlan build(std::vector<double> eps, std::vector<double> deltas,
                          std::vector<int64_t> ns);

  std::size_t cell_count() const { return eps.size() * deltas.size() * ns.size(); }
  std::size_t cell_index(std::size_t e, std::size_t d, std::size_t i) const {
    return (e * deltas.size() + d) * ns.size() + i;
  }
};

/// Sliding min/max over windows whose endpoints never decrease.
class ScalarWindow {
 public:
  void reset(const Path& path) {
    x_ = &path;
    minq_.clear();
    maxq_.clear();
    min_h_ = max_h_ = 0;
    hi_ = 0;
  }

  void advance(int64_t lo, int64_t hi) {
    for (int64_t m = hi_ + 1; m <= hi; ++m) {
      const double v = x_->scalar_at(m);
      while (maxq_.size() > max_h_ && x_->scalar_at(maxq_.back()) <= v) maxq_.pop_back();
      maxq_.push_back(m);
      while (minq_.size() > min_h_ && x_->scalar_at(minq_.back()) >= v) minq_.pop_back();
      minq_.push_back(m);
    }
    hi_ = std::max(hi_, hi);
    while (max_h_ < maxq_.size() && maxq_[max_h_] < lo) ++max_h_;
    while (min_h_ < minq_.size() && minq_[min_h_] < lo) ++min_h_;
  }

  double max_abs_dev(double center) const {
    const double wmin = x_->scalar_at(minq_[min_h_]);
    const double wmax = x_->scalar_at(maxq_[max_h_]);
    return std::max(center - wmin, wmax - center);
  }

 private:
  const Path* x_ = nullptr;
  std::vector<int64_t> minq_, maxq_;
  std::size_t min_h_ = 0, max_h_ = 0;
  int64_t hi_ = 0;
};

/// Symbol counts over a sliding window; max distance queried per center.
class SymbolWindow {
 public:
  void reset(const Path& path, int alphabet) {
    x_ = &path;
    counts_.assign(static_cast<std::size_t>(alphabet), 0);
    lo_ = 1;
    hi_ = 0;
  }

  void advance(int64_t lo, int64_t hi) {
    for (int64_t m = hi_ + 1; m <= hi; ++m) ++counts_[static_cast<std::size_t>(x_->symbol_at(m))];
    for (int64_t m = lo_; m < lo; ++m) --counts_[static_cast<std::size_t>(x_->symbol_at(m))];
    lo_ = lo;
    hi_ = std::max(hi_, hi);
  }

  double max_dist(const Space& space, int32_t center) const {
    double d = 0.0;
    for (std::size_t s = 0; s < counts_.size(); ++s)
      if (counts_[s] > 0)
        d = std::max(d, space.table_distance(center, static_cast<int32_t>(s)));
    return d;
  }

 private:
  const Path* x_ = nullptr;
  std::vector<int64_t> counts_;
  int64_t lo_ = 1, hi_ = 0;
};

/// Adds `weight` to every cell whose exceedance event holds on this path:
/// max over the (delta, n)-window of d(xi_n, xi_m) >= eps.
template <class Count>
void accumulate_exceedance(const Space& space, const Path& path, const WindowPlan& plan,
                           Count weight, std::vector<Count>& cells) {
  const std::size_t E = plan.eps.size(), D = plan.deltas.size(), N = plan.ns.size();
  if (path.is_scalar()) {
    ScalarWindow win;
    for (std::size_t d = 0; d < D; ++d) {
      win.reset(path);
      for (std::size_t i = 0; i < N; ++i) {
        const auto [lo, hi] = plan.windows[d][i];
        win.advance(lo, hi);
        const double dev = win.max_abs_dev(path.scalar_at(plan.ns[i]));
        for (std::size_t e = 0; e < E && plan.eps[e] <= dev; ++e)
          cells[plan.cell_index(e, d, i)] += weight;
      }
    }
    return;
  }
  if (path.is_symbolic()) {
    SymbolWindow win;
    for (std::size_t d = 0; d < D; ++d) {
      win.reset(path, space.alphabet_size());
      for (std::size_t i = 0; i < N; ++i) {
        const auto [lo, hi] = plan.windows[d][i];
        win.advance(lo, hi);
        const double dev = win.max_dist(space, path.symbol_at(plan.ns[i]));
        for (std::size_t e = 0; e < E && plan.eps[e] <= dev; ++e)
          cells[plan.cell_index(e, d, i)] += weight;
      }
    }
    return;
  }
  // generic representation: direct window scan
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t i = 0; i < N; ++i) {
      const auto [lo, hi] = plan.windows[d][i];
      const MetricPoint center = path.at(plan.ns[i]);
      double dev = 0.0;
      for (int64_t m = lo; m <= hi; ++m) dev = std::max(dev, space.distance(center, path.at(m)));
      for (std::size_t e = 0; e < E && plan.eps[e] <= dev; ++e)
        cells[plan.cell_index(e, d, i)] += weight;
    }
  }
}

struct ChiComposition {
  double value = 0.0;
  std::size_t arg_e = 0, arg_d = 0, arg_i = 0;
};

/// max over eps of ( min over delta of ( max over n ) ); ties resolve to the
/// smallest grid value (strict improvement comparisons).
ChiComposition compose_chi(const WindowPlan& plan, const std::vector<double>& probs);

struct MaxComposition {
  double value = 0.0;
  std::size_t arg_a = 0, arg_b = 0;
};

/// max over a (outer) and b (inner) of values[a*B+b], first maximizer wins.
MaxComposition compose_max2(std::size_t A, std::size_t B, const std::vector<double>& values);

}  // namespace anscombe::detail
