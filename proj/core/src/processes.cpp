#include "anscombe/processes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace anscombe {

namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Guard against representation error in products like 0.9*100 before
// truncating to an integer index.
int64_t floor_index(double v) { return static_cast<int64_t>(std::floor(v + 1e-9)); }

}  // namespace

// ---------------------------------------------------------------------------
// KnSpec

KnSpec KnSpec::linear(double c) {
  if (!(c > 0.0)) throw Error(Errc::ValidationError, "kn linear slope must be positive");
  KnSpec k;
  k.is_linear_ = true;
  k.c_ = c;
  return k;
}

KnSpec KnSpec::explicit_list(std::vector<int64_t> values) {
  if (values.empty()) throw Error(Errc::ValidationError, "explicit kn list must be nonempty");
  int64_t prev = 0;
  for (int64_t v : values) {
    if (v < 1) throw Error(Errc::ValidationError, "kn values must be positive");
    if (v < prev) throw Error(Errc::ValidationError, "kn list must be nondecreasing");
    prev = v;
  }
  KnSpec k;
  k.is_linear_ = false;
  k.values_ = std::move(values);
  return k;
}

int64_t KnSpec::at(int64_t n) const {
  if (n < 1) throw Error(Errc::ValidationError, "kn index must be >= 1");
  if (is_linear_) return std::max<int64_t>(1, std::llround(c_ * static_cast<double>(n)));
  if (n > static_cast<int64_t>(values_.size()))
    throw Error(Errc::IndexOutOfHorizon, "explicit kn list shorter than requested n");
  return values_[static_cast<std::size_t>(n - 1)];
}

std::string KnSpec::label() const {
  if (is_linear_) return "linear(c=" + fmt_double(c_) + ")";
  return "explicit[" + std::to_string(values_.size()) + "]";
}

// ---------------------------------------------------------------------------
// Path

Path Path::scalars(std::vector<double> values) {
  Path p;
  p.kind_ = Repr::scalar;
  p.horizon_ = static_cast<int64_t>(values.size());
  p.data_ = std::move(values);
  return p;
}

Path Path::symbols(std::vector<int32_t> values, int alphabet_size) {
  for (int32_t v : values)
    if (v < 0 || v >= alphabet_size)
      throw Error(Errc::DomainMismatch, "path symbol outside the alphabet");
  Path p;
  p.kind_ = Repr::symbol;
  p.horizon_ = static_cast<int64_t>(values.size());
  p.syms_ = std::move(values);
  return p;
}

Path Path::vectors(std::vector<double> flat, int dim) {
  if (dim < 1 || flat.size() % static_cast<std::size_t>(dim) != 0)
    throw Error(Errc::ValidationError, "flat vector path length must be a multiple of dim");
  Path p;
  p.kind_ = Repr::vector;
  p.dim_ = dim;
  p.horizon_ = static_cast<int64_t>(flat.size()) / dim;
  p.data_ = std::move(flat);
  return p;
}

MetricPoint Path::at(int64_t n) const {
  if (n < 1 || n > horizon_) throw Error(Errc::IndexOutOfHorizon, "path index out of range");
  switch (kind_) {
    case Repr::scalar: return MetricPoint::real(data_[n - 1]);
    case Repr::symbol: return MetricPoint::symbol(syms_[n - 1]);
    case Repr::vector: {
      std::vector<double> c(data_.begin() + (n - 1) * dim_, data_.begin() + n * dim_);
      return MetricPoint::euclidean(std::move(c));
    }
  }
  throw Error(Errc::ValidationError, "unknown path representation");
}

// ---------------------------------------------------------------------------
// BlockGrowth / ProcessModel

BlockGrowth BlockGrowth::linear(double c) {
  if (!(c > 0.0)) throw Error(Errc::ValidationError, "block length must be positive");
  return BlockGrowth{Kind::linear, c};
}

BlockGrowth BlockGrowth::exponential(double r) {
  if (!(r > 1.0)) throw Error(Errc::ValidationError, "block growth ratio must exceed 1");
  return BlockGrowth{Kind::exponential, r};
}

ProcessModel ProcessModel::constant(Space space, MetricPoint x) {
  space.require(x);
  ProcessModel m;
  m.kind_ = Kind::constant;
  m.space_ = std::move(space);
  m.a_ = std::move(x);
  return m;
}

ProcessModel ProcessModel::alternating(Space space, MetricPoint a, MetricPoint b) {
  space.require(a);
  space.require(b);
  ProcessModel m;
  m.kind_ = Kind::alternating;
  m.space_ = std::move(space);
  m.a_ = std::move(a);
  m.b_ = std::move(b);
  return m;
}

ProcessModel ProcessModel::partial_sum_normalized(Space space, Law step_law) {
  if (!space.is_scalar())
    throw Error(Errc::ValidationError, "partial sums live on a 1-d euclidean space");
  if (step_law.is_finite()) {
    const auto& d = step_law.finite_dist();
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < d.atoms.size(); ++i) {
      const double x = d.atoms[i].scalar();
      mean += d.weights[i] * x;
      m2 += d.weights[i] * x * x;
    }
    if (std::abs(mean) > 1e-9 || std::abs(m2 - mean * mean - 1.0) > 1e-9)
      throw Error(Errc::ValidationError, "step law must have mean 0 and variance 1");
  } else {
    const auto& np = step_law.normal_params();
    if (std::abs(np.mean) > 1e-9 || std::abs(np.stddev - 1.0) > 1e-9)
      throw Error(Errc::ValidationError, "normal step law must be standard");
  }
  ProcessModel m;
  m.kind_ = Kind::partial_sum_normalized;
  m.space_ = std::move(space);
  m.step_ = std::move(step_law);
  return m;
}

ProcessModel ProcessModel::eventually_constant(Space space, std::vector<Outcome> outcomes) {
  if (outcomes.empty())
    throw Error(Errc::ValidationError, "eventually_constant needs at least one outcome");
  double sum = 0.0;
  for (const auto& o : outcomes) {
    if (!(o.probability > 0.0))
      throw Error(Errc::ValidationError, "outcome probabilities must be positive");
    sum += o.probability;
    space.require(o.limit);
    for (const auto& p : o.prefix) space.require(p);
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(Errc::ValidationError, "outcome probabilities must sum to 1");
  ProcessModel m;
  m.kind_ = Kind::eventually_constant;
  m.space_ = std::move(space);
  m.outcomes_ = std::move(outcomes);
  return m;
}

ProcessModel ProcessModel::block_oscillating(Space space, BlockGrowth growth, MetricPoint a,
                                             MetricPoint b, int phase_count) {
  if (phase_count < 1) throw Error(Errc::ValidationError, "phase_count must be >= 1");
  space.require(a);
  space.require(b);
  ProcessModel m;
  m.kind_ = Kind::block_oscillating;
  m.space_ = std::move(space);
  m.growth_ = growth;
  m.a_ = std::move(a);
  m.b_ = std::move(b);
  m.phase_count_ = phase_count;
  return m;
}

bool ProcessModel::scalar_valued() const { return space_.is_scalar(); }

int64_t ProcessModel::block_index(const BlockGrowth& g, int64_t n, double u) {
  if (g.kind == BlockGrowth::Kind::linear)
    return static_cast<int64_t>(std::floor(static_cast<double>(n - 1) / g.param + u));
  return static_cast<int64_t>(std::floor(std::log(static_cast<double>(n)) / std::log(g.param) + u));
}

std::string ProcessModel::label() const {
  switch (kind_) {
    case Kind::constant: return "constant";
    case Kind::alternating: return "alternating";
    case Kind::partial_sum_normalized: return "partial_sum_normalized";
    case Kind::eventually_constant: return "eventually_constant";
    case Kind::block_oscillating: return "block_oscillating";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// IndexModel

int64_t IndexModel::Halfwidth::at(int64_t n) const {
  return std::max<int64_t>(0, floor_index(base + relative * static_cast<double>(n)));
}

IndexModel IndexModel::deterministic(KnSpec kn) {
  IndexModel im;
  im.kind_ = Kind::deterministic;
  im.kn_ = std::move(kn);
  return im;
}

IndexModel IndexModel::two_point(double q) {
  if (q < 0.0 || q > 1.0) throw Error(Errc::ValidationError, "two_point q must lie in [0,1]");
  IndexModel im;
  im.kind_ = Kind::two_point;
  im.q_ = q;
  return im;
}

IndexModel IndexModel::uniform_window(double beta) {
  if (beta < 0.0) throw Error(Errc::ValidationError, "uniform_window beta must be >= 0");
  IndexModel im;
  im.kind_ = Kind::uniform_window;
  im.beta_ = beta;
  return im;
}

IndexModel IndexModel::linear_noise(double c, Halfwidth hw) {
  if (!(c > 0.0)) throw Error(Errc::ValidationError, "linear_noise slope must be positive");
  if (hw.base < 0.0 || hw.relative < 0.0)
    throw Error(Errc::ValidationError, "noise halfwidth must be nonnegative");
  IndexModel im;
  im.kind_ = Kind::linear_noise;
  im.c_ = c;
  im.hw_ = hw;
  return im;
}

int64_t IndexModel::sample_at(int64_t n, RngStream& rng) const {
  switch (kind_) {
    case Kind::deterministic:
      return kn_.at(n);
    case Kind::two_point:
      return rng.next_unit() < q_ ? 2 * n : n;
    case Kind::uniform_window: {
      const int64_t hi = floor_index((1.0 + beta_) * static_cast<double>(n));
      return n + rng.next_below(hi - n + 1);
    }
    case Kind::linear_noise: {
      const int64_t base = std::max<int64_t>(1, std::llround(c_ * static_cast<double>(n)));
      const int64_t h = hw_.at(n);
      return std::max<int64_t>(1, base - h + rng.next_below(2 * h + 1));
    }
  }
  throw Error(Errc::ValidationError, "unknown index model");
}

int64_t IndexModel::max_index_bound(int64_t n) const {
  switch (kind_) {
    case Kind::deterministic: return kn_.at(n);
    case Kind::two_point: return 2 * n;
    case Kind::uniform_window: return floor_index((1.0 + beta_) * static_cast<double>(n));
    case Kind::linear_noise:
      return std::max<int64_t>(1, std::llround(c_ * static_cast<double>(n))) + hw_.at(n);
  }
  throw Error(Errc::ValidationError, "unknown index model");
}

std::vector<std::pair<int64_t, double>> IndexModel::marginal(int64_t n) const {
  switch (kind_) {
    case Kind::deterministic:
      return {{kn_.at(n), 1.0}};
    case Kind::two_point:
      if (q_ == 0.0) return {{n, 1.0}};
      if (q_ == 1.0) return {{2 * n, 1.0}};
      return {{n, 1.0 - q_}, {2 * n, q_}};
    case Kind::uniform_window: {
      const int64_t hi = floor_index((1.0 + beta_) * static_cast<double>(n));
      const double w = 1.0 / static_cast<double>(hi - n + 1);
      std::vector<std::pair<int64_t, double>> out;
      for (int64_t k = n; k <= hi; ++k) out.emplace_back(k, w);
      return out;
    }
    case Kind::linear_noise: {
      const int64_t base = std::max<int64_t>(1, std::llround(c_ * static_cast<double>(n)));
      const int64_t h = hw_.at(n);
      const double w = 1.0 / static_cast<double>(2 * h + 1);
      std::map<int64_t, double> acc;  // clamping at 1 can merge values
      for (int64_t j = -h; j <= h; ++j) acc[std::max<int64_t>(1, base + j)] += w;
      return {acc.begin(), acc.end()};
    }
  }
  throw Error(Errc::ValidationError, "unknown index model");
}

std::string IndexModel::label() const {
  switch (kind_) {
    case Kind::deterministic: return "deterministic(" + kn_.label() + ")";
    case Kind::two_point: return "two_point(q=" + fmt_double(q_) + ")";
    case Kind::uniform_window: return "uniform_window(beta=" + fmt_double(beta_) + ")";
    case Kind::linear_noise: return "linear_noise(c=" + fmt_double(c_) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

Path deterministic_two_point_path(const ProcessModel& m, int64_t horizon,
                                  const std::function<bool(int64_t)>& takes_a) {
  const Space& sp = m.space();
  if (sp.is_scalar()) {
    std::vector<double> v(static_cast<std::size_t>(horizon));
    const double a = m.point_a().scalar(), b = m.point_b().scalar();
    for (int64_t n = 1; n <= horizon; ++n) v[n - 1] = takes_a(n) ? a : b;
    return Path::scalars(std::move(v));
  }
  if (sp.kind() == SpaceKind::discrete) {
    std::vector<int32_t> v(static_cast<std::size_t>(horizon));
    const int32_t a = m.point_a().symbol_id(), b = m.point_b().symbol_id();
    for (int64_t n = 1; n <= horizon; ++n) v[n - 1] = takes_a(n) ? a : b;
    return Path::symbols(std::move(v), sp.alphabet_size());
  }
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(horizon) * sp.dim());
  for (int64_t n = 1; n <= horizon; ++n) {
    const auto& c = (takes_a(n) ? m.point_a() : m.point_b()).coords();
    flat.insert(flat.end(), c.begin(), c.end());
  }
  return Path::vectors(std::move(flat), sp.dim());
}

Path outcome_path(const ProcessModel& m, const ProcessModel::Outcome& o, int64_t horizon) {
  const Space& sp = m.space();
  const int64_t plen = static_cast<int64_t>(o.prefix.size());
  if (sp.is_scalar()) {
    std::vector<double> v(static_cast<std::size_t>(horizon));
    for (int64_t n = 1; n <= horizon; ++n)
      v[n - 1] = (n <= plen ? o.prefix[n - 1] : o.limit).scalar();
    return Path::scalars(std::move(v));
  }
  if (sp.kind() == SpaceKind::discrete) {
    std::vector<int32_t> v(static_cast<std::size_t>(horizon));
    for (int64_t n = 1; n <= horizon; ++n)
      v[n - 1] = (n <= plen ? o.prefix[n - 1] : o.limit).symbol_id();
    return Path::symbols(std::move(v), sp.alphabet_size());
  }
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(horizon) * sp.dim());
  for (int64_t n = 1; n <= horizon; ++n) {
    const auto& c = (n <= plen ? o.prefix[n - 1] : o.limit).coords();
    flat.insert(flat.end(), c.begin(), c.end());
  }
  return Path::vectors(std::move(flat), sp.dim());
}

}  // namespace

namespace {

Path constant_path(const ProcessModel& m, int64_t horizon) {
  const Space& sp = m.space();
  if (sp.is_scalar())
    return Path::scalars(std::vector<double>(static_cast<std::size_t>(horizon),
                                             m.point_a().scalar()));
  if (sp.kind() == SpaceKind::discrete)
    return Path::symbols(std::vector<int32_t>(static_cast<std::size_t>(horizon),
                                              m.point_a().symbol_id()),
                         sp.alphabet_size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(horizon) * sp.dim());
  for (int64_t n = 1; n <= horizon; ++n) {
    const auto& c = m.point_a().coords();
    flat.insert(flat.end(), c.begin(), c.end());
  }
  return Path::vectors(std::move(flat), sp.dim());
}

}  // namespace

Path sample_path(const ProcessModel& m, RngStream& rng, int64_t horizon) {
  if (horizon < 1) throw Error(Errc::ValidationError, "horizon must be >= 1");
  switch (m.kind()) {
    case ProcessModel::Kind::constant:
      return constant_path(m, horizon);
    case ProcessModel::Kind::alternating:
      return deterministic_two_point_path(m, horizon, [](int64_t n) { return n % 2 == 0; });
    case ProcessModel::Kind::partial_sum_normalized: {
      std::vector<double> v(static_cast<std::size_t>(horizon));
      double running = 0.0;
      for (int64_t n = 1; n <= horizon; ++n) {
        running += m.step_law().sample_scalar(rng);
        v[n - 1] = running / std::sqrt(static_cast<double>(n));
      }
      return Path::scalars(std::move(v));
    }
    case ProcessModel::Kind::eventually_constant: {
      const double u = rng.next_unit();
      double acc = 0.0;
      std::size_t pick = m.outcomes().size() - 1;
      for (std::size_t i = 0; i < m.outcomes().size(); ++i) {
        acc += m.outcomes()[i].probability;
        if (u < acc) {
          pick = i;
          break;
        }
      }
      return outcome_path(m, m.outcomes()[pick], horizon);
    }
    case ProcessModel::Kind::block_oscillating: {
      const double u =
          static_cast<double>(rng.next_below(m.phase_count())) / m.phase_count();
      return deterministic_two_point_path(m, horizon, [&](int64_t n) {
        return ProcessModel::block_index(m.growth(), n, u) % 2 == 0;
      });
    }
  }
  throw Error(Errc::ValidationError, "unknown process model");
}

std::vector<int64_t> sample_indices(const IndexModel& im, RngStream& rng,
                                    const std::vector<int64_t>& n_list) {
  std::vector<int64_t> out;
  out.reserve(n_list.size());
  for (int64_t n : n_list) out.push_back(im.sample_at(n, rng));
  return out;
}

int64_t max_index_bound(const IndexModel& im, int64_t n) { return im.max_index_bound(n); }

Path compose_randomized(const Path& path, const std::vector<int64_t>& indices) {
  for (int64_t idx : indices)
    if (idx < 1 || idx > path.horizon())
      throw Error(Errc::IndexOutOfHorizon, "randomized index exceeds the path horizon");
  Path out;
  out.kind_ = path.kind_;
  out.dim_ = path.dim_;
  out.horizon_ = static_cast<int64_t>(indices.size());
  if (path.kind_ == Path::Repr::symbol) {
    out.syms_.reserve(indices.size());
    for (int64_t idx : indices) out.syms_.push_back(path.syms_[idx - 1]);
  } else if (path.kind_ == Path::Repr::scalar) {
    out.data_.reserve(indices.size());
    for (int64_t idx : indices) out.data_.push_back(path.data_[idx - 1]);
  } else {
    out.data_.reserve(indices.size() * path.dim_);
    for (int64_t idx : indices)
      out.data_.insert(out.data_.end(), path.data_.begin() + (idx - 1) * path.dim_,
                       path.data_.begin() + idx * path.dim_);
  }
  return out;
}

// ---------------------------------------------------------------------------
// FiniteProcessSpec

FiniteProcessSpec::FiniteProcessSpec(ProcessModel model, IndexModel im, int64_t horizon)
    : model_(std::move(model)), im_(std::move(im)), horizon_(horizon) {
  if (horizon < 1) throw Error(Errc::ValidationError, "horizon must be >= 1");
  switch (model_.kind()) {
    case ProcessModel::Kind::constant:
    case ProcessModel::Kind::alternating: {
      RngStream dummy(0, 0);
      materialized_.emplace_back(sample_path(model_, dummy, horizon), 1.0);
      break;
    }
    case ProcessModel::Kind::eventually_constant: {
      for (const auto& o : model_.outcomes())
        materialized_.emplace_back(outcome_path(model_, o, horizon), o.probability);
      break;
    }
    case ProcessModel::Kind::block_oscillating: {
      const int P = model_.phase_count();
      for (int k = 0; k < P; ++k) {
        const double u = static_cast<double>(k) / P;
        materialized_.emplace_back(
            deterministic_two_point_path(model_, horizon, [&](int64_t n) {
              return ProcessModel::block_index(model_.growth(), n, u) % 2 == 0;
            }),
            1.0 / P);
      }
      break;
    }
    case ProcessModel::Kind::partial_sum_normalized: {
      if (!model_.step_law().is_finite())
        throw Error(Errc::NotEnumerable, "normal-step partial sums have no finite outcome space");
      const int64_t s = static_cast<int64_t>(model_.step_law().finite_dist().atoms.size());
      if (horizon > 25)
        throw Error(Errc::NotEnumerable, "partial sums are enumerable only up to horizon 25");
      double count = 1.0;
      for (int64_t i = 0; i < horizon; ++i) {
        count *= static_cast<double>(s);
        if (count > 33554432.0)  // 2^25
          throw Error(Errc::NotEnumerable, "partial-sum outcome space exceeds 2^25");
      }
      step_support_ = s;
      break;
    }
  }
}

std::size_t FiniteProcessSpec::outcome_count() const {
  if (step_support_ > 0) {
    std::size_t c = 1;
    for (int64_t i = 0; i < horizon_; ++i) c *= static_cast<std::size_t>(step_support_);
    return c;
  }
  return materialized_.size();
}

void FiniteProcessSpec::for_each_outcome(
    const std::function<void(const Path&, double)>& visit) const {
  if (step_support_ == 0) {
    for (const auto& [path, prob] : materialized_) visit(path, prob);
    return;
  }
  const auto& d = model_.step_law().finite_dist();
  const int64_t s = step_support_;
  std::vector<double> steps(static_cast<std::size_t>(s));
  for (int64_t i = 0; i < s; ++i) steps[static_cast<std::size_t>(i)] = d.atoms[i].scalar();

  std::vector<int64_t> odom(static_cast<std::size_t>(horizon_), 0);
  std::vector<double> values(static_cast<std::size_t>(horizon_));
  for (;;) {
    double running = 0.0, prob = 1.0;
    for (int64_t n = 1; n <= horizon_; ++n) {
      const int64_t pick = odom[static_cast<std::size_t>(n - 1)];
      running += steps[static_cast<std::size_t>(pick)];
      prob *= d.weights[static_cast<std::size_t>(pick)];
      values[static_cast<std::size_t>(n - 1)] = running / std::sqrt(static_cast<double>(n));
    }
    visit(Path::scalars(values), prob);
    // advance odometer
    int64_t pos = horizon_ - 1;
    while (pos >= 0 && ++odom[static_cast<std::size_t>(pos)] == s) {
      odom[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

std::vector<std::pair<int64_t, double>> FiniteProcessSpec::index_marginal(int64_t n) const {
  return im_.marginal(n);
}

namespace {

FiniteDistribution from_accumulator(const std::map<MetricPoint, double>& acc) {
  std::vector<MetricPoint> atoms;
  std::vector<double> weights;
  for (const auto& [pt, w] : acc) {
    atoms.push_back(pt);
    weights.push_back(w);
  }
  return FiniteDistribution::make(std::move(atoms), std::move(weights));
}

}  // namespace

std::map<int64_t, FiniteDistribution> FiniteProcessSpec::marginal_laws(
    const std::vector<int64_t>& ns) const {
  std::vector<int64_t> wanted = ns;
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  for (int64_t n : wanted)
    if (n < 1 || n > horizon_)
      throw Error(Errc::HorizonExceeded, "marginal index beyond horizon");
  std::vector<std::map<MetricPoint, double>> acc(wanted.size());
  for_each_outcome([&](const Path& p, double prob) {
    for (std::size_t i = 0; i < wanted.size(); ++i) acc[i][p.at(wanted[i])] += prob;
  });
  std::map<int64_t, FiniteDistribution> out;
  for (std::size_t i = 0; i < wanted.size(); ++i)
    out.emplace(wanted[i], from_accumulator(acc[i]));
  return out;
}

FiniteDistribution FiniteProcessSpec::marginal_law(int64_t n) const {
  return marginal_laws({n}).at(n);
}

FiniteDistribution FiniteProcessSpec::randomized_marginal_law(int64_t n) const {
  const auto idx = index_marginal(n);
  std::vector<int64_t> ks;
  for (const auto& [k, q] : idx) {
    if (k > horizon_) throw Error(Errc::HorizonExceeded, "index marginal exceeds horizon");
    ks.push_back(k);
  }
  const auto laws = marginal_laws(ks);
  std::map<MetricPoint, double> acc;
  for (const auto& [k, q] : idx) {
    const FiniteDistribution& law = laws.at(k);
    for (std::size_t i = 0; i < law.atoms.size(); ++i) acc[law.atoms[i]] += q * law.weights[i];
  }
  return from_accumulator(acc);
}

FiniteProcessSpec exact_finite_spec(const ProcessModel& m, const IndexModel& im,
                                    int64_t horizon) {
  return FiniteProcessSpec(m, im, horizon);
}

}  // namespace anscombe
