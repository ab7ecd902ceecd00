#include "anscombe/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace anscombe {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Adaptive Simpson on [a,b]; f must be continuous there.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(a < b)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// ---------------------------------------------------------------------------
// FiniteDistribution

FiniteDistribution FiniteDistribution::make(std::vector<MetricPoint> atoms,
                                            std::vector<double> weights) {
  if (atoms.empty()) throw Error(Errc::ValidationError, "finite law needs at least one atom");
  if (atoms.size() != weights.size())
    throw Error(Errc::ValidationError, "atom and weight counts differ");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw Error(Errc::ValidationError, "weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(Errc::ValidationError, "weights must sum to 1");
  for (double& w : weights) w /= sum;
  std::set<MetricPoint> seen;
  for (const auto& a : atoms)
    if (!seen.insert(a).second) throw Error(Errc::ValidationError, "atoms must be distinct");
  FiniteDistribution d;
  d.atoms = std::move(atoms);
  d.weights = std::move(weights);
  return d;
}

double FiniteDistribution::prob_of(const Space& space, const TestSet& s) const {
  double p = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (s.contains(space, atoms[i])) p += weights[i];
  return p;
}

double FiniteDistribution::prob_of(const Space& space, const OpenSetView& g) const {
  double p = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (g.member(space, atoms[i])) p += weights[i];
  return p;
}

double FiniteDistribution::expect_hat(const Space& space, const HatFunction& h) const {
  double e = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) e += weights[i] * h.eval(space, atoms[i]);
  return e;
}

// ---------------------------------------------------------------------------
// Law

Law Law::normal(double mean, double stddev) {
  if (!(stddev > 0.0)) throw Error(Errc::ValidationError, "normal stddev must be positive");
  Law l;
  l.is_normal_ = true;
  l.normal_ = NormalParams{mean, stddev};
  return l;
}

Law Law::point_mass(MetricPoint p) {
  Law l;
  l.finite_ = FiniteDistribution::make({std::move(p)}, {1.0});
  return l;
}

Law Law::uniform_finite(std::vector<MetricPoint> atoms) {
  if (atoms.empty()) throw Error(Errc::ValidationError, "uniform_finite needs atoms");
  std::vector<double> w(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  Law l;
  l.finite_ = FiniteDistribution::make(std::move(atoms), std::move(w));
  return l;
}

Law Law::finite(FiniteDistribution d) {
  Law l;
  l.finite_ = std::move(d);
  return l;
}

const NormalParams& Law::normal_params() const {
  if (!is_normal_) throw Error(Errc::DomainMismatch, "law is not normal");
  return normal_;
}

const FiniteDistribution& Law::finite_dist() const {
  if (is_normal_) throw Error(Errc::DomainMismatch, "law is not finite-support");
  return finite_;
}

namespace {

// A normal law evaluates sets by reducing them to disjoint closed intervals.
std::vector<std::pair<double, double>> as_intervals(const TestSet& s) {
  switch (s.kind()) {
    case TestSet::Kind::interval_union:
      return s.intervals();
    case TestSet::Kind::box:
      if (s.box_bounds().size() == 1) return {s.box_bounds()[0]};
      break;
    case TestSet::Kind::finite_points: {
      std::vector<std::pair<double, double>> ivs;
      for (const auto& p : s.points()) {
        if (p.is_discrete() || p.coords().size() != 1) return {};
        ivs.emplace_back(p.coords()[0] - s.radius(), p.coords()[0] + s.radius());
      }
      // normalize through the TestSet constructor to merge overlaps
      if (ivs.empty()) return {};
      return TestSet::interval_union(std::move(ivs)).intervals();
    }
    default:
      break;
  }
  return {};
}

}  // namespace

double Law::exact_prob(const Space& space, const TestSet& s) const {
  if (is_finite()) return finite_.prob_of(space, s);

  if (!space.is_scalar())
    throw Error(Errc::UnsupportedSetForLaw, "normal law lives on a 1-d euclidean space");
  const double mu = normal_.mean, sg = normal_.stddev;
  switch (s.kind()) {
    case TestSet::Kind::half_line: {
      const double z = (s.half_line_threshold() - mu) / sg;
      return s.half_line_dir() == HalfLineDir::le ? normal_cdf(z) : 1.0 - normal_cdf(z);
    }
    case TestSet::Kind::finite_points:
      if (s.radius() == 0.0) return 0.0;  // finite sets are null under a density
      [[fallthrough]];
    default: {
      const auto ivs = as_intervals(s);
      if (ivs.empty() && !s.empty())
        throw Error(Errc::UnsupportedSetForLaw,
                    "no closed form for this set under a normal law");
      double p = 0.0;
      for (const auto& [lo, hi] : ivs)
        p += normal_cdf((hi - mu) / sg) - normal_cdf((lo - mu) / sg);
      return std::min(1.0, std::max(0.0, p));
    }
  }
}

double Law::exact_prob(const Space& space, const OpenSetView& g) const {
  if (is_finite()) return finite_.prob_of(space, g);
  return 1.0 - exact_prob(space, g.closed_complement);
}

double Law::expect_hat(const Space& space, const HatFunction& h) const {
  if (is_finite()) return finite_.expect_hat(space, h);
  if (!space.is_scalar())
    throw Error(Errc::UnsupportedSetForLaw, "normal law lives on a 1-d euclidean space");
  const double mu = normal_.mean, sg = normal_.stddev;
  const double lo = mu - 10.0 * sg, hi = mu + 10.0 * sg;

  // Split at the ramp kinks so the adaptive rule sees smooth pieces.
  std::vector<double> cuts{lo, hi};
  for (double b : h.base().scalar_breakpoints()) {
    for (double c : {b - h.width(), b, b + h.width()})
      if (c > lo && c < hi) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto f = [&](double x) {
    return h.eval_scalar(space, x) * normal_pdf((x - mu) / sg) / sg;
  };
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    e += integrate(f, cuts[i], cuts[i + 1], 1e-12);
  return e;
}

MetricPoint Law::sample(RngStream& rng) const {
  if (is_normal_) return MetricPoint::real(normal_.mean + normal_.stddev * rng.next_gaussian());
  const double u = rng.next_unit();
  double acc = 0.0;
  for (std::size_t i = 0; i < finite_.atoms.size(); ++i) {
    acc += finite_.weights[i];
    if (u < acc) return finite_.atoms[i];
  }
  return finite_.atoms.back();
}

double Law::sample_scalar(RngStream& rng) const {
  if (is_normal_) return normal_.mean + normal_.stddev * rng.next_gaussian();
  const double u = rng.next_unit();
  double acc = 0.0;
  for (std::size_t i = 0; i < finite_.atoms.size(); ++i) {
    acc += finite_.weights[i];
    if (u < acc) return finite_.atoms[i].scalar();
  }
  return finite_.atoms.back().scalar();
}

bool Law::is_scalar_law() const {
  if (is_normal_) return true;
  for (const auto& a : finite_.atoms)
    if (a.is_discrete() || a.coords().size() != 1) return false;
  return true;
}

std::string Law::label(const Space& space) const {
  if (is_normal_) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "normal(%.12g,%.12g)", normal_.mean, normal_.stddev);
    return buf;
  }
  if (finite_.atoms.size() == 1) return "point_mass(" + finite_.atoms[0].label(space) + ")";
  std::string s = "finite{";
  for (std::size_t i = 0; i < finite_.atoms.size(); ++i) {
    if (i) s += ",";
    s += finite_.atoms[i].label(space);
  }
  return s + "}";
}

}  // namespace anscombe
