#include "anscombe/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "anscombe/report.hpp"

namespace anscombe {

using nlohmann::json;

ConfigError::ConfigError(Errc code, std::vector<std::string> violations)
    : Error(code, violations.empty() ? "invalid config"
                                     : violations.front() +
                                           (violations.size() > 1
                                                ? " (+" + std::to_string(violations.size() - 1) +
                                                      " more)"
                                                : "")),
      violations_(std::move(violations)) {}

namespace {

struct Ctx {
  std::vector<std::string> errs;
  void add(const std::string& path, const std::string& msg) { errs.push_back(path + ": " + msg); }
};

void check_keys(Ctx& ctx, const std::string& path, const json& j,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) {
    ctx.add(path, "expected an object");
    return;
  }
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) ctx.add(path, "unknown field \"" + key + "\"");
}

const json* get_req(Ctx& ctx, const std::string& path, const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    ctx.add(path, std::string("missing required field \"") + key + "\"");
    return nullptr;
  }
  return &j.at(key);
}

bool as_double(Ctx& ctx, const std::string& path, const json& j, double& out) {
  if (!j.is_number()) {
    ctx.add(path, "expected a number");
    return false;
  }
  out = j.get<double>();
  return true;
}

bool as_int(Ctx& ctx, const std::string& path, const json& j, int64_t& out) {
  if (!j.is_number_integer()) {
    ctx.add(path, "expected an integer");
    return false;
  }
  out = j.get<int64_t>();
  return true;
}

bool as_u64(Ctx& ctx, const std::string& path, const json& j, uint64_t& out) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<int64_t>() >= 0)) {
    ctx.add(path, "expected a nonnegative integer");
    return false;
  }
  out = j.get<uint64_t>();
  return true;
}

bool as_string(Ctx& ctx, const std::string& path, const json& j, std::string& out) {
  if (!j.is_string()) {
    ctx.add(path, "expected a string");
    return false;
  }
  out = j.get<std::string>();
  return true;
}

std::vector<double> parse_double_array(Ctx& ctx, const std::string& path, const json& j) {
  std::vector<double> out;
  if (!j.is_array() || j.empty()) {
    ctx.add(path, "expected a nonempty array of numbers");
    return out;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    double v;
    if (as_double(ctx, path + "[" + std::to_string(i) + "]", j[i], v)) out.push_back(v);
  }
  return out;
}

std::optional<MetricPoint> parse_point(Ctx& ctx, const std::string& path, const json& j,
                                       const Space& space) {
  if (space.kind() == SpaceKind::discrete) {
    std::string name;
    if (!as_string(ctx, path, j, name)) return std::nullopt;
    const auto id = space.symbol_id(name);
    if (!id) {
      ctx.add(path, "symbol \"" + name + "\" is not in the alphabet");
      return std::nullopt;
    }
    return MetricPoint::symbol(*id);
  }
  if (space.dim() == 1) {
    double v;
    if (!as_double(ctx, path, j, v)) return std::nullopt;
    return MetricPoint::real(v);
  }
  if (!j.is_array() || static_cast<int>(j.size()) != space.dim()) {
    ctx.add(path, "expected an array of " + std::to_string(space.dim()) + " coordinates");
    return std::nullopt;
  }
  std::vector<double> coords;
  for (std::size_t i = 0; i < j.size(); ++i) {
    double v;
    if (!as_double(ctx, path + "[" + std::to_string(i) + "]", j[i], v)) return std::nullopt;
    coords.push_back(v);
  }
  return MetricPoint::euclidean(std::move(coords));
}

std::optional<Space> parse_space(Ctx& ctx, const json& j) {
  const std::string path = "space";
  check_keys(ctx, path, j, {"kind", "dim", "alphabet", "distance_table"});
  std::string kind;
  const json* k = get_req(ctx, path, j, "kind");
  if (!k || !as_string(ctx, path + ".kind", *k, kind)) return std::nullopt;
  try {
    if (kind == "euclidean") {
      int64_t dim = 1;
      if (j.contains("dim") && !as_int(ctx, path + ".dim", j.at("dim"), dim)) return std::nullopt;
      return Space::euclidean(static_cast<int>(dim));
    }
    if (kind == "discrete") {
      const json* alph = get_req(ctx, path, j, "alphabet");
      const json* table = get_req(ctx, path, j, "distance_table");
      if (!alph || !table) return std::nullopt;
      std::vector<std::string> names;
      if (!alph->is_array()) {
        ctx.add(path + ".alphabet", "expected an array of strings");
        return std::nullopt;
      }
      for (const auto& s : *alph) {
        std::string n;
        if (!as_string(ctx, path + ".alphabet", s, n)) return std::nullopt;
        names.push_back(n);
      }
      std::vector<std::vector<double>> rows;
      if (!table->is_array()) {
        ctx.add(path + ".distance_table", "expected an array of rows");
        return std::nullopt;
      }
      for (std::size_t i = 0; i < table->size(); ++i)
        rows.push_back(parse_double_array(ctx, path + ".distance_table[" + std::to_string(i) + "]",
                                          (*table)[i]));
      return Space::discrete(std::move(names), std::move(rows));
    }
    ctx.add(path + ".kind", "unknown space kind \"" + kind + "\"");
  } catch (const Error& e) {
    ctx.add(path, e.what());
  }
  return std::nullopt;
}

std::optional<Law> parse_law(Ctx& ctx, const std::string& path, const json& j,
                             const Space& space) {
  check_keys(ctx, path, j, {"kind", "mean", "stddev", "point", "atoms", "weights"});
  std::string kind;
  const json* k = get_req(ctx, path, j, "kind");
  if (!k || !as_string(ctx, path + ".kind", *k, kind)) return std::nullopt;
  try {
    if (kind == "normal") {
      double mean = 0.0, stddev = 1.0;
      if (j.contains("mean") && !as_double(ctx, path + ".mean", j.at("mean"), mean))
        return std::nullopt;
      if (j.contains("stddev") && !as_double(ctx, path + ".stddev", j.at("stddev"), stddev))
        return std::nullopt;
      if (!space.is_scalar()) {
        ctx.add(path, "normal law requires a 1-d euclidean space");
        return std::nullopt;
      }
      return Law::normal(mean, stddev);
    }
    if (kind == "rademacher") {
      if (!space.is_scalar()) {
        ctx.add(path, "rademacher law requires a 1-d euclidean space");
        return std::nullopt;
      }
      return Law::uniform_finite({MetricPoint::real(-1.0), MetricPoint::real(1.0)});
    }
    if (kind == "point_mass") {
      const json* p = get_req(ctx, path, j, "point");
      if (!p) return std::nullopt;
      auto pt = parse_point(ctx, path + ".point", *p, space);
      if (!pt) return std::nullopt;
      return Law::point_mass(std::move(*pt));
    }
    if (kind == "uniform_finite" || kind == "finite") {
      const json* a = get_req(ctx, path, j, "atoms");
      if (!a || !a->is_array() || a->empty()) {
        ctx.add(path + ".atoms", "expected a nonempty array");
        return std::nullopt;
      }
      std::vector<MetricPoint> atoms;
      for (std::size_t i = 0; i < a->size(); ++i) {
        auto pt = parse_point(ctx, path + ".atoms[" + std::to_string(i) + "]", (*a)[i], space);
        if (!pt) return std::nullopt;
        atoms.push_back(std::move(*pt));
      }
      if (kind == "uniform_finite") return Law::uniform_finite(std::move(atoms));
      const json* w = get_req(ctx, path, j, "weights");
      if (!w) return std::nullopt;
      auto weights = parse_double_array(ctx, path + ".weights", *w);
      return Law::finite(FiniteDistribution::make(std::move(atoms), std::move(weights)));
    }
    ctx.add(path + ".kind", "unknown law kind \"" + kind + "\"");
  } catch (const Error& e) {
    ctx.add(path, e.what());
  }
  return std::nullopt;
}

std::optional<ProcessModel> parse_process(Ctx& ctx, const json& j, const Space& space) {
  const std::string path = "process";
  check_keys(ctx, path, j,
             {"kind", "point", "a", "b", "step_law", "outcomes", "block_growth", "phase_count"});
  std::string kind;
  const json* k = get_req(ctx, path, j, "kind");
  if (!k || !as_string(ctx, path + ".kind", *k, kind)) return std::nullopt;
  try {
    if (kind == "constant") {
      const json* p = get_req(ctx, path, j, "point");
      if (!p) return std::nullopt;
      auto pt = parse_point(ctx, path + ".point", *p, space);
      if (!pt) return std::nullopt;
      return ProcessModel::constant(space, std::move(*pt));
    }
    if (kind == "alternating" || kind == "block_oscillating") {
      const json* ja = get_req(ctx, path, j, "a");
      const json* jb = get_req(ctx, path, j, "b");
      if (!ja || !jb) return std::nullopt;
      auto a = parse_point(ctx, path + ".a", *ja, space);
      auto b = parse_point(ctx, path + ".b", *jb, space);
      if (!a || !b) return std::nullopt;
      if (kind == "alternating") return ProcessModel::alternating(space, std::move(*a), std::move(*b));
      const json* g = get_req(ctx, path, j, "block_growth");
      if (!g) return std::nullopt;
      check_keys(ctx, path + ".block_growth", *g, {"kind", "c", "r"});
      std::string gk;
      const json* gkj = get_req(ctx, path + ".block_growth", *g, "kind");
      if (!gkj || !as_string(ctx, path + ".block_growth.kind", *gkj, gk)) return std::nullopt;
      BlockGrowth growth{};
      if (gk == "linear") {
        const json* c = get_req(ctx, path + ".block_growth", *g, "c");
        double cv;
        if (!c || !as_double(ctx, path + ".block_growth.c", *c, cv)) return std::nullopt;
        growth = BlockGrowth::linear(cv);
      } else if (gk == "exponential") {
        const json* r = get_req(ctx, path + ".block_growth", *g, "r");
        double rv;
        if (!r || !as_double(ctx, path + ".block_growth.r", *r, rv)) return std::nullopt;
        growth = BlockGrowth::exponential(rv);
      } else {
        ctx.add(path + ".block_growth.kind", "unknown growth kind \"" + gk + "\"");
        return std::nullopt;
      }
      int64_t phases = 1;
      if (j.contains("phase_count") &&
          !as_int(ctx, path + ".phase_count", j.at("phase_count"), phases))
        return std::nullopt;
      return ProcessModel::block_oscillating(space, growth, std::move(*a), std::move(*b),
                                             static_cast<int>(phases));
    }
    if (kind == "partial_sum_normalized") {
      const json* s = get_req(ctx, path, j, "step_law");
      if (!s) return std::nullopt;
      auto law = parse_law(ctx, path + ".step_law", *s, space);
      if (!law) return std::nullopt;
      return ProcessModel::partial_sum_normalized(space, std::move(*law));
    }
    if (kind == "eventually_constant") {
      const json* o = get_req(ctx, path, j, "outcomes");
      if (!o || !o->is_array() || o->empty()) {
        ctx.add(path + ".outcomes", "expected a nonempty array");
        return std::nullopt;
      }
      std::vector<ProcessModel::Outcome> outcomes;
      for (std::size_t i = 0; i < o->size(); ++i) {
        const std::string opath = path + ".outcomes[" + std::to_string(i) + "]";
        const json& oj = (*o)[i];
        check_keys(ctx, opath, oj, {"prefix", "limit", "probability"});
        ProcessModel::Outcome out;
        const json* pr = get_req(ctx, opath, oj, "probability");
        if (!pr || !as_double(ctx, opath + ".probability", *pr, out.probability))
          return std::nullopt;
        const json* lim = get_req(ctx, opath, oj, "limit");
        if (!lim) return std::nullopt;
        auto lp = parse_point(ctx, opath + ".limit", *lim, space);
        if (!lp) return std::nullopt;
        out.limit = std::move(*lp);
        if (oj.contains("prefix")) {
          if (!oj.at("prefix").is_array()) {
            ctx.add(opath + ".prefix", "expected an array of points");
            return std::nullopt;
          }
          for (std::size_t p = 0; p < oj.at("prefix").size(); ++p) {
            auto pp = parse_point(ctx, opath + ".prefix[" + std::to_string(p) + "]",
                                  oj.at("prefix")[p], space);
            if (!pp) return std::nullopt;
            out.prefix.push_back(std::move(*pp));
          }
        }
        outcomes.push_back(std::move(out));
      }
      return ProcessModel::eventually_constant(space, std::move(outcomes));
    }
    ctx.add(path + ".kind", "unknown process kind \"" + kind + "\"");
  } catch (const Error& e) {
    ctx.add(path, e.what());
  }
  return std::nullopt;
}

std::optional<KnSpec> parse_kn(Ctx& ctx, const std::string& path, const json& j) {
  check_keys(ctx, path, j, {"kind", "c", "values"});
  std::string kind;
  const json* k = get_req(ctx, path, j, "kind");
  if (!k || !as_string(ctx, path + ".kind", *k, kind)) return std::nullopt;
  try {
    if (kind == "linear") {
      const json* c = get_req(ctx, path, j, "c");
      double cv;
      if (!c || !as_double(ctx, path + ".c", *c, cv)) return std::nullopt;
      return KnSpec::linear(cv);
    }
    if (kind == "explicit") {
      const json* v = get_req(ctx, path, j, "values");
      if (!v || !v->is_array() || v->empty()) {
        ctx.add(path + ".values", "expected a nonempty integer array");
        return std::nullopt;
      }
      std::vector<int64_t> values;
      for (std::size_t i = 0; i < v->size(); ++i) {
        int64_t x;
        if (!as_int(ctx, path + ".values[" + std::to_string(i) + "]", (*v)[i], x))
          return std::nullopt;
        values.push_back(x);
      }
      return KnSpec::explicit_list(std::move(values));
    }
    ctx.add(path + ".kind", "unknown kn kind \"" + kind + "\"");
  } catch (const Error& e) {
    ctx.add(path, e.what());
  }
  return std::nullopt;
}

std::optional<IndexModel> parse_index_model(Ctx& ctx, const json& j) {
  const std::string path = "index_model";
  check_keys(ctx, path, j, {"kind", "kn", "q", "beta", "c", "halfwidth"});
  std::string kind;
  const json* k = get_req(ctx, path, j, "kind");
  if (!k || !as_string(ctx, path + ".kind", *k, kind)) return std::nullopt;
  try {
    if (kind == "deterministic") {
      const json* kn = get_req(ctx, path, j, "kn");
      if (!kn) return std::nullopt;
      auto spec = parse_kn(ctx, path + ".kn", *kn);
      if (!spec) return std::nullopt;
      return IndexModel::deterministic(std::move(*spec));
    }
    if (kind == "two_point") {
      const json* q = get_req(ctx, path, j, "q");
      double qv;
      if (!q || !as_double(ctx, path + ".q", *q, qv)) return std::nullopt;
      return IndexModel::two_point(qv);
    }
    if (kind == "uniform_window") {
      const json* b = get_req(ctx, path, j, "beta");
      double bv;
      if (!b || !as_double(ctx, path + ".beta", *b, bv)) return std::nullopt;
      return IndexModel::uniform_window(bv);
    }
    if (kind == "linear_noise") {
      const json* c = get_req(ctx, path, j, "c");
      double cv;
      if (!c || !as_double(ctx, path + ".c", *c, cv)) return std::nullopt;
      const json* hw = get_req(ctx, path, j, "halfwidth");
      if (!hw) return std::nullopt;
      check_keys(ctx, path + ".halfwidth", *hw, {"kind", "value", "w"});
      std::string hk;
      const json* hkj = get_req(ctx, path + ".halfwidth", *hw, "kind");
      if (!hkj || !as_string(ctx, path + ".halfwidth.kind", *hkj, hk)) return std::nullopt;
      IndexModel::Halfwidth halfwidth{};
      if (hk == "constant") {
        const json* v = get_req(ctx, path + ".halfwidth", *hw, "value");
        if (!v || !as_double(ctx, path + ".halfwidth.value", *v, halfwidth.base))
          return std::nullopt;
      } else if (hk == "relative") {
        const json* v = get_req(ctx, path + ".halfwidth", *hw, "w");
        if (!v || !as_double(ctx, path + ".halfwidth.w", *v, halfwidth.relative))
          return std::nullopt;
      } else {
        ctx.add(path + ".halfwidth.kind", "unknown halfwidth kind \"" + hk + "\"");
        return std::nullopt;
      }
      return IndexModel::linear_noise(cv, halfwidth);
    }
    ctx.add(path + ".kind", "unknown index model kind \"" + kind + "\"");
  } catch (const Error& e) {
    ctx.add(path, e.what());
  }
  return std::nullopt;
}

std::optional<SetFamily> parse_family(Ctx& ctx, const json& j, const Space& space) {
  const std::string path = "set_family";
  check_keys(ctx, path, j,
             {"kind", "thresholds", "directions", "endpoints", "max_components", "points"});
  std::string kind;
  const json* k = get_req(ctx, path, j, "kind");
  if (!k || !as_string(ctx, path + ".kind", *k, kind)) return std::nullopt;
  try {
    if (kind == "half_lines") {
      if (!space.is_scalar()) {
        ctx.add(path, "half_lines require a 1-d euclidean space");
        return std::nullopt;
      }
      const json* t = get_req(ctx, path, j, "thresholds");
      if (!t) return std::nullopt;
      auto thresholds = parse_double_array(ctx, path + ".thresholds", *t);
      std::string dirs = "both";
      if (j.contains("directions") &&
          !as_string(ctx, path + ".directions", j.at("directions"), dirs))
        return std::nullopt;
      if (dirs != "le" && dirs != "ge" && dirs != "both") {
        ctx.add(path + ".directions", "expected \"le\", \"ge\" or \"both\"");
        return std::nullopt;
      }
      return SetFamily::half_lines(std::move(thresholds), dirs != "ge", dirs != "le");
    }
    if (kind == "interval_unions") {
      if (!space.is_scalar()) {
        ctx.add(path, "interval_unions require a 1-d euclidean space");
        return std::nullopt;
      }
      const json* e = get_req(ctx, path, j, "endpoints");
      if (!e) return std::nullopt;
      auto endpoints = parse_double_array(ctx, path + ".endpoints", *e);
      int64_t maxc = 1;
      if (j.contains("max_components") &&
          !as_int(ctx, path + ".max_components", j.at("max_components"), maxc))
        return std::nullopt;
      return SetFamily::interval_unions(std::move(endpoints), static_cast<int>(maxc));
    }
    if (kind == "support_subsets") {
      const json* p = get_req(ctx, path, j, "points");
      if (!p || !p->is_array() || p->empty()) {
        ctx.add(path + ".points", "expected a nonempty array of points");
        return std::nullopt;
      }
      std::vector<MetricPoint> points;
      for (std::size_t i = 0; i < p->size(); ++i) {
        auto pt = parse_point(ctx, path + ".points[" + std::to_string(i) + "]", (*p)[i], space);
        if (!pt) return std::nullopt;
        points.push_back(std::move(*pt));
      }
      return SetFamily::support_subsets(std::move(points));
    }
    ctx.add(path + ".kind", "unknown family kind \"" + kind + "\"");
  } catch (const Error& e) {
    ctx.add(path, e.what());
  }
  return std::nullopt;
}

std::vector<KnSpec> parse_kn_family(Ctx& ctx, const json& j) {
  const std::string path = "kn_family";
  check_keys(ctx, path, j, {"kind", "c_grid", "sequences"});
  std::string kind;
  const json* k = get_req(ctx, path, j, "kind");
  std::vector<KnSpec> out;
  if (!k || !as_string(ctx, path + ".kind", *k, kind)) return out;
  try {
    if (kind == "linear") {
      const json* c = get_req(ctx, path, j, "c_grid");
      if (!c) return out;
      for (double v : parse_double_array(ctx, path + ".c_grid", *c))
        out.push_back(KnSpec::linear(v));
      return out;
    }
    if (kind == "explicit") {
      const json* s = get_req(ctx, path, j, "sequences");
      if (!s || !s->is_array() || s->empty()) {
        ctx.add(path + ".sequences", "expected a nonempty array of integer arrays");
        return out;
      }
      for (std::size_t i = 0; i < s->size(); ++i) {
        const json& seq = (*s)[i];
        const std::string spath = path + ".sequences[" + std::to_string(i) + "]";
        if (!seq.is_array() || seq.empty()) {
          ctx.add(spath, "expected a nonempty integer array");
          continue;
        }
        std::vector<int64_t> values;
        bool good = true;
        for (std::size_t p = 0; p < seq.size(); ++p) {
          int64_t x;
          if (!as_int(ctx, spath + "[" + std::to_string(p) + "]", seq[p], x)) {
            good = false;
            break;
          }
          values.push_back(x);
        }
        if (good) out.push_back(KnSpec::explicit_list(std::move(values)));
      }
      return out;
    }
    ctx.add(path + ".kind", "unknown kn_family kind \"" + kind + "\"");
  } catch (const Error& e) {
    ctx.add(path, e.what());
  }
  return out;
}

const std::vector<std::string> kAllQuantities = {"chi", "lambda_p", "lambda_w",
                                                 "lambda_w_randomized"};

// Mirror of EstimatorGrid::validate that records every violation.
void check_grid(Ctx& ctx, const EstimatorGrid& g) {
  auto sorted_positive = [&](const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0)) ctx.add(name, "entries must be positive");
      if (i > 0 && !(v[i] > v[i - 1])) ctx.add(name, "entries must be strictly increasing");
    }
  };
  sorted_positive(g.epsilon_grid, "epsilon_grid");
  sorted_positive(g.delta_grid, "delta_grid");
  if (!g.alpha_auto)
    for (std::size_t i = 0; i < g.alpha_grid.size(); ++i) {
      if (g.alpha_grid[i] < 0.0) ctx.add("alpha_grid", "entries must be nonnegative");
      if (i > 0 && !(g.alpha_grid[i] > g.alpha_grid[i - 1]))
        ctx.add("alpha_grid", "entries must be strictly increasing");
    }
  if (g.n_lo < 1) ctx.add("n_window", "window start must be >= 1");
  if (g.n_hi < g.n_lo) ctx.add("n_window", "window must satisfy a <= b");
  if (g.stride < 1) ctx.add("stride", "must be >= 1");
  if (g.samples < 100) ctx.add("samples", "must be >= 100");
  for (double d : g.delta_grid)
    if (d * static_cast<double>(g.n_lo) < 2.0)
      ctx.add("delta_grid", "violates the window nontriviality rule delta * a >= 2");
}

json point_json(const Space& space, const MetricPoint& p) {
  if (p.is_discrete()) return space.symbol_name(p.symbol_id());
  if (p.coords().size() == 1) return p.coords()[0];
  return json(p.coords());
}

json law_json(const Space& space, const Law& law) {
  json j;
  if (law.is_normal()) {
    j["kind"] = "normal";
    j["mean"] = law.normal_params().mean;
    j["stddev"] = law.normal_params().stddev;
    return j;
  }
  j["kind"] = "finite";
  json atoms = json::array(), weights = json::array();
  for (std::size_t i = 0; i < law.finite_dist().atoms.size(); ++i) {
    atoms.push_back(point_json(space, law.finite_dist().atoms[i]));
    weights.push_back(law.finite_dist().weights[i]);
  }
  j["atoms"] = atoms;
  j["weights"] = weights;
  return j;
}

}  // namespace

Scenario ScenarioConfig::to_scenario() const {
  Scenario sc;
  sc.space = space;
  sc.process = process;
  sc.index_model = index_model;
  sc.target = target;
  sc.family = family;
  sc.kn_candidates = kn_candidates;
  sc.grid = grid;
  return sc;
}

std::string ScenarioConfig::canonical_json() const {
  json j;
  j["seed"] = seed;
  j["samples"] = grid.samples;
  j["n_window"] = json::array({grid.n_lo, grid.n_hi});
  j["stride"] = grid.stride;
  j["epsilon_grid"] = grid.epsilon_grid;
  j["delta_grid"] = grid.delta_grid;
  if (grid.alpha_auto)
    j["alpha_grid"] = "auto";
  else
    j["alpha_grid"] = grid.alpha_grid;

  json sp;
  if (space.kind() == SpaceKind::euclidean) {
    sp["kind"] = "euclidean";
    sp["dim"] = space.dim();
  } else {
    sp["kind"] = "discrete";
    json names = json::array();
    for (int32_t i = 0; i < space.alphabet_size(); ++i) names.push_back(space.symbol_name(i));
    sp["alphabet"] = names;
    json table = json::array();
    for (int32_t a = 0; a < space.alphabet_size(); ++a) {
      json row = json::array();
      for (int32_t b = 0; b < space.alphabet_size(); ++b)
        row.push_back(space.table_distance(a, b));
      table.push_back(row);
    }
    sp["distance_table"] = table;
  }
  j["space"] = sp;

  json pr;
  switch (process.kind()) {
    case ProcessModel::Kind::constant:
      pr["kind"] = "constant";
      pr["point"] = point_json(space, process.point_a());
      break;
    case ProcessModel::Kind::alternating:
      pr["kind"] = "alternating";
      pr["a"] = point_json(space, process.point_a());
      pr["b"] = point_json(space, process.point_b());
      break;
    case ProcessModel::Kind::partial_sum_normalized:
      pr["kind"] = "partial_sum_normalized";
      pr["step_law"] = law_json(space, process.step_law());
      break;
    case ProcessModel::Kind::eventually_constant: {
      pr["kind"] = "eventually_constant";
      json outs = json::array();
      for (const auto& o : process.outcomes()) {
        json oj;
        json prefix = json::array();
        for (const auto& p : o.prefix) prefix.push_back(point_json(space, p));
        oj["prefix"] = prefix;
        oj["limit"] = point_json(space, o.limit);
        oj["probability"] = o.probability;
        outs.push_back(oj);
      }
      pr["outcomes"] = outs;
      break;
    }
    case ProcessModel::Kind::block_oscillating: {
      pr["kind"] = "block_oscillating";
      json g;
      if (process.growth().kind == BlockGrowth::Kind::linear) {
        g["kind"] = "linear";
        g["c"] = process.growth().param;
      } else {
        g["kind"] = "exponential";
        g["r"] = process.growth().param;
      }
      pr["block_growth"] = g;
      pr["a"] = point_json(space, process.point_a());
      pr["b"] = point_json(space, process.point_b());
      pr["phase_count"] = process.phase_count();
      break;
    }
  }
  j["process"] = pr;

  json im;
  switch (index_model.kind()) {
    case IndexModel::Kind::deterministic: {
      im["kind"] = "deterministic";
      json kn;
      if (index_model.kn().is_linear()) {
        kn["kind"] = "linear";
        kn["c"] = index_model.kn().linear_c();
      } else {
        kn["kind"] = "explicit";
        kn["values"] = index_model.kn().explicit_values();
      }
      im["kn"] = kn;
      break;
    }
    case IndexModel::Kind::two_point:
      im["kind"] = "two_point";
      im["q"] = index_model.q();
      break;
    case IndexModel::Kind::uniform_window:
      im["kind"] = "uniform_window";
      im["beta"] = index_model.beta();
      break;
    case IndexModel::Kind::linear_noise: {
      im["kind"] = "linear_noise";
      im["c"] = index_model.c();
      json hw;
      if (index_model.halfwidth().relative > 0.0) {
        hw["kind"] = "relative";
        hw["w"] = index_model.halfwidth().relative;
      } else {
        hw["kind"] = "constant";
        hw["value"] = index_model.halfwidth().base;
      }
      im["halfwidth"] = hw;
      break;
    }
  }
  j["index_model"] = im;

  j["target"] = law_json(space, target);

  json fam;
  switch (family.kind()) {
    case FamilyKind::half_lines: {
      fam["kind"] = "half_lines";
      fam["thresholds"] = family.thresholds();
      fam["directions"] =
          family.has_le() ? (family.has_ge() ? "both" : "le") : std::string("ge");
      break;
    }
    case FamilyKind::interval_unions:
      fam["kind"] = "interval_unions";
      fam["endpoints"] = family.endpoints();
      fam["max_components"] = family.max_components();
      break;
    case FamilyKind::support_subsets: {
      fam["kind"] = "support_subsets";
      json pts = json::array();
      for (const auto& p : family.points()) pts.push_back(point_json(space, p));
      fam["points"] = pts;
      break;
    }
  }
  j["set_family"] = fam;

  json knf;
  bool all_linear = true;
  for (const auto& k : kn_candidates) all_linear &= k.is_linear();
  if (all_linear) {
    knf["kind"] = "linear";
    json cs = json::array();
    for (const auto& k : kn_candidates) cs.push_back(k.linear_c());
    knf["c_grid"] = cs;
  } else {
    knf["kind"] = "explicit";
    json seqs = json::array();
    for (const auto& k : kn_candidates) {
      if (k.is_linear()) {
        // mixed families round-trip as explicit realizations over the window
        std::vector<int64_t> values;
        for (int64_t n = 1; n <= grid.n_hi; ++n) values.push_back(k.at(n));
        seqs.push_back(values);
      } else {
        seqs.push_back(k.explicit_values());
      }
    }
    knf["sequences"] = seqs;
  }
  j["kn_family"] = knf;

  json qs = json::array();
  if (quantities.empty()) {
    for (const auto& q : kAllQuantities) qs.push_back(q);
  } else {
    for (const auto& q : kAllQuantities)
      if (std::find(quantities.begin(), quantities.end(), q) != quantities.end())
        qs.push_back(q);
  }
  j["quantities"] = qs;

  // Round every number to 12 significant digits for byte-stable output.
  std::function<void(json&)> canon = [&](json& node) {
    if (node.is_number_float()) {
      node = std::stod(canonical_number(node.get<double>()));
    } else if (node.is_object() || node.is_array()) {
      for (auto& child : node) canon(child);
    }
  };
  canon(j);
  return j.dump(2);
}

ScenarioConfig load_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(Errc::ParseError, {std::string("config is not valid JSON: ") + e.what()});
  }

  Ctx ctx;
  check_keys(ctx, "config", j,
             {"seed", "samples", "n_window", "stride", "epsilon_grid", "delta_grid", "alpha_grid",
              "space", "process", "index_model", "target", "set_family", "kn_family",
              "quantities"});
  if (!j.is_object()) throw ConfigError(Errc::ValidationError, std::move(ctx.errs));

  ScenarioConfig cfg;

  if (j.contains("seed")) as_u64(ctx, "seed", j.at("seed"), cfg.seed);

  if (const json* s = get_req(ctx, "config", j, "samples")) {
    int64_t v;
    if (as_int(ctx, "samples", *s, v)) cfg.grid.samples = v;
  }
  if (const json* w = get_req(ctx, "config", j, "n_window")) {
    if (!w->is_array() || w->size() != 2) {
      ctx.add("n_window", "expected [a, b]");
    } else {
      as_int(ctx, "n_window[0]", (*w)[0], cfg.grid.n_lo);
      as_int(ctx, "n_window[1]", (*w)[1], cfg.grid.n_hi);
    }
  }
  if (j.contains("stride")) as_int(ctx, "stride", j.at("stride"), cfg.grid.stride);
  if (const json* e = get_req(ctx, "config", j, "epsilon_grid"))
    cfg.grid.epsilon_grid = parse_double_array(ctx, "epsilon_grid", *e);
  if (const json* d = get_req(ctx, "config", j, "delta_grid"))
    cfg.grid.delta_grid = parse_double_array(ctx, "delta_grid", *d);
  if (j.contains("alpha_grid")) {
    const json& a = j.at("alpha_grid");
    if (a.is_string() && a.get<std::string>() == "auto") {
      cfg.grid.alpha_auto = true;
    } else if (a.is_array()) {
      cfg.grid.alpha_auto = false;
      cfg.grid.alpha_grid = parse_double_array(ctx, "alpha_grid", a);
    } else {
      ctx.add("alpha_grid", "expected \"auto\" or an array of numbers");
    }
  }

  std::optional<Space> space;
  if (j.contains("space"))
    space = parse_space(ctx, j.at("space"));
  else
    space = Space::euclidean(1);
  if (space) cfg.space = *space;

  if (const json* p = get_req(ctx, "config", j, "process")) {
    if (space) {
      auto process = parse_process(ctx, *p, *space);
      if (process) cfg.process = std::move(*process);
    }
  }
  if (const json* im = get_req(ctx, "config", j, "index_model")) {
    auto model = parse_index_model(ctx, *im);
    if (model) cfg.index_model = std::move(*model);
  }
  if (const json* t = get_req(ctx, "config", j, "target")) {
    if (space) {
      auto target = parse_law(ctx, "target", *t, *space);
      if (target) cfg.target = std::move(*target);
    }
  }
  if (const json* f = get_req(ctx, "config", j, "set_family")) {
    if (space) {
      auto family = parse_family(ctx, *f, *space);
      if (family) cfg.family = std::move(*family);
    }
  }
  if (const json* kf = get_req(ctx, "config", j, "kn_family")) {
    auto kns = parse_kn_family(ctx, *kf);
    if (!kns.empty()) cfg.kn_candidates = std::move(kns);
  }
  if (j.contains("quantities")) {
    const json& q = j.at("quantities");
    if (!q.is_array()) {
      ctx.add("quantities", "expected an array of quantity names");
    } else {
      for (const auto& item : q) {
        std::string name;
        if (!as_string(ctx, "quantities", item, name)) continue;
        if (std::find(kAllQuantities.begin(), kAllQuantities.end(), name) ==
            kAllQuantities.end())
          ctx.add("quantities", "unknown quantity \"" + name + "\"");
        else
          cfg.quantities.push_back(name);
      }
    }
  }

  check_grid(ctx, cfg.grid);

  // cross-field constraints (only meaningful when the pieces parsed)
  if (ctx.errs.empty()) {
    if (cfg.family.kind() != FamilyKind::support_subsets && cfg.family.size() > 4096)
      ctx.add("set_family", "family enumerates more than 4096 sets");
    if (cfg.family.kind() == FamilyKind::support_subsets && cfg.family.points().size() > 12)
      ctx.add("set_family", "support_subsets is capped at 12 points for estimation");
    if (cfg.family.kind() == FamilyKind::support_subsets)
      for (const auto& p : cfg.family.points())
        if (!cfg.space.admits(p)) ctx.add("set_family.points", "point outside the space");

    // horizon feasibility over the n-window
    constexpr int64_t kMaxHorizon = 10'000'000;
    try {
      int64_t horizon = cfg.grid.n_hi;
      for (int64_t n : cfg.grid.n_points())
        horizon = std::max(horizon, cfg.index_model.max_index_bound(n));
      const double top = (1.0 + cfg.grid.delta_max()) * static_cast<double>(cfg.grid.n_hi);
      if (horizon > kMaxHorizon || top > static_cast<double>(kMaxHorizon))
        ctx.add("n_window", "required horizon exceeds the 1e7 cap");
    } catch (const Error& e) {
      ctx.add("index_model", e.what());
    }

    // kn coverage of the window
    for (std::size_t i = 0; i < cfg.kn_candidates.size(); ++i) {
      try {
        cfg.kn_candidates[i].at(cfg.grid.n_hi);
      } catch (const Error&) {
        ctx.add("kn_family", "candidate " + std::to_string(i) +
                                 " does not cover the n-window (needs length >= b)");
      }
    }
    if (cfg.index_model.kind() == IndexModel::Kind::deterministic) {
      try {
        cfg.index_model.kn().at(cfg.grid.n_hi);
      } catch (const Error&) {
        ctx.add("index_model.kn", "explicit list does not cover the n-window");
      }
    }
  }

  if (!ctx.errs.empty()) throw ConfigError(Errc::ValidationError, std::move(ctx.errs));
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(Errc::ParseError, {"cannot open config file: " + path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str());
}

}  // namespace anscombe
