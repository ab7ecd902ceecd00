#pragma once

#include <string>
#include <vector>

#include "anscombe/indices.hpp"

namespace anscombe {

/// Carries every violation found in one validation pass, not just the first.
class ConfigError : public Error {
 public:
  ConfigError(Errc code, std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// A fully validated experiment description. Unknown fields, malformed
/// values, and cross-field constraint violations are all rejected at load
/// time with the complete violation list.
struct ScenarioConfig {
  uint64_t seed = 0;
  Space space = Space::euclidean(1);
  ProcessModel process = ProcessModel::constant(Space::euclidean(1), MetricPoint::real(0.0));
  IndexModel index_model = IndexModel::deterministic(KnSpec::linear(1.0));
  Law target = Law::point_mass(MetricPoint::real(0.0));
  SetFamily family = SetFamily::half_lines({0.0}, true, true);
  std::vector<KnSpec> kn_candidates = {KnSpec::linear(1.0)};
  EstimatorGrid grid;
  std::vector<std::string> quantities;  // estimate selection; empty = all

  Scenario to_scenario() const;
  /// Canonical serialization: sorted keys, 12-significant-digit numbers,
  /// defaults materialized. Equal configs produce byte-identical text.
  std::string canonical_json() const;
};

ScenarioConfig load_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

}  // namespace anscombe
