#pragma once

#include <optional>

#include "anscombe/config.hpp"
#include "anscombe/report.hpp"

namespace anscombe {

struct RunnerOptions {
  std::optional<uint64_t> seed_override;
  std::optional<int64_t> samples_override;
  int threads = 1;
  VerifierTerms terms{};  // sensitivity-check mask; all terms on by default
};

/// Monte Carlo estimates of the configured quantities.
RunReport run_estimate(const ScenarioConfig& config, const RunnerOptions& opt = {});

/// Full inequality check with slack accounting; ok=false on failure.
RunReport run_verify(const ScenarioConfig& config, const RunnerOptions& opt = {});

/// Exact values on an enumerable scenario (plus the five-formulation block
/// when the combined support allows it).
RunReport run_oracle(const ScenarioConfig& config, const RunnerOptions& opt = {});

/// Estimator-vs-oracle table; ok=false when any |z| > 4.
RunReport run_compare(const ScenarioConfig& config, const RunnerOptions& opt = {});

}  // namespace anscombe
