#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anscombe/indices.hpp"
#include "anscombe/oracle.hpp"

namespace anscombe {

inline constexpr const char* kToolName = "anscombe";
inline constexpr const char* kToolVersion = "0.1.0";

struct QuantityRecord {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
  std::optional<double> hat_form;
  std::optional<double> arg_epsilon;
  std::optional<double> arg_delta;
  std::optional<int64_t> arg_n;
  std::string arg_set;
  std::vector<GridCell> per_grid;

  static QuantityRecord from_estimate(std::string name, const IndexEstimate& est);
};

struct InequalityRecord {
  QuantityRecord lhs, rhs_weak, rhs_chi, rhs_lp;
  std::string best_kn;
  double slack_mc = 0.0;
  double slack_modulus = 0.0;
  double slack_total = 0.0;
  bool pass = false;
};

struct FiveFormRecord {
  double function_form = 0.0;
  double enlargement_form = 0.0;
  double open_form = 0.0;
  double closed_form = 0.0;
  double continuity_form = 0.0;
  double max_pairwise_gap = 0.0;
};

/// Deterministic run artifact. Serialization is canonical (sorted keys,
/// fixed 12-significant-digit numbers), so equal runs produce byte-identical
/// files at any thread count. Wall-clock timing goes to stderr, never into
/// the report.
struct RunReport {
  std::string command;           // estimate | verify | oracle | compare
  std::string canonical_config;  // canonical JSON text of the input config
  std::vector<QuantityRecord> quantities;
  std::optional<InequalityRecord> inequality;
  std::vector<CompareRow> compare;
  std::optional<FiveFormRecord> five_forms;
  bool ok = true;
  std::string summary;  // one-line verdict for stdout

  std::string to_json() const;
  std::string to_csv() const;
};

/// %.12g formatting used everywhere a number enters a report.
std::string canonical_number(double v);

}  // namespace anscombe
