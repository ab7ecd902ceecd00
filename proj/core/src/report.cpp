#include "anscombe/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace anscombe {

using nlohmann::json;

std::string canonical_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

QuantityRecord QuantityRecord::from_estimate(std::string name, const IndexEstimate& est) {
  QuantityRecord rec;
  rec.name = std::move(name);
  rec.value = est.value;
  rec.stderr_ = est.stderr_;
  rec.hat_form = est.hat_form;
  rec.arg_epsilon = est.arg_epsilon;
  rec.arg_delta = est.arg_delta;
  rec.arg_n = est.arg_n;
  rec.arg_set = est.arg_set;
  rec.per_grid = est.per_grid;
  return rec;
}

namespace {

double canon_value(double v) { return std::stod(canonical_number(v)); }

json cell_json(const GridCell& cell) {
  json c;
  if (cell.epsilon) c["epsilon"] = canon_value(*cell.epsilon);
  if (cell.delta) c["delta"] = canon_value(*cell.delta);
  if (cell.alpha) c["alpha"] = canon_value(*cell.alpha);
  if (cell.n) c["n"] = *cell.n;
  if (!cell.set_label.empty()) c["set"] = cell.set_label;
  c["value"] = canon_value(cell.value);
  c["stderr"] = canon_value(cell.stderr_);
  return c;
}

json quantity_json(const QuantityRecord& rec) {
  json q;
  q["name"] = rec.name;
  q["value"] = canon_value(rec.value);
  q["stderr"] = canon_value(rec.stderr_);
  if (rec.hat_form) q["hat_form"] = canon_value(*rec.hat_form);
  json arg;
  if (rec.arg_epsilon) arg["epsilon"] = canon_value(*rec.arg_epsilon);
  if (rec.arg_delta) arg["delta"] = canon_value(*rec.arg_delta);
  if (rec.arg_n) arg["n"] = *rec.arg_n;
  if (!rec.arg_set.empty()) arg["set"] = rec.arg_set;
  if (!arg.empty()) q["arg"] = arg;
  // very large tables are summarized by their size; everything needed to
  // recompute the headline value stays in the cells that are emitted
  constexpr std::size_t kMaxCells = 4096;
  if (rec.per_grid.size() <= kMaxCells) {
    json cells = json::array();
    for (const auto& cell : rec.per_grid) cells.push_back(cell_json(cell));
    q["per_grid"] = cells;
  } else {
    q["per_grid_omitted_rows"] = rec.per_grid.size();
  }
  return q;
}

void csv_cell_row(std::ostringstream& out, const std::string& quantity, const GridCell& cell) {
  out << quantity;
  if (!cell.set_label.empty()) out << "[" << cell.set_label << "]";
  out << ",";
  if (cell.epsilon) out << canonical_number(*cell.epsilon);
  out << ",";
  if (cell.delta) out << canonical_number(*cell.delta);
  out << ",";
  if (cell.alpha) out << canonical_number(*cell.alpha);
  out << ",";
  if (cell.n) out << *cell.n;
  out << "," << canonical_number(cell.value) << "," << canonical_number(cell.stderr_) << "\n";
}

void csv_summary_row(std::ostringstream& out, const std::string& quantity, double value,
                     double stderr_) {
  out << quantity << ",,,,," << canonical_number(value) << "," << canonical_number(stderr_)
      << "\n";
}

void csv_quantity(std::ostringstream& out, const QuantityRecord& rec) {
  csv_summary_row(out, rec.name, rec.value, rec.stderr_);
  if (rec.hat_form) csv_summary_row(out, rec.name + ".hat_form", *rec.hat_form, 0.0);
  for (const auto& cell : rec.per_grid) csv_cell_row(out, rec.name, cell);
}

}  // namespace

std::string RunReport::to_json() const {
  json j;
  j["command"] = command;
  j["config"] = json::parse(canonical_config);
  json qs = json::array();
  for (const auto& q : quantities) qs.push_back(quantity_json(q));
  j["quantities"] = qs;
  if (inequality) {
    json iq;
    iq["lhs"] = quantity_json(inequality->lhs);
    iq["rhs_weak"] = quantity_json(inequality->rhs_weak);
    iq["rhs_chi"] = quantity_json(inequality->rhs_chi);
    iq["rhs_lp"] = quantity_json(inequality->rhs_lp);
    iq["best_kn"] = inequality->best_kn;
    json slack;
    slack["mc"] = canon_value(inequality->slack_mc);
    slack["modulus"] = canon_value(inequality->slack_modulus);
    slack["total"] = canon_value(inequality->slack_total);
    iq["slack"] = slack;
    iq["pass"] = inequality->pass;
    j["inequality"] = iq;
  }
  if (!compare.empty()) {
    json rows = json::array();
    for (const auto& row : compare) {
      json r;
      r["name"] = row.name;
      r["mc"] = canon_value(row.mc);
      r["oracle"] = canon_value(row.oracle);
      r["stderr"] = canon_value(row.stderr_);
      r["z"] = canon_value(row.z);
      r["flagged"] = row.flagged;
      rows.push_back(r);
    }
    j["compare"] = rows;
  }
  if (five_forms) {
    json f;
    f["function_form"] = canon_value(five_forms->function_form);
    f["enlargement_form"] = canon_value(five_forms->enlargement_form);
    f["open_form"] = canon_value(five_forms->open_form);
    f["closed_form"] = canon_value(five_forms->closed_form);
    f["continuity_form"] = canon_value(five_forms->continuity_form);
    f["max_pairwise_gap"] = canon_value(five_forms->max_pairwise_gap);
    j["five_forms"] = f;
  }
  json tool;
  tool["name"] = kToolName;
  tool["version"] = kToolVersion;
  j["tool"] = tool;
  json verdict;
  verdict["ok"] = ok;
  verdict["summary"] = summary;
  j["verdict"] = verdict;
  return j.dump(2) + "\n";
}

std::string RunReport::to_csv() const {
  std::ostringstream out;
  out << "quantity,epsilon,delta,alpha,n,value,stderr\n";
  for (const auto& q : quantities) csv_quantity(out, q);
  if (inequality) {
    csv_quantity(out, inequality->lhs);
    csv_quantity(out, inequality->rhs_weak);
    csv_quantity(out, inequality->rhs_chi);
    csv_quantity(out, inequality->rhs_lp);
    csv_summary_row(out, "slack.mc", inequality->slack_mc, 0.0);
    csv_summary_row(out, "slack.modulus", inequality->slack_modulus, 0.0);
    csv_summary_row(out, "slack.total", inequality->slack_total, 0.0);
    csv_summary_row(out, "inequality.pass", inequality->pass ? 1.0 : 0.0, 0.0);
  }
  for (const auto& row : compare) {
    csv_summary_row(out, "compare." + row.name + ".mc", row.mc, row.stderr_);
    csv_summary_row(out, "compare." + row.name + ".oracle", row.oracle, 0.0);
    csv_summary_row(out, "compare." + row.name + ".z", row.z, 0.0);
  }
  if (five_forms) {
    csv_summary_row(out, "five_forms.function_form", five_forms->function_form, 0.0);
    csv_summary_row(out, "five_forms.enlargement_form", five_forms->enlargement_form, 0.0);
    csv_summary_row(out, "five_forms.open_form", five_forms->open_form, 0.0);
    csv_summary_row(out, "five_forms.closed_form", five_forms->closed_form, 0.0);
    csv_summary_row(out, "five_forms.continuity_form", five_forms->continuity_form, 0.0);
    csv_summary_row(out, "five_forms.max_pairwise_gap", five_forms->max_pairwise_gap, 0.0);
  }
  return out.str();
}

}  // namespace anscombe
