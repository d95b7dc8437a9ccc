#include "weightlab/report.hpp"

#include <cmath>

namespace weightlab {

void ReportDocument::at_least(std::string name, double measured, double bound, double tolerance, std::string note) {
  assertions.push_back({std::move(name), ">=", measured, bound, tolerance, measured >= bound - tolerance, std::move(note)});
}

void ReportDocument::at_most(std::string name, double measured, double bound, double tolerance, std::string note) {
  assertions.push_back({std::move(name), "<=", measured, bound, tolerance, measured <= bound + tolerance, std::move(note)});
}

void ReportDocument::expect_verdict(std::string name, std::span<const SeriesPoint> series, SeriesVerdict expected,
                                    const SeriesPolicy& policy) {
  const SeriesVerdict got = classify_series(series, policy);
  Assertion a;
  a.name = std::move(name);
  a.relation = "verdict";
  if (expected == SeriesVerdict::Divergent) {
    a.bound = policy.divergence_factor;
    a.measured = INFINITY;
    if (series.size() >= 3) a.measured = series.back().value / series[series.size() - 3].value;
    if (std::isnan(a.measured)) a.measured = INFINITY;
  } else {
    a.bound = policy.stable_change;
    a.measured = last_change(series);
  }
  a.passed = got == expected;
  a.note = "expected " + std::string(verdict_name(expected)) + ", got " + std::string(verdict_name(got));
  assertions.push_back(std::move(a));
}

void ReportDocument::implies(std::string name, bool premise, bool conclusion, std::string note) {
  Assertion a;
  a.name = std::move(name);
  a.relation = "implies";
  a.measured = conclusion ? 1.0 : 0.0;
  a.bound = premise ? 1.0 : 0.0;
  a.passed = !premise || conclusion;
  a.note = premise ? std::move(note) : "vacuous: premise not met" + (note.empty() ? "" : "; " + note);
  assertions.push_back(std::move(a));
}

bool ReportDocument::passed() const {
  for (const auto& a : assertions) {
    if (!a.passed) return false;
  }
  return true;
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json to_json(const Grid& grid) {
  Json j;
  j["dim"] = grid.dim();
  j["N"] = grid.cells_per_side();
  if (grid.dim() == 1) {
    j["lo"] = grid.lower(0);
    j["hi"] = grid.upper(0);
  } else {
    j["lo"] = {grid.lower(0), grid.lower(1)};
    j["hi"] = {grid.upper(0), grid.upper(1)};
  }
  return j;
}

Json to_json(const Cube& cube, int dim) {
  Json j;
  if (dim == 1) {
    j["anchor"] = Json::array({cube.anchor[0]});
  } else {
    j["anchor"] = {cube.anchor[0], cube.anchor[1]};
  }
  j["side"] = cube.side;
  return j;
}

Json to_json(std::span<const SeriesPoint> series) {
  Json out = Json::array();
  for (const auto& pt : series) out.push_back({{"N", pt.n}, {"value", number(pt.value)}});
  return out;
}

Json to_json(const ConstantReport& report) {
  Json j;
  j["characteristic"] = report.characteristic;
  j["value"] = number(report.value);
  j["argmax"] = std::isfinite(report.value) ? to_json(report.argmax, report.grid.dim()) : Json(nullptr);
  j["floor"] = number(report.floor);
  j["argmin"] = std::isfinite(report.floor) ? to_json(report.argmin, report.grid.dim()) : Json(nullptr);
  j["family"] = family_name(report.family.kind);
  j["min_side"] = report.family.min_side_cells;
  j["grid"] = to_json(report.grid);
  j["refinement"] = to_json(report.refinement);
  j["flags"] = report.flags;
  return j;
}

Json to_json(const ReportDocument& doc) {
  Json j;
  j["schema"] = kReportSchema;
  j["scenario"] = doc.scenario;
  j["parameters"] = doc.parameters;
  j["levels"] = doc.levels;
  j["derived"] = doc.derived;
  Json list = Json::array();
  for (const auto& a : doc.assertions) {
    list.push_back({{"name", a.name},
                    {"relation", a.relation},
                    {"measured", number(a.measured)},
                    {"bound", number(a.bound)},
                    {"tolerance", a.tolerance},
                    {"passed", a.passed},
                    {"note", a.note}});
  }
  j["assertions"] = list;
  j["flags"] = doc.flags;
  j["passed"] = doc.passed();
  return j;
}

Json to_json(const LemmaJnReport& report) {
  Json j;
  j["p"] = report.p;
  j["s"] = report.s;
  j["q"] = report.q;
  j["ap"] = {{"series", to_json(report.ap)}, {"verdict", verdict_name(report.ap_verdict)}};
  j["rh"] = {{"series", to_json(report.rh)}, {"verdict", verdict_name(report.rh_verdict)}};
  j["aq"] = {{"series", to_json(report.aq)}, {"verdict", verdict_name(report.aq_verdict)}};
  j["consistent"] = report.consistent;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

void flatten(const Json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    return;
  }
  std::string value = j.is_string() ? j.get<std::string>() : j.dump();
  if (value.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : value) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    value = quoted + "\"";
  }
  out += prefix + "," + value + "\n";
}

}  // namespace

std::string to_csv(const Json& j) {
  std::string out = "key,value\n";
  flatten(j, "", out);
  return out;
}

}  // namespace weightlab
