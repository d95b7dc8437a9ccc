#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "weightlab/constants.hpp"
#include "weightlab/series.hpp"

namespace weightlab {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "weightlab-report/1";

struct Assertion {
  std::string name;
  std::string relation;  // ">=", "<=", "verdict", "implies"
  double measured = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct ReportDocument {
  std::string scenario;
  Json parameters = Json::object();
  Json levels = Json::array();
  Json derived = Json::object();
  std::vector<Assertion> assertions;
  std::vector<std::string> flags;

  // measured >= bound - tolerance.
  void at_least(std::string name, double measured, double bound, double tolerance, std::string note = {});
  // measured <= bound + tolerance.
  void at_most(std::string name, double measured, double bound, double tolerance, std::string note = {});
  // The series classifies as `expected` under `policy`. measured is the last
  // relative change for Stable and the last growth ratio for Divergent.
  void expect_verdict(std::string name, std::span<const SeriesPoint> series, SeriesVerdict expected,
                      const SeriesPolicy& policy);
  // premise => conclusion; recorded as vacuous when the premise fails.
  void implies(std::string name, bool premise, bool conclusion, std::string note = {});

  bool passed() const;
};

Json to_json(const Grid& grid);
Json to_json(const Cube& cube, int dim);
Json to_json(std::span<const SeriesPoint> series);
Json to_json(const ConstantReport& report);
Json to_json(const ReportDocument& doc);
Json to_json(const LemmaJnReport& report);

// Finite numbers as JSON numbers, infinities and NaN as null.
Json number(double v);

// Stable text form: two-space indentation, trailing newline.
std::string dump(const Json& j);

// Flat CSV projection: one "key,value" row per scalar leaf, keys joined by '.'.
std::string to_csv(const Json& j);

}  // namespace weightlab
