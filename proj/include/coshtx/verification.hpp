#pragma once

// Library-side acceptance checks, shared by `coshtx reproduce`/`verify`.

#include <string>
#include <vector>

#include "coshtx/report.hpp"

namespace coshtx::verification {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  report::Json numbers;
};

CriterionResult run_criterion(int id);  // 1..12
std::vector<CriterionResult> verify_all();

/// Ids: sinhc, erf-gauss, bmv, coshcos, expsq, unitary-const, support-trio.
std::vector<std::string> example_ids();
std::vector<int> criteria_for(const std::string& example_id);  // throws InvalidInput

report::Json to_json(const CriterionResult& r);
report::Bundle reproduce(const std::string& example_id);
report::Bundle verify();

}  // namespace coshtx::verification
