#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gaborfio/io.hpp"

namespace gaborfio {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0.0;
  // One-line human summary of the measured quantities.
  std::string summary;
  Json metrics;
};

struct SelftestOptions {
  // Criteria to run (1..9); empty runs all.
  std::vector<int> only;
  unsigned long long seed = 20240601;
};

// Runs the acceptance suite. `on_result` is called after each criterion.
std::vector<CriterionResult> run_selftest(const SelftestOptions& options = {},
                                          const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS [4] almost-diagonalization (12.3 s) -- slope -7.80 ..."
std::string format_result_line(const CriterionResult& result);

Json to_json(const CriterionResult& result);

}  // namespace gaborfio
