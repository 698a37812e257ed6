#pragma once

// The eight end-to-end acceptance checks, each timed against its runtime
// budget. Shared by the CLI (full-verify) and the acceptance test binary.

#include <string>
#include <utility>
#include <vector>

namespace copert::verify {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::vector<std::string> details;  ///< one line per failed or noteworthy sub-check
  std::vector<std::pair<std::string, std::string>> metrics;
};

CriterionResult criterion_1();  ///< Stern exact anchors
CriterionResult criterion_2();  ///< Stern moment / operator identity
CriterionResult criterion_3();  ///< Stern secondary-term envelope and prior bounds
CriterionResult criterion_4();  ///< Thue-Morse exact anchors
CriterionResult criterion_5();  ///< Thue-Morse growth constants vs prediction
CriterionResult criterion_6();  ///< delta_1, xi(2/3), xi(7/8)
CriterionResult criterion_7();  ///< word sums, weight bounds, envelopes, radius bracket
CriterionResult criterion_8();  ///< hypothesis suites and the mutated profile

std::vector<CriterionResult> run_all();

/// "PASS [n] title (1.23 s)" or "FAIL ...".
std::string summary_line(const CriterionResult& r);

}  // namespace copert::verify
