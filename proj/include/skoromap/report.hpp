#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace skoromap {

/// One failed condition: where it failed, which condition, and by how much.
struct Violation {
  std::size_t index;
  std::string condition;
  double magnitude;
};

/// Pass/fail evidence for a batch of checked conditions. `max_deviation`
/// tracks the largest deviation seen over all evaluated conditions, whether
/// or not it exceeded the tolerance, so passing reports still carry the
/// worst observed slack.
struct ComplianceReport {
  bool passed = true;
  std::vector<Violation> violations;
  double max_deviation = 0.0;

  void note(double deviation) {
    if (deviation > max_deviation) max_deviation = deviation;
  }

  /// Record a condition whose deviation must stay <= tol.
  void check(const std::string& condition, std::size_t index, double deviation,
             double tol) {
    note(deviation);
    if (deviation > tol) {
      passed = false;
      violations.push_back(Violation{index, condition, deviation});
    }
  }

  void merge(const ComplianceReport& other) {
    note(other.max_deviation);
    if (!other.passed) passed = false;
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
  }
};

}  // namespace skoromap
