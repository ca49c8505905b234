#pragma once

#include <string>
#include <utility>

namespace torus_scatter {

/// One named numerical check: passes iff max_deviation <= tolerance.
struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline CheckResult make_check(std::string name, double max_deviation, double tolerance) {
  // NaN deviations fail.
  return {std::move(name), max_deviation, tolerance, max_deviation <= tolerance};
}

}  // namespace torus_scatter
