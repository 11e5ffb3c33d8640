#ifndef CAVQFI_VERIFY_HPP
#define CAVQFI_VERIFY_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace cavqfi {

enum class VerifyLevel { Fast, Full };

/// A check passes when its measured defect is at most the tolerance.
struct CheckResult {
  std::string name;
  bool passed = false;
  double defect = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

/// Fast runs the synthetic-provider suite; Full adds the quadrature provider,
/// the Fock-oracle h-scaling study and the figure-shape checks.
std::vector<CheckResult> run_verification(VerifyLevel level);

nlohmann::ordered_json verification_report(VerifyLevel level, const std::vector<CheckResult>& results);

VerifyLevel parse_level(const std::string& name);

}  // namespace cavqfi

#endif  // CAVQFI_VERIFY_HPP
