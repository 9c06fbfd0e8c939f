#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace skelstop {

struct VerifyOptions {
  std::uint64_t seed = 20240801;
  // Scales the calibrated kernel norm constant; 1.0 is the honest run.
  // Any other value is a self-test hook: the driver variance check must
  // then fail (negative control for the battery itself).
  double dh_scale = 1.0;
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Fast property battery over the whole pipeline: exit-time sampler
// moments, sign balance, kernel calibration and variance identities,
// driver variance, deterministic-clock envelope residuals and the
// matching binomial value, exact-covariance spot checks, and the
// rate-function transform.  Designed to run in seconds.
VerifyReport verify_suite(const VerifyOptions& opt = {});

}  // namespace skelstop
