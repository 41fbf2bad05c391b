#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hardpair/dynamics.hpp"

namespace hardpair {

/// Outcome of one property suite. Metrics are (name, value) pairs in the
/// order they were measured; limits are the pinned thresholds.
struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
  std::string note;
};

CheckResult check_frames(std::uint64_t seed);
CheckResult check_oracle(std::uint64_t seed);
CheckResult check_identities(std::uint64_t seed);
CheckResult check_scattering(std::uint64_t seed);
CheckResult check_disk_reduction(std::uint64_t seed);
CheckResult check_dynamics(std::uint64_t seed);
CheckResult check_nonuniqueness();
CheckResult check_kinetic(std::uint64_t seed);

std::vector<CheckResult> run_all_checks(std::uint64_t seed);

/// Ellipse (2, 1) datum with repeated collisions under the epsi family.
State rocking_datum();

/// The fixed colliding ellipse datum used by the non-uniqueness suite.
State nonuniqueness_datum();

/// reflection, epsi, op(phi) for phi in {0, pi/6, pi/4, pi/3}.
std::vector<ScatteringFamily> nonuniqueness_families();

}  // namespace hardpair
