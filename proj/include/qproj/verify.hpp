#pragma once

#include <string>
#include <vector>

#include "qproj/io.hpp"
#include "qproj/sampling.hpp"

namespace qproj {

/// One verification check: the measured value, the tolerance it was held to,
/// and the verdict.  Every numeric a suite emits carries its tolerance.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  unsigned seed = kDefaultSeed;
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

Json to_json(const SuiteReport& report);

/// Spectral-gap / error-bound suite: snapped quartic bound certificates,
/// compact (haar) averaging, sinc truncation decay, and the mixed-spectrum
/// grid constraint.
SuiteReport run_gap_suite(unsigned seed = kDefaultSeed);

/// Reparameterization-kernel suite: reduction, propagation identity,
/// sharp-q propagator, extended-kernel consistency, Gram positivity.
SuiteReport run_reparam_suite(unsigned seed = kDefaultSeed);

/// Multiplier-elevation suite: sector kernel oracles, projector
/// factorization on the product space, rank-one collapse.
SuiteReport run_elevation_suite(unsigned seed = kDefaultSeed);

SuiteReport run_suite(const std::string& name, unsigned seed = kDefaultSeed);

}  // namespace qproj
