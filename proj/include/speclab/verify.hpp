#pragma once

#include <string>
#include <vector>

#include "speclab/config.hpp"

namespace speclab {

struct VerifyResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

inline const std::vector<std::string> kVerifySuites = {"ball", "fem", "geometry", "rearrangement", "inequalities",
                                                       "families"};

// Invariant suites over the built-in corpus. An empty selection runs all of them.
std::vector<VerifyResult> run_verify(const RunConfig& config, const std::vector<std::string>& suites = {});

}  // namespace speclab
