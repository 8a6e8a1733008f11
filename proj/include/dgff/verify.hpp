#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dgff/stats.hpp"

namespace dgff {

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Ensemble size for the montecarlo-heavy suites; 0 selects each check's
  /// default size.
  std::size_t ensemble_n = 0;
  double radius = 60.0;
  unsigned threads = 0;
};

/// Suite names accepted by run_suite.
std::vector<std::string> suite_names();

/// Runs one named verification suite: exact, montecarlo, sle, gap or
/// driving. Throws std::invalid_argument for an unknown suite and for a
/// driving suite with fewer than 50 interfaces.
std::vector<EnsembleSummary> run_suite(std::string_view suite, const VerifyOptions& opt);

}  // namespace dgff
