#pragma once

#include <vector>

namespace ergmpool {

struct ChainDiagnostics {
  double rhat = 1.0;  // NaN when degenerate
  double ess = 0.0;   // NaN when degenerate
  // Every draw identical: R-hat undefined.
  bool degenerate = false;
};

// Rank-normalised split R-hat (max of bulk and folded) and bulk effective
// sample size from Geyer's initial monotone sequence. Requires >= 2 chains
// of >= 4 draws each.
ChainDiagnostics diagnose(const std::vector<std::vector<double>>& chains);

// Classic split R-hat and autocorrelation ESS without rank normalisation.
double split_rhat(const std::vector<std::vector<double>>& chains);
double effective_sample_size(const std::vector<std::vector<double>>& chains);

}  // namespace ergmpool
