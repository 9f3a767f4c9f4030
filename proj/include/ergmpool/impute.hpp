#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ergmpool {

enum class ColumnKind { Continuous, Binary };

struct ImputationColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  std::vector<std::optional<double>> values;
  // Imputed continuous values are clamped into [lower, upper] when set.
  std::optional<double> lower;
  std::optional<double> upper;
};

struct ImputationOptions {
  int iterations = 10;
  std::uint64_t seed = 1;
};

// Multivariate imputation by chained equations. Missing cells start from
// random draws of their column's observed values; each sweep then visits
// every incomplete column in order and redraws its missing cells from a
// regression on all other columns: linear regression plus a Gaussian
// residual for continuous columns, logistic regression plus a Bernoulli
// draw for binary ones. Deterministic given the seed.
std::vector<ImputationColumn> impute_chained(std::vector<ImputationColumn> table,
                                             const ImputationOptions& options);

}  // namespace ergmpool
