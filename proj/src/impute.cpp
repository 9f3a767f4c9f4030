#include "ergmpool/impute.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ergmpool/error.hpp"
#include "ergmpool/rng.hpp"

namespace ergmpool {
namespace {

Eigen::VectorXd fit_logistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  // Small ridge keeps separated predictors finite.
  constexpr double kRidge = 1e-4;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
  for (int iter = 0; iter < 50; ++iter) {
    Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd p = eta.unaryExpr([](double e) { return 1.0 / (1.0 + std::exp(-e)); });
    Eigen::VectorXd w = p.array() * (1.0 - p.array());
    Eigen::VectorXd grad = x.transpose() * (y - p) - 2.0 * kRidge * beta;
    Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
    info.diagonal().array() += 2.0 * kRidge;
    Eigen::VectorXd step = info.ldlt().solve(grad);
    beta += step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-10) break;
  }
  return beta;
}

}  // namespace

std::vector<ImputationColumn> impute_chained(std::vector<ImputationColumn> table,
                                             const ImputationOptions& options) {
  if (table.empty()) return table;
  const std::size_t rows = table.front().values.size();
  bool any_complete = false;
  std::vector<std::vector<std::size_t>> missing(table.size());
  for (std::size_t c = 0; c < table.size(); ++c) {
    const auto& col = table[c];
    if (col.values.size() != rows)
      throw ValidationError("imputation column '" + col.name + "' has the wrong length");
    for (std::size_t r = 0; r < rows; ++r)
      if (!col.values[r]) missing[c].push_back(r);
    if (rows > 0 && missing[c].size() == rows)
      throw UnimputableColumnError("column '" + col.name + "' has no observed values");
    any_complete = any_complete || missing[c].empty();
  }
  bool anything_missing = std::any_of(missing.begin(), missing.end(),
                                      [](const auto& m) { return !m.empty(); });
  if (!anything_missing) return table;
  if (!any_complete)
    throw ValidationError("imputation requires at least one fully observed column");

  Rng rng(stream_seed(options.seed, {0x1D9u}));
  const std::size_t cols = table.size();
  Eigen::MatrixXd data(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<double> observed;
    for (std::size_t r = 0; r < rows; ++r)
      if (table[c].values[r]) observed.push_back(*table[c].values[r]);
    std::uniform_int_distribution<std::size_t> pick(0, observed.empty() ? 0 : observed.size() - 1);
    for (std::size_t r = 0; r < rows; ++r)
      data(r, c) = table[c].values[r] ? *table[c].values[r] : observed[pick(rng)];
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  for (int iter = 0; iter < options.iterations; ++iter) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (missing[c].empty()) continue;
      const auto& col = table[c];
      // Design: intercept plus every other column at its current value.
      Eigen::MatrixXd design(rows, cols);
      design.col(0).setOnes();
      for (std::size_t k = 0, out = 1; k < cols; ++k)
        if (k != c) design.col(out++) = data.col(k);
      std::vector<std::size_t> obs;
      for (std::size_t r = 0; r < rows; ++r)
        if (col.values[r]) obs.push_back(r);
      Eigen::MatrixXd x(obs.size(), cols);
      Eigen::VectorXd y(obs.size());
      for (std::size_t i = 0; i < obs.size(); ++i) {
        x.row(i) = design.row(obs[i]);
        y(i) = *col.values[obs[i]];
      }
      if (col.kind == ColumnKind::Continuous) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        Eigen::VectorXd beta = qr.solve(y);
        const double rss = (y - x * beta).squaredNorm();
        const auto dof = static_cast<double>(obs.size()) - static_cast<double>(qr.rank());
        const double sd = dof > 0 ? std::sqrt(rss / dof) : 0.0;
        for (auto r : missing[c]) {
          double v = design.row(r).dot(beta);
          if (sd > 0) v += sd * normal(rng);
          if (col.lower) v = std::max(v, *col.lower);
          if (col.upper) v = std::min(v, *col.upper);
          data(r, c) = v;
        }
      } else {
        Eigen::VectorXd beta = fit_logistic(x, y);
        for (auto r : missing[c]) {
          const double p = 1.0 / (1.0 + std::exp(-design.row(r).dot(beta)));
          data(r, c) = uniform01(rng) < p ? 1.0 : 0.0;
        }
      }
    }
  }

  for (std::size_t c = 0; c < cols; ++c)
    for (auto r : missing[c]) table[c].values[r] = data(r, c);
  return table;
}

}  // namespace ergmpool
