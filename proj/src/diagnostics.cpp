#include "ergmpool/diagnostics.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "ergmpool/error.hpp"

namespace ergmpool {
namespace {

using Chains = std::vector<std::vector<double>>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_shape(const Chains& chains) {
  if (chains.size() < 2) throw ValidationError("diagnostics require at least two chains");
  const auto n = chains.front().size();
  if (n < 4) throw ValidationError("diagnostics require at least four draws per chain");
  for (const auto& c : chains)
    if (c.size() != n) throw ValidationError("diagnostics require chains of equal length");
}

Chains split(const Chains& chains) {
  Chains out;
  for (const auto& c : chains) {
    const auto half = c.size() / 2;
    out.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
    out.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double rhat_basic(const Chains& chains) {
  const auto n = static_cast<double>(chains.front().size());
  std::vector<double> means, vars;
  for (const auto& c : chains) {
    means.push_back(mean_of(c));
    vars.push_back(variance_of(c));
  }
  const double w = mean_of(vars);
  const double b_over_n = variance_of(means);
  if (w <= 0.0) return b_over_n > 0.0 ? std::numeric_limits<double>::infinity() : kNaN;
  const double var_plus = (n - 1.0) / n * w + b_over_n;
  return std::sqrt(var_plus / w);
}

double ess_basic(const Chains& chains) {
  const std::size_t m = chains.size();
  const std::size_t n = chains.front().size();
  const double dn = static_cast<double>(n);
  std::vector<double> means(m), chain_var(m);
  for (std::size_t c = 0; c < m; ++c) {
    means[c] = mean_of(chains[c]);
    chain_var[c] = variance_of(chains[c]);
  }
  const double mean_var = mean_of(chain_var);
  double var_plus = mean_var * (dn - 1.0) / dn;
  if (m > 1) var_plus += variance_of(means);
  if (!(var_plus > 0.0)) return kNaN;

  // Mean over chains of the biased lag-t autocovariance.
  auto acov = [&](std::size_t t) {
    double total = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const auto& x = chains[c];
      double s = 0.0;
      for (std::size_t i = 0; i + t < n; ++i) s += (x[i] - means[c]) * (x[i + t] - means[c]);
      total += s / dn;
    }
    return total / static_cast<double>(m);
  };
  auto rho = [&](std::size_t t) { return 1.0 - (mean_var - acov(t)) / var_plus; };

  std::vector<double> rho_hat(n, 0.0);
  rho_hat[0] = 1.0;
  double rho_even = 1.0;
  double rho_odd = rho(1);
  rho_hat[1] = rho_odd;
  std::size_t t = 1;
  while (t + 5 < n && std::isfinite(rho_even + rho_odd) && rho_even + rho_odd > 0.0) {
    rho_even = rho(t + 1);
    rho_odd = rho(t + 2);
    if (rho_even + rho_odd >= 0.0) {
      rho_hat[t + 1] = rho_even;
      rho_hat[t + 2] = rho_odd;
    }
    t += 2;
  }
  const std::size_t max_t = t;
  if (rho_even > 0.0 && max_t + 1 < n) rho_hat[max_t + 1] = rho_even;
  // Initial monotone sequence.
  for (std::size_t k = 1; k + 3 <= max_t; k += 2) {
    if (rho_hat[k + 1] + rho_hat[k + 2] > rho_hat[k - 1] + rho_hat[k]) {
      rho_hat[k + 1] = (rho_hat[k - 1] + rho_hat[k]) / 2.0;
      rho_hat[k + 2] = rho_hat[k + 1];
    }
  }
  const double total = static_cast<double>(m) * dn;
  double tau = -1.0;
  for (std::size_t k = 0; k < max_t && k < n; ++k) tau += 2.0 * rho_hat[k];
  if (max_t + 1 < n) tau += rho_hat[max_t + 1];
  tau = std::max(tau, 1.0 / std::log10(total));
  return total / tau;
}

Chains rank_normalise(const Chains& chains) {
  std::vector<std::pair<double, std::size_t>> all;
  const std::size_t n = chains.front().size();
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) all.emplace_back(chains[c][i], c * n + i);
  std::sort(all.begin(), all.end());
  const double s = static_cast<double>(all.size());
  std::vector<double> z(all.size());
  const boost::math::normal standard;
  for (std::size_t a = 0; a < all.size();) {
    std::size_t b = a;
    while (b < all.size() && all[b].first == all[a].first) ++b;
    // Average rank of the tie block, 1-based.
    const double rank = (static_cast<double>(a + 1) + static_cast<double>(b)) / 2.0;
    const double q = boost::math::quantile(standard, (rank - 0.375) / (s + 0.25));
    for (std::size_t k = a; k < b; ++k) z[all[k].second] = q;
    a = b;
  }
  Chains out(chains.size(), std::vector<double>(n));
  for (std::size_t c = 0; c < chains.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) out[c][i] = z[c * n + i];
  return out;
}

double median_of(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace

double split_rhat(const std::vector<std::vector<double>>& chains) {
  check_shape(chains);
  return rhat_basic(split(chains));
}

double effective_sample_size(const std::vector<std::vector<double>>& chains) {
  check_shape(chains);
  return ess_basic(split(chains));
}

ChainDiagnostics diagnose(const std::vector<std::vector<double>>& chains) {
  check_shape(chains);
  ChainDiagnostics d;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<double> pooled;
  for (const auto& c : chains)
    for (double x : c) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      pooled.push_back(x);
    }
  if (!(hi > lo)) {
    d.degenerate = true;
    d.rhat = kNaN;
    d.ess = kNaN;
    return d;
  }
  const Chains halves = split(chains);
  const Chains bulk = rank_normalise(halves);
  const double med = median_of(pooled);
  Chains folded = halves;
  for (auto& c : folded)
    for (auto& x : c) x = std::abs(x - med);
  const Chains folded_z = rank_normalise(folded);
  const double r_bulk = rhat_basic(bulk);
  const double r_fold = rhat_basic(folded_z);
  d.rhat = std::isnan(r_fold) ? r_bulk : std::max(r_bulk, r_fold);
  d.ess = ess_basic(bulk);
  return d;
}

}  // namespace ergmpool
