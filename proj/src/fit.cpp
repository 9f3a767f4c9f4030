#include "ergmpool/fit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "ergmpool/error.hpp"

namespace ergmpool {
namespace {

double log_sum_exp(const double* v, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) m = std::max(m, v[k]);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::exp(v[k] - m);
  return m + std::log(s);
}

using Objective = std::function<LikelihoodEval(const Eigen::VectorXd&, bool)>;

struct NewtonOutcome {
  Eigen::VectorXd theta;
  Eigen::MatrixXd covariance;
  double log_likelihood = 0.0;
  bool converged = false;
  bool separated = false;
  int iterations = 0;
};

// Maximises objective(theta) - ridge * |theta|^2. Returns nullopt when an
// unpenalised run detects separation.
std::optional<NewtonOutcome> newton_run(const Objective& objective, std::size_t dim,
                                        double ridge, const FitOptions& opt) {
  const auto p = static_cast<Eigen::Index>(dim);
  auto penalised = [&](const Eigen::VectorXd& theta, bool hess) {
    LikelihoodEval e = objective(theta, hess);
    e.value -= ridge * theta.squaredNorm();
    e.gradient -= 2.0 * ridge * theta;
    if (hess) e.hessian.diagonal().array() -= 2.0 * ridge;
    return e;
  };
  auto newton_step = [&](const LikelihoodEval& e) -> std::optional<Eigen::VectorXd> {
    Eigen::LLT<Eigen::MatrixXd> llt(-e.hessian);
    if (llt.info() != Eigen::Success) return std::nullopt;
    Eigen::VectorXd step = llt.solve(e.gradient);
    if (!step.allFinite()) return std::nullopt;
    return step;
  };

  NewtonOutcome out;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  LikelihoodEval cur = penalised(theta, true);
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    if (cur.gradient.lpNorm<Eigen::Infinity>() < opt.gradient_tolerance) {
      out.converged = true;
      break;
    }
    auto step = newton_step(cur);
    if (!step) {
      if (ridge == 0.0) return std::nullopt;
      throw NonIdentifiedError("information matrix singular after ridge penalty");
    }
    double t = 1.0;
    int halvings = 0;
    bool stalled = false;
    LikelihoodEval cand;
    Eigen::VectorXd next;
    while (true) {
      next = theta + t * *step;
      cand = penalised(next, true);
      // Rounding-level decreases count as ascent so that a converged iterate
      // does not trigger spurious halvings.
      if (std::isfinite(cand.value) && cand.value >= cur.value - 1e-13 * (1.0 + std::abs(cur.value)))
        break;
      t *= 0.5;
      if (++halvings >= opt.max_step_halvings) {
        if (ridge == 0.0) return std::nullopt;
        stalled = true;
        break;
      }
    }
    if (stalled) {
      // No ascent possible at machine precision: already at the optimum.
      out.converged = true;
      break;
    }
    theta = next;
    cur = cand;
    ++out.iterations;
    if (ridge == 0.0 && theta.lpNorm<Eigen::Infinity>() > opt.separation_threshold)
      return std::nullopt;
    if ((t * *step).norm() < opt.step_tolerance) {
      out.converged = true;
      break;
    }
  }
  if (out.converged) {
    // One polishing step takes the quadratically convergent iterate to
    // machine precision.
    if (auto step = newton_step(cur)) {
      Eigen::VectorXd next = theta + *step;
      LikelihoodEval cand = penalised(next, true);
      if (std::isfinite(cand.value) && cand.value >= cur.value - 1e-12 * (1.0 + std::abs(cur.value)) &&
          cand.gradient.lpNorm<Eigen::Infinity>() <= cur.gradient.lpNorm<Eigen::Infinity>()) {
        theta = next;
        cur = cand;
      }
    }
  }
  Eigen::LLT<Eigen::MatrixXd> info(-cur.hessian);
  if (info.info() != Eigen::Success) {
    if (ridge == 0.0) return std::nullopt;
    throw NonIdentifiedError("information matrix singular after ridge penalty");
  }
  out.covariance = info.solve(Eigen::MatrixXd::Identity(p, p));
  out.covariance = (0.5 * (out.covariance + out.covariance.transpose())).eval();
  out.theta = theta;
  out.log_likelihood = objective(theta, false).value;
  return out;
}

FitResult optimise(const Objective& objective, const DirectedNetwork& network,
                   const ModelSpec& model, const FitOptions& opt) {
  auto outcome = newton_run(objective, model.size(), 0.0, opt);
  bool separated = false;
  if (!outcome) {
    separated = true;
    outcome = newton_run(objective, model.size(), opt.ridge, opt);
  }
  FitResult r;
  r.network_id = network.id();
  r.country = network.country();
  r.model = model.preset;
  r.terms = model.term_names();
  r.theta = outcome->theta;
  r.covariance = outcome->covariance;
  r.standard_errors = r.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  r.log_likelihood = outcome->log_likelihood;
  r.converged = outcome->converged && r.theta.allFinite();
  r.separation_flag = separated;
  r.newton_iterations = outcome->iterations;
  return r;
}

void require_fittable(const DirectedNetwork& network) {
  if (network.size() < 2)
    throw DegenerateNetworkError("network " + network.id() + ": fewer than two nodes");
}

}  // namespace

ExactLogLikelihood::ExactLogLikelihood(const DirectedNetwork& network, const BoundModel& model)
    : dim_(model.size()) {
  if (network.size() != model.nodes())
    throw ValidationError("network " + network.id() + ": attribute table size mismatch");
  const auto n = network.size();
  dyads_.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dyads_.push_back({dyad_predictors(model, i, j), dyad_state(network, i, j)});
}

LikelihoodEval ExactLogLikelihood::evaluate(const Eigen::VectorXd& theta, bool with_hessian) const {
  const auto p = static_cast<Eigen::Index>(dim_);
  LikelihoodEval e;
  e.gradient = Eigen::VectorXd::Zero(p);
  if (with_hessian) e.hessian = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd s3(p), mean(p);
  for (const auto& d : dyads_) {
    const auto lw = d.predictors.log_weights(theta);
    const double lse = log_sum_exp(lw.data(), 4);
    e.value += lw[static_cast<std::size_t>(d.observed_state)] - lse;
    const double p1 = std::exp(lw[1] - lse);
    const double p2 = std::exp(lw[2] - lse);
    const double p3 = std::exp(lw[3] - lse);
    s3 = d.predictors.out + d.predictors.in;
    if (d.predictors.mutual_index) s3[static_cast<Eigen::Index>(*d.predictors.mutual_index)] += 1.0;
    mean = p1 * d.predictors.out + p2 * d.predictors.in + p3 * s3;
    e.gradient += d.predictors.state_stats(d.observed_state) - mean;
    if (with_hessian) {
      e.hessian.noalias() -= p1 * d.predictors.out * d.predictors.out.transpose();
      e.hessian.noalias() -= p2 * d.predictors.in * d.predictors.in.transpose();
      e.hessian.noalias() -= p3 * s3 * s3.transpose();
      e.hessian.noalias() += mean * mean.transpose();
    }
  }
  return e;
}

std::array<double, 4> dyad_state_probabilities(const DyadPredictors& dyad,
                                               const Eigen::VectorXd& theta) {
  auto lw = dyad.log_weights(theta);
  const double lse = log_sum_exp(lw.data(), 4);
  for (auto& w : lw) w = std::exp(w - lse);
  return lw;
}

FitResult fit_exact(const DirectedNetwork& network, const AttributeTable& attrs,
                    const ModelSpec& model, const FitOptions& options) {
  require_fittable(network);
  const BoundModel bound(model, attrs);
  const ExactLogLikelihood ll(network, bound);
  return optimise([&](const Eigen::VectorXd& t, bool h) { return ll.evaluate(t, h); }, network,
                  model, options);
}

FitResult fit_mple(const DirectedNetwork& network, const AttributeTable& attrs,
                   const ModelSpec& model, const FitOptions& options) {
  require_fittable(network);
  const BoundModel bound(model, attrs);
  const auto n = network.size();
  const auto p = static_cast<Eigen::Index>(model.size());
  const auto rows = static_cast<Eigen::Index>(n * (n - 1));
  Eigen::MatrixXd x(rows, p);
  Eigen::VectorXd y(rows);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      x.row(r) = change_stats(network, bound, i, j).transpose();
      y[r] = network.has_tie(i, j) ? 1.0 : 0.0;
      ++r;
    }
  // Newton on the logistic log-likelihood: each step is the IRLS weighted
  // least-squares update.
  auto objective = [&](const Eigen::VectorXd& theta, bool hess) {
    LikelihoodEval e;
    const Eigen::VectorXd eta = x * theta;
    Eigen::VectorXd prob(rows), weight(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
      const double v = eta[k];
      // log(1 + e^v) computed stably.
      const double softplus = v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
      e.value += y[k] * v - softplus;
      prob[k] = 1.0 / (1.0 + std::exp(-v));
      weight[k] = prob[k] * (1.0 - prob[k]);
    }
    e.gradient = x.transpose() * (y - prob);
    if (hess) e.hessian = -(x.transpose() * weight.asDiagonal() * x);
    return e;
  };
  return optimise(objective, network, model, options);
}

namespace {

// Sufficient statistics of every graph on the node set.
class EnumeratedLikelihood {
 public:
  EnumeratedLikelihood(const DirectedNetwork& network, const BoundModel& bound) {
    const auto n = network.size();
    if (n > 4) throw SizeLimitError("brute-force enumeration limited to n <= 4");
    std::vector<Tie> slots;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) slots.emplace_back(i, j);
    const std::size_t graphs = std::size_t{1} << slots.size();
    stats_.resize(static_cast<Eigen::Index>(graphs), static_cast<Eigen::Index>(bound.size()));
    for (std::size_t mask = 0; mask < graphs; ++mask) {
      DirectedNetwork g(network.id(), network.node_ids());
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1) g.add_tie(slots[s].first, slots[s].second);
      stats_.row(static_cast<Eigen::Index>(mask)) = sufficient_stats(g, bound).transpose();
    }
    observed_ = sufficient_stats(network, bound);
  }

  LikelihoodEval evaluate(const Eigen::VectorXd& theta, bool hess) const {
    const Eigen::VectorXd lw = stats_ * theta;
    const double log_kappa = log_sum_exp(lw.data(), static_cast<std::size_t>(lw.size()));
    const Eigen::VectorXd w = (lw.array() - log_kappa).exp();
    const Eigen::VectorXd mean = stats_.transpose() * w;
    LikelihoodEval e;
    e.value = theta.dot(observed_) - log_kappa;
    e.gradient = observed_ - mean;
    if (hess) {
      const Eigen::MatrixXd centred = stats_.rowwise() - mean.transpose();
      e.hessian = -(centred.transpose() * w.asDiagonal() * centred);
    }
    return e;
  }

 private:
  Eigen::MatrixXd stats_;
  Eigen::VectorXd observed_;
};

}  // namespace

FitResult brute_force_mle(const DirectedNetwork& network, const AttributeTable& attrs,
                          const ModelSpec& model, const FitOptions& options) {
  require_fittable(network);
  const BoundModel bound(model, attrs);
  const EnumeratedLikelihood ll(network, bound);
  return optimise([&](const Eigen::VectorXd& t, bool h) { return ll.evaluate(t, h); }, network,
                  model, options);
}

double brute_force_log_likelihood(const DirectedNetwork& network, const AttributeTable& attrs,
                                  const ModelSpec& model, const Eigen::VectorXd& theta) {
  require_fittable(network);
  const BoundModel bound(model, attrs);
  return EnumeratedLikelihood(network, bound).evaluate(theta, false).value;
}

FilteredFits filter_fits(const std::vector<FitResult>& fits, const FilterOptions& options) {
  FilteredFits out;
  out.networks_in = fits.size();
  if (fits.empty()) throw EmptyPoolError("no fits to pool");
  out.terms = fits.front().terms;
  for (const auto& f : fits)
    if (f.model != fits.front().model || f.terms != out.terms)
      throw ValidationError("filter_fits requires fits of a single model");
  out.observations.resize(out.terms.size());
  for (const auto& f : fits) {
    std::string reason;
    if (options.require_converged && !f.converged) {
      reason = "not converged";
    } else if (options.exclude_separated && f.separation_flag) {
      reason = "separation";
    } else if (!f.theta.allFinite() || !f.standard_errors.allFinite()) {
      reason = "non-finite estimate";
    } else {
      for (std::size_t k = 0; k < out.terms.size(); ++k) {
        const double se = f.standard_errors[static_cast<Eigen::Index>(k)];
        if (!(se > 0.0)) {
          reason = "non-positive standard error on " + out.terms[k];
          break;
        }
        if (se > options.max_se) {
          reason = "standard error " + std::to_string(se) + " on " + out.terms[k] + " exceeds " +
                   std::to_string(options.max_se);
          break;
        }
      }
    }
    if (!reason.empty()) {
      out.exclusions.push_back({f.network_id, reason});
      continue;
    }
    for (std::size_t k = 0; k < out.terms.size(); ++k) {
      const auto idx = static_cast<Eigen::Index>(k);
      out.observations[k].push_back(
          {f.network_id, f.country, out.terms[k], f.theta[idx], f.standard_errors[idx]});
    }
  }
  if (out.observations.empty() || out.observations.front().empty())
    throw EmptyPoolError("no fits survived filtering (" + std::to_string(out.exclusions.size()) +
                         " excluded)");
  return out;
}

}  // namespace ergmpool
