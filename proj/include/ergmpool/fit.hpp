#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "ergmpool/effect.hpp"
#include "ergmpool/network.hpp"
#include "ergmpool/terms.hpp"

namespace ergmpool {

struct FitOptions {
  double gradient_tolerance = 1e-8;
  double step_tolerance = 1e-10;
  int max_iterations = 100;
  double ridge = 1e-4;
  // Separation is declared when any coefficient exceeds this magnitude, when
  // step halving fails this many times in a row, or when the information
  // matrix is singular.
  double separation_threshold = 10.0;
  int max_step_halvings = 20;
};

struct FitResult {
  std::string network_id;
  std::string country;
  std::string model;  // preset name
  std::vector<std::string> terms;
  Eigen::VectorXd theta;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd standard_errors;
  // Unpenalised log-likelihood at theta (pseudo-log-likelihood for MPLE).
  double log_likelihood = 0.0;
  bool converged = false;
  bool separation_flag = false;
  int newton_iterations = 0;
};

struct LikelihoodEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

// Exact log-likelihood of a dyad-independent ERGM, factorised over the
// n(n-1)/2 dyads, each a four-state categorical variable.
class ExactLogLikelihood {
 public:
  ExactLogLikelihood(const DirectedNetwork& network, const BoundModel& model);

  std::size_t dimension() const { return dim_; }
  LikelihoodEval evaluate(const Eigen::VectorXd& theta, bool with_hessian = true) const;
  double value(const Eigen::VectorXd& theta) const { return evaluate(theta, false).value; }

 private:
  struct Dyad {
    DyadPredictors predictors;
    int observed_state;
  };
  std::size_t dim_;
  std::vector<Dyad> dyads_;
};

// Probabilities of the four dyad states (null, i->j, j->i, mutual).
std::array<double, 4> dyad_state_probabilities(const DyadPredictors& dyad,
                                               const Eigen::VectorXd& theta);

// Newton-Raphson on the exact likelihood from theta = 0 with step halving.
// On separation the fit restarts with a ridge penalty and is flagged.
FitResult fit_exact(const DirectedNetwork& network, const AttributeTable& attrs,
                    const ModelSpec& model, const FitOptions& options = {});

// Logistic regression of the n(n-1) tie indicators on their change
// statistics, fitted by IRLS. Exact for models without Mutual.
FitResult fit_mple(const DirectedNetwork& network, const AttributeTable& attrs,
                   const ModelSpec& model, const FitOptions& options = {});

// Oracle: normalising constant by enumeration over all 2^(n(n-1)) graphs,
// n <= 4.
FitResult brute_force_mle(const DirectedNetwork& network, const AttributeTable& attrs,
                          const ModelSpec& model, const FitOptions& options = {});

// Log-likelihood at theta with the normalising constant enumerated.
double brute_force_log_likelihood(const DirectedNetwork& network, const AttributeTable& attrs,
                                  const ModelSpec& model, const Eigen::VectorXd& theta);

struct FilterOptions {
  double max_se = 10.0;
  bool require_converged = true;
  bool exclude_separated = true;
};

struct Exclusion {
  std::string network_id;
  std::string reason;
};

struct FilteredFits {
  // Grouped by term, in model order; each group in fit order.
  std::vector<std::string> terms;
  std::vector<std::vector<EffectObservation>> observations;
  std::vector<Exclusion> exclusions;
  std::size_t networks_in = 0;
};

// A network failing any filter is dropped for every term of the model.
// Throws EmptyPoolError when nothing survives.
FilteredFits filter_fits(const std::vector<FitResult>& fits, const FilterOptions& options = {});

}  // namespace ergmpool
