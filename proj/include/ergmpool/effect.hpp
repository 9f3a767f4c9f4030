#pragma once

#include <string>

namespace ergmpool {

// One per-network coefficient estimate: the pooling model's data point.
struct EffectObservation {
  std::string network_id;
  std::string country;
  std::string term;
  double estimate = 0.0;
  double std_error = 1.0;
};

}  // namespace ergmpool
