#include "mmwmac/rng.hpp"

#include <boost/random/poisson_distribution.hpp>

namespace mmwmac {

std::uint64_t CounterRng::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  // Boost's sampler is fixed code, unlike std::poisson_distribution whose
  // algorithm varies between standard libraries.
  boost::random::poisson_distribution<std::uint64_t, double> dist(mean);
  return dist(*this);
}

}  // namespace mmwmac
