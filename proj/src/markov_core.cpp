#include "specshare/markov_core.hpp"

namespace specshare {

Occupancy step(const ChannelParams& params, Occupancy current, RandomStream& rng) {
  return rng.bernoulli(params.q()) ? flipped(current) : current;
}

}  // namespace specshare
