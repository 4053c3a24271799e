#pragma once

#include "tdt/actions.hpp"
#include "tdt/teset.hpp"

#include <cstdint>
#include <random>

namespace tdt {

struct GenParams {
  int situations = 4;
  int sensors = 2;
  int labels = 3;
  int values = 3;
  int actions = 3;
  bool random_priors = false;
  uint64_t seed = 0;
};

struct GenCase {
  TeSet teset;
  ActionModel model;
};

// Deterministic random instance. Action costs are built so that every action
// costs more than all actions below it combined, which keeps the default
// sum-of-members compound cost consistent with the order.
GenCase generate_case(const GenParams& params);

// Random sizes within the exhaustive-search limits.
GenParams random_small_params(std::mt19937_64& rng, uint64_t seed);

}  // namespace tdt
