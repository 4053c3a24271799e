#include "tdt/gen.hpp"

namespace tdt {

namespace {

// std::uniform_int_distribution is implementation-defined; plain modulo keeps
// fixture seeds reproducible across toolchains.
int pick(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); }

}  // namespace

GenCase generate_case(const GenParams& params) {
  std::mt19937_64 rng(params.seed);
  GenCase out;

  ActionModel& model = out.model;
  for (int a = 0; a < params.actions; ++a) {
    model.base.names.push_back("a" + std::to_string(a));
  }
  std::vector<std::vector<bool>> direct(static_cast<size_t>(params.actions),
                                        std::vector<bool>(static_cast<size_t>(params.actions), false));
  for (int hi = 1; hi < params.actions; ++hi) {
    for (int lo = 0; lo < hi; ++lo) {
      if (pick(rng, 3) == 0) {
        direct[static_cast<size_t>(lo)][static_cast<size_t>(hi)] = true;
        model.base.declared_order.push_back({lo, hi});
      }
    }
  }
  model.base.compute_closure();
  for (int a = 0; a < params.actions; ++a) {
    Rational below_sum = 0;
    for (int b = 0; b < a; ++b) {
      if (model.base.below[static_cast<size_t>(b)][static_cast<size_t>(a)]) {
        below_sum += model.base.costs[static_cast<size_t>(b)];
      }
    }
    model.base.costs.push_back(below_sum + Rational(1 + pick(rng, 9)));
  }

  TeSet& ts = out.teset;
  std::vector<Rational> labels;
  for (int t = 0; t < params.labels; ++t) labels.push_back(Rational(t));
  ts.axis = TimeAxis(std::move(labels));
  for (int s = 0; s < params.sensors; ++s) ts.sensors.push_back("s" + std::to_string(s));
  for (int v = 0; v < params.values; ++v) ts.alphabet.push_back("v" + std::to_string(v));
  ts.nominal = 0;

  for (int i = 0; i < params.situations; ++i) {
    FaultSituation sit;
    sit.name = "sit" + std::to_string(i);
    sit.action = model.base.names[static_cast<size_t>(pick(rng, params.actions))];
    sit.deadline = pick(rng, params.labels);
    for (int s = 0; s < params.sensors; ++s) {
      std::vector<int> row;
      for (int t = 0; t <= sit.deadline; ++t) row.push_back(pick(rng, params.values));
      sit.readings.push_back(std::move(row));
    }
    ts.situations.push_back(std::move(sit));
  }
  if (params.random_priors) {
    for (FaultSituation& sit : ts.situations) {
      sit.declared_prior = Rational(1 + pick(rng, 20));
    }
    Rational sum = 0;
    for (FaultSituation& sit : ts.situations) sum += *sit.declared_prior;
    for (FaultSituation& sit : ts.situations) *sit.declared_prior /= sum;
  }
  ts.resolve_priors();
  return out;
}

GenParams random_small_params(std::mt19937_64& rng, uint64_t seed) {
  GenParams p;
  p.situations = 2 + pick(rng, 4);  // 2..5
  p.sensors = 1 + pick(rng, 3);     // 1..3
  p.labels = 2 + pick(rng, 3);      // 2..4
  p.values = 2 + pick(rng, 2);      // 2..3
  p.actions = 2 + pick(rng, 3);     // 2..4
  p.random_priors = pick(rng, 2) == 0;
  p.seed = seed;
  return p;
}

}  // namespace tdt
