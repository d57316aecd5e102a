// Order-k Markov models over pitch streams, stationary distributions, and
// surrogate composition generation.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "ragalzp/note.hpp"
#include "ragalzp/raga.hpp"
#include "ragalzp/rng.hpp"

namespace ragalzp {

// k most recent pitches, oldest first. REST participates as kRestPitch.
using Context = std::vector<int>;

struct TransitionModel {
  int order = 1;
  // Observed contexts only; absent rows mean "never seen", not zero.
  // Each row's weights are normalized to sum to 1.
  std::map<Context, std::map<int, double>> transitions;
  std::set<int> support;
};

struct StationaryDistribution {
  std::map<int, double> probabilities;
};

struct SurrogateConfig {
  int n_events = 1000;
  double epsilon = 0x1p-7;  // slack for landing a measure on its cycle length
  std::vector<int> avartana_choices = {6, 7, 8, 10, 12, 14, 16};
  double duration_mean = 2.0;
  double duration_sd = 1.0;
  // Consecutive discarded draws tolerated per event slot before giving up.
  int max_restarts = 10000;
  // Pitches outside [core_low, core_high] are parsing artifacts ("faux"
  // vocabulary); generation steers away from them. REST is always core.
  // Defaults span one octave around the fifth in the twelve-tonal system.
  int core_low = -5;
  int core_high = 19;

  // Same config with core bounds recentred for the given tonal system.
  SurrogateConfig withCoreBounds(const TonalSystem& ts) const;
};

// Coalesces the corpus into one pitch stream (rests included) and counts
// context -> next transitions. Compositions join seamlessly, so each join
// contributes one transition.
TransitionModel fit(const std::vector<Composition>& corpus, int order);

// Fixed point of the transition model, via power iteration from the uniform
// vector. Order-1 only.
StationaryDistribution stationary(const TransitionModel& model);

// 2^(-floor(z)) for z drawn from Normal(mean, sd) conditioned on z > 0.
// Support is the non-positive powers of two: 1, 1/2, 1/4, ...
double sampleDuration(Rng& rng, double mean = 2.0, double sd = 1.0);

// One surrogate composition with exactly cfg.n_events events. pi seeds the
// first key for order-1 models (may be null for k >= 2, which starts from a
// uniformly chosen stored context). The cycle length is drawn once from
// cfg.avartana_choices; an event landing within epsilon of it closes the
// measure, an overshoot discards the event, and faux-pitch contexts either
// steer into the core vocabulary or restart from pi.
Composition generate(const TransitionModel& model,
                     const StationaryDistribution* pi,
                     const SurrogateConfig& cfg, Rng& rng);

// Fits the corpus once and generates `count` surrogates, each from a subseed
// of (master_seed, index) so any prefix of the pool is reproducible.
std::vector<Composition> surrogatePool(const std::vector<Composition>& corpus,
                                       int count, const SurrogateConfig& cfg,
                                       std::uint64_t master_seed,
                                       int order = 1);

}  // namespace ragalzp
