#include "ragalzp/markov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "ragalzp/error.hpp"

namespace ragalzp {
namespace {

constexpr int kMaxStationaryIterations = 1000000;
constexpr double kStationaryTolerance = 1e-12;

bool isFaux(int pitch, const SurrogateConfig& cfg) {
  return pitch != kRestPitch && (pitch < cfg.core_low || pitch > cfg.core_high);
}

void validate(const SurrogateConfig& cfg) {
  if (cfg.n_events <= 0 || cfg.epsilon <= 0 || cfg.avartana_choices.empty() ||
      cfg.max_restarts <= 0) {
    throw Error(ErrorCode::kBadConfig,
                "surrogate config needs positive n_events, epsilon and "
                "max_restarts and at least one avartana choice");
  }
}

// Weighted draw from a transition row, optionally restricted to the core
// vocabulary. Returns false when the restriction empties the row.
bool drawFromRow(const std::map<int, double>& row, bool core_only,
                 const SurrogateConfig& cfg, Rng& rng, int* out) {
  std::vector<int> pitches;
  std::vector<double> weights;
  pitches.reserve(row.size());
  weights.reserve(row.size());
  for (const auto& [pitch, weight] : row) {
    if (core_only && isFaux(pitch, cfg)) continue;
    pitches.push_back(pitch);
    weights.push_back(weight);
  }
  if (pitches.empty()) return false;
  *out = pitches[rng.weightedIndex(weights)];
  return true;
}

}  // namespace

SurrogateConfig SurrogateConfig::withCoreBounds(const TonalSystem& ts) const {
  SurrogateConfig cfg = *this;
  const int fifth = ts.kind == TonalKind::kTwelveTonal ? 7 : 4;
  cfg.core_low = fifth - ts.octave_span;
  cfg.core_high = fifth + ts.octave_span;
  return cfg;
}

TransitionModel fit(const std::vector<Composition>& corpus, int order) {
  if (order < 1) {
    throw Error(ErrorCode::kOrderUnsupported, "order must be at least 1");
  }
  // One coalesced pitch stream; composition joins each contribute a
  // transition, by design.
  std::vector<int> stream;
  for (const Composition& comp : corpus) {
    for (const NoteEvent& e : comp.events) stream.push_back(e.pitch);
  }
  if (stream.size() <= static_cast<std::size_t>(order)) {
    throw Error(ErrorCode::kCorpusTooShort,
                "corpus has " + std::to_string(stream.size()) +
                    " events, need more than " + std::to_string(order));
  }

  TransitionModel model;
  model.order = order;
  std::map<Context, std::map<int, double>> counts;
  for (std::size_t i = 0; i + order < stream.size(); ++i) {
    const Context ctx(stream.begin() + i, stream.begin() + i + order);
    counts[ctx][stream[i + order]] += 1.0;
  }
  for (int pitch : stream) model.support.insert(pitch);

  for (auto& [ctx, row] : counts) {
    double total = 0;
    for (const auto& [pitch, count] : row) total += count;
    for (auto& [pitch, count] : row) count /= total;
    model.transitions.emplace(ctx, std::move(row));
  }
  return model;
}

StationaryDistribution stationary(const TransitionModel& model) {
  if (model.order != 1) {
    throw Error(ErrorCode::kOrderUnsupported,
                "stationary distribution is defined for order-1 models only");
  }
  const std::vector<int> states(model.support.begin(), model.support.end());
  const std::size_t n = states.size();
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[states[i]] = i;

  // Dense row copies; states with no outgoing observations self-loop so the
  // iteration operator stays stochastic.
  std::vector<std::vector<double>> rho(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = model.transitions.find(Context{states[i]});
    if (row == model.transitions.end()) {
      rho[i][i] = 1.0;
      continue;
    }
    for (const auto& [pitch, weight] : row->second) {
      rho[i][index.at(pitch)] = weight;
    }
  }

  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n, 0.0);
  for (int iteration = 0; iteration < kMaxStationaryIterations; ++iteration) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) next[j] += pi[i] * rho[i][j];
    }
    double l1 = 0;
    for (std::size_t j = 0; j < n; ++j) l1 += std::abs(next[j] - pi[j]);
    pi.swap(next);
    if (l1 < kStationaryTolerance) {
      StationaryDistribution dist;
      for (std::size_t j = 0; j < n; ++j) dist.probabilities[states[j]] = pi[j];
      return dist;
    }
  }
  throw Error(ErrorCode::kNonConvergence,
              "power iteration did not settle within " +
                  std::to_string(kMaxStationaryIterations) + " rounds");
}

double sampleDuration(Rng& rng, double mean, double sd) {
  double z = rng.normal(mean, sd);
  while (z <= 0.0) z = rng.normal(mean, sd);
  return std::ldexp(1.0, -static_cast<int>(std::floor(z)));
}

Composition generate(const TransitionModel& model,
                     const StationaryDistribution* pi,
                     const SurrogateConfig& cfg, Rng& rng) {
  validate(cfg);
  if (model.order == 1 && pi == nullptr) {
    throw Error(ErrorCode::kBadConfig,
                "order-1 generation needs a stationary distribution");
  }

  // Key selection: pi seeds the chain's starting state; higher orders start
  // from a uniformly chosen stored context.
  std::vector<int> pi_states;
  std::vector<double> pi_weights;
  if (pi != nullptr) {
    for (const auto& [pitch, probability] : pi->probabilities) {
      pi_states.push_back(pitch);
      pi_weights.push_back(probability);
    }
  }
  std::vector<const Context*> contexts;
  if (model.order > 1) {
    contexts.reserve(model.transitions.size());
    for (const auto& [ctx, row] : model.transitions) contexts.push_back(&ctx);
  }
  auto freshContext = [&]() -> Context {
    if (model.order == 1) {
      return Context{pi_states[rng.weightedIndex(pi_weights)]};
    }
    return *contexts[rng.index(contexts.size())];
  };

  Composition comp;
  const int tau =
      cfg.avartana_choices[rng.index(cfg.avartana_choices.size())];
  comp.theta = tau;

  Context ctx = freshContext();
  double run = 0.0;
  int measure = 0;
  int consecutive = 0;
  auto countRestart = [&] {
    if (++consecutive >= cfg.max_restarts) {
      throw Error(ErrorCode::kGenerationStalled,
                  std::to_string(cfg.max_restarts) +
                      " consecutive redraws at event " +
                      std::to_string(comp.events.size()));
    }
  };

  while (comp.events.size() < static_cast<std::size_t>(cfg.n_events)) {
    const auto row = model.transitions.find(ctx);
    bool trapped = false;
    for (int pitch : ctx) trapped |= isFaux(pitch, cfg);

    int pitch = 0;
    if (row == model.transitions.end() ||
        !drawFromRow(row->second, trapped, cfg, rng, &pitch)) {
      // Dead end (vocabulary trap with no way back, or an unseen context):
      // discard the slot and restart from a fresh key.
      countRestart();
      ctx = freshContext();
      continue;
    }

    const double duration = sampleDuration(rng, cfg.duration_mean,
                                           cfg.duration_sd);
    if (std::abs(run + duration - tau) <= cfg.epsilon) {
      comp.events.push_back(NoteEvent{pitch, duration, measure});
      ++measure;
      run = 0.0;
    } else if (run + duration > tau + cfg.epsilon) {
      // Overshot the cycle: delete the whole note event and redraw both
      // values; the context stays put.
      countRestart();
      continue;
    } else {
      comp.events.push_back(NoteEvent{pitch, duration, measure});
      run += duration;
    }
    consecutive = 0;
    ctx.erase(ctx.begin());
    ctx.push_back(pitch);
  }
  return comp;
}

std::vector<Composition> surrogatePool(const std::vector<Composition>& corpus,
                                       int count, const SurrogateConfig& cfg,
                                       std::uint64_t master_seed, int order) {
  std::vector<Composition> surrogates;
  if (count <= 0) return surrogates;

  const TransitionModel model = fit(corpus, order);
  StationaryDistribution pi;
  if (order == 1) pi = stationary(model);

  const std::string raga_id = corpus.front().raga_id;
  surrogates.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    Rng rng(deriveSeed(master_seed, "surr", idx));
    Composition comp =
        generate(model, order == 1 ? &pi : nullptr, cfg, rng);
    comp.raga_id = raga_id;
    comp.source_name = raga_id + "_surrogate_" + std::to_string(idx);
    surrogates.push_back(std::move(comp));
  }
  return surrogates;
}

}  // namespace ragalzp
