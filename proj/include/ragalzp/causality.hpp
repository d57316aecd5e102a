// Pairwise causal direction from compression penalties, graph assembly,
// scoring, and Graphviz export.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ragalzp/encoder.hpp"

namespace ragalzp {

enum class Decision { kXCausesY, kYCausesX, kTie };

// Penalties for one unordered pair. The cheaper-to-explain direction wins;
// equal penalties mean unrelated-or-independent and produce no edge.
struct PenaltyPair {
  int p_xy = 0;
  int p_yx = 0;
  Decision decision = Decision::kTie;
};

struct CausalEdge {
  std::size_t cause = 0;
  std::size_t effect = 0;
  int margin = 0;  // winner's advantage, always > 0
};

struct CausalGraph {
  std::vector<SequenceLabel> nodes;
  std::vector<CausalEdge> edges;
  // Unordered tied pairs, stored with first < second.
  std::vector<std::pair<std::size_t, std::size_t>> ties;
  // Melakarta x Janya pair count, ties included.
  long long cross_pair_count = 0;
  // penalties[i][j] holds the penalty of explaining j from i; diagonal 0.
  std::vector<std::vector<int>> penalties;
  // Nontrivial strongly connected components (sorted node indices) --
  // diagnostics only, cycles are reported, never broken.
  std::vector<std::vector<std::size_t>> cyclic_components;
};

struct AccuracyStats {
  long long evaluated_pairs = 0;  // cross pairs, ties included
  long long correct_edges = 0;    // cross edges oriented Melakarta -> Janya
  double accuracy_pct = 0.0;
  long long tie_count = 0;        // cross ties
};

// Extra phrases needed to parse y as a continuation of x's stream,
// relative to parsing y alone.
int penalty(std::span<const int> x, std::span<const int> y);

inline int penalty(const SymbolSequence& x, const SymbolSequence& y) {
  return penalty(std::span<const int>(x.symbols),
                 std::span<const int>(y.symbols));
}

PenaltyPair direction(std::span<const int> x, std::span<const int> y);

inline PenaltyPair direction(const SymbolSequence& x, const SymbolSequence& y) {
  return direction(std::span<const int>(x.symbols),
                   std::span<const int>(y.symbols));
}

// Evaluates every unordered pair of the pool. All sequences must share one
// length. Pair evaluations fan out across workers (0 = hardware concurrency)
// but results are assembled in canonical pair order, so the graph is
// byte-identical regardless of scheduling.
CausalGraph buildGraph(const std::vector<SymbolSequence>& pool,
                       int workers = 0);

// Scores cross edges only; intra-group edges stay in the graph but are
// invisible here.
AccuracyStats causalAccuracy(const CausalGraph& graph);

enum class Orientation { kTopDown, kLeftRight };

std::string toDot(const CausalGraph& graph,
                  Orientation orientation = Orientation::kTopDown);

}  // namespace ragalzp
