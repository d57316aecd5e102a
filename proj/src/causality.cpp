#include "ragalzp/causality.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "ragalzp/error.hpp"
#include "ragalzp/lz76.hpp"

namespace ragalzp {
namespace {

// Nontrivial strongly connected components of the edge set, as sorted index
// lists in canonical order. Iterative Tarjan; recursion depth would be
// unbounded on long penalty chains.
std::vector<std::vector<std::size_t>> nontrivialSccs(
    std::size_t n, const std::vector<CausalEdge>& edges) {
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (const CausalEdge& e : edges) adjacency[e.cause].push_back(e.effect);

  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), lowlink(n);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t next_index = 0;

  struct Frame {
    std::size_t node;
    std::size_t edge_pos;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& frame = frames.back();
      const std::size_t v = frame.node;
      if (frame.edge_pos < adjacency[v].size()) {
        const std::size_t w = adjacency[v][frame.edge_pos++];
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      } else {
        if (lowlink[v] == index[v]) {
          std::vector<std::size_t> component;
          for (;;) {
            const std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            component.push_back(w);
            if (w == v) break;
          }
          if (component.size() > 1) {
            std::sort(component.begin(), component.end());
            components.push_back(std::move(component));
          }
        }
        frames.pop_back();
        if (!frames.empty()) {
          lowlink[frames.back().node] =
              std::min(lowlink[frames.back().node], lowlink[v]);
        }
      }
    }
  }
  std::sort(components.begin(), components.end());
  return components;
}

}  // namespace

int penalty(std::span<const int> x, std::span<const int> y) {
  return conditionalComplexity(x, y).phrase_count -
         lz76Complexity(y).phrase_count;
}

PenaltyPair direction(std::span<const int> x, std::span<const int> y) {
  PenaltyPair pair;
  pair.p_xy = penalty(x, y);
  pair.p_yx = penalty(y, x);
  if (pair.p_xy < pair.p_yx) {
    pair.decision = Decision::kXCausesY;
  } else if (pair.p_yx < pair.p_xy) {
    pair.decision = Decision::kYCausesX;
  } else {
    pair.decision = Decision::kTie;
  }
  return pair;
}

CausalGraph buildGraph(const std::vector<SymbolSequence>& pool, int workers) {
  const std::size_t n = pool.size();
  if (n == 0) {
    throw Error(ErrorCode::kEmptyPool, "cannot build a graph from no pool");
  }
  const std::size_t len = pool.front().symbols.size();
  for (const SymbolSequence& seq : pool) {
    if (seq.symbols.size() != len) {
      throw Error(ErrorCode::kLengthMismatch,
                  "sequence " + seq.label.key() + " has length " +
                      std::to_string(seq.symbols.size()) + ", expected " +
                      std::to_string(len));
    }
  }

  CausalGraph graph;
  graph.nodes.reserve(n);
  for (const SymbolSequence& seq : pool) graph.nodes.push_back(seq.label);
  graph.penalties.assign(n, std::vector<int>(n, 0));

  // Task list: n solo complexities, then the ordered concatenations. Tasks
  // write disjoint slots, so workers need no locks; assembly below walks
  // pairs in index order, making the result scheduling independent.
  std::vector<int> solo(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> ordered_pairs;
  ordered_pairs.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) ordered_pairs.emplace_back(i, j);
    }
  }

  const std::size_t task_count = n + ordered_pairs.size();
  auto runTask = [&](std::size_t task) {
    if (task < n) {
      solo[task] = lz76Complexity(std::span<const int>(pool[task].symbols))
                       .phrase_count;
      return;
    }
    const auto [i, j] = ordered_pairs[task - n];
    graph.penalties[i][j] =
        conditionalComplexity(std::span<const int>(pool[i].symbols),
                              std::span<const int>(pool[j].symbols))
            .phrase_count;
  };

  unsigned thread_count = workers > 0
                              ? static_cast<unsigned>(workers)
                              : std::max(1u, std::thread::hardware_concurrency());
  thread_count = std::min<unsigned>(thread_count, task_count);
  if (thread_count <= 1) {
    for (std::size_t t = 0; t < task_count; ++t) runTask(t);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) {
      threads.emplace_back([&] {
        for (;;) {
          const std::size_t task = cursor.fetch_add(1);
          if (task >= task_count) return;
          runTask(task);
        }
      });
    }
    for (std::thread& t : threads) t.join();
  }

  // Turn joint complexities into penalties: explaining j after i costs the
  // concatenated parse minus j's own parse.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) graph.penalties[i][j] -= solo[j];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int p_ij = graph.penalties[i][j];
      const int p_ji = graph.penalties[j][i];
      if (p_ij < p_ji) {
        graph.edges.push_back({i, j, p_ji - p_ij});
      } else if (p_ji < p_ij) {
        graph.edges.push_back({j, i, p_ij - p_ji});
      } else {
        graph.ties.emplace_back(i, j);
      }
    }
  }

  long long melakarta = 0, janya = 0;
  for (const SequenceLabel& label : graph.nodes) {
    (label.group == Group::kMelakarta ? melakarta : janya) += 1;
  }
  graph.cross_pair_count = melakarta * janya;

  graph.cyclic_components = nontrivialSccs(n, graph.edges);
  return graph;
}

AccuracyStats causalAccuracy(const CausalGraph& graph) {
  if (graph.cross_pair_count == 0) {
    throw Error(ErrorCode::kNoCrossPairs,
                "graph has no melakarta-janya pairs to score");
  }
  AccuracyStats stats;
  stats.evaluated_pairs = graph.cross_pair_count;
  for (const CausalEdge& e : graph.edges) {
    if (graph.nodes[e.cause].group == Group::kMelakarta &&
        graph.nodes[e.effect].group == Group::kJanya) {
      ++stats.correct_edges;
    }
  }
  for (const auto& [a, b] : graph.ties) {
    if (graph.nodes[a].group != graph.nodes[b].group) ++stats.tie_count;
  }
  stats.accuracy_pct =
      100.0 * static_cast<double>(stats.correct_edges) /
      static_cast<double>(stats.evaluated_pairs);
  return stats;
}

std::string toDot(const CausalGraph& graph, Orientation orientation) {
  // Node ids M1..Mk / J1..Jk in node order; the human-readable key becomes
  // the label attribute.
  std::vector<std::string> ids(graph.nodes.size());
  std::size_t next_m = 0, next_j = 0;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const bool mela = graph.nodes[i].group == Group::kMelakarta;
    ids[i] = (mela ? "M" : "J") +
             std::to_string(mela ? ++next_m : ++next_j);
  }

  std::string dot = "digraph causal {\n";
  dot += orientation == Orientation::kTopDown ? "  rankdir=TB;\n"
                                              : "  rankdir=LR;\n";
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    dot += "  " + ids[i] + " [label=\"" + graph.nodes[i].key() + "\"";
    if (graph.nodes[i].group == Group::kMelakarta) {
      dot += ", style=filled, fillcolor=black, fontcolor=white";
    }
    dot += "];\n";
  }
  for (const CausalEdge& e : graph.edges) {
    dot += "  " + ids[e.cause] + " -> " + ids[e.effect] + ";\n";
  }
  for (const auto& [a, b] : graph.ties) {
    dot += "  // tie: " + ids[a] + " and " + ids[b] + "\n";
  }
  dot += "}\n";
  return dot;
}

}  // namespace ragalzp
