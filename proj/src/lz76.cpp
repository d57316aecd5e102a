#include "ragalzp/lz76.hpp"

#include <cstddef>
#include <map>
#include <vector>

#include "ragalzp/error.hpp"

namespace ragalzp {
namespace {

// Suffix automaton over int symbols, carrying the end index of each state's
// first occurrence. One automaton is built per scored sequence; the parse
// then replays the sequence against it.
class SuffixAutomaton {
 public:
  explicit SuffixAutomaton(std::span<const int> s) {
    states_.reserve(2 * s.size() + 2);
    states_.push_back(State{-1, 0, 0, {}});
    int last = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      last = extend(last, s[i], static_cast<int>(i));
    }
  }

  // Largest L such that s[i..i+L) occurs starting strictly before i
  // (self-overlap allowed). The acceptance test per extension: the first
  // occurrence of the matched string must start before i. That condition is
  // monotone in the match length, so the greedy walk can stop at the first
  // refusal.
  std::size_t longestEarlierMatch(std::span<const int> s,
                                  std::size_t i) const {
    int v = 0;
    std::size_t len = 0;
    while (i + len < s.size()) {
      const auto it = states_[v].next.find(s[i + len]);
      if (it == states_[v].next.end()) break;
      const State& w = states_[it->second];
      const std::size_t grown = len + 1;
      // first-occurrence start = firstpos - grown + 1; require < i.
      if (static_cast<std::size_t>(w.firstpos) + 1 >= i + grown) break;
      v = it->second;
      len = grown;
    }
    return len;
  }

 private:
  struct State {
    int link;
    int len;
    int firstpos;  // index of the last symbol of the first occurrence
    std::map<int, int> next;
  };

  int extend(int last, int c, int pos) {
    const int cur = static_cast<int>(states_.size());
    states_.push_back(State{-1, states_[last].len + 1, pos, {}});
    int p = last;
    while (p != -1 && !states_[p].next.contains(c)) {
      states_[p].next.emplace(c, cur);
      p = states_[p].link;
    }
    if (p == -1) {
      states_[cur].link = 0;
      return cur;
    }
    const int q = states_[p].next.at(c);
    if (states_[p].len + 1 == states_[q].len) {
      states_[cur].link = q;
      return cur;
    }
    // Clone q for the shorter strings; the clone inherits q's first
    // occurrence since its extra end positions are all newer.
    const int clone = static_cast<int>(states_.size());
    states_.push_back(State{states_[q].link, states_[p].len + 1,
                            states_[q].firstpos, states_[q].next});
    while (p != -1) {
      const auto it = states_[p].next.find(c);
      if (it == states_[p].next.end() || it->second != q) break;
      it->second = clone;
      p = states_[p].link;
    }
    states_[q].link = clone;
    states_[cur].link = clone;
    return cur;
  }

  std::vector<State> states_;
};

}  // namespace

ComplexityValue lz76Complexity(std::span<const int> seq,
                               bool with_boundaries) {
  if (seq.empty()) {
    throw Error(ErrorCode::kEmptySequence,
                "lz76Complexity: empty sequence");
  }
  ComplexityValue out;
  if (with_boundaries) out.parse_boundaries.emplace();
  const SuffixAutomaton sam(seq);
  const std::size_t n = seq.size();
  std::size_t i = 0;
  while (i < n) {
    const std::size_t copied = sam.longestEarlierMatch(seq, i);
    ++out.phrase_count;
    i += copied + 1;  // copied run + one fresh symbol; last run may lack it
    if (with_boundaries) out.parse_boundaries->push_back(std::min(i, n));
  }
  return out;
}

ComplexityValue conditionalComplexity(std::span<const int> x,
                                      std::span<const int> y) {
  if (x.empty() || y.empty()) {
    throw Error(ErrorCode::kEmptySequence,
                "conditionalComplexity: empty sequence");
  }
  std::vector<int> joint;
  joint.reserve(x.size() + y.size());
  joint.insert(joint.end(), x.begin(), x.end());
  joint.insert(joint.end(), y.begin(), y.end());
  return lz76Complexity(joint);
}

}  // namespace ragalzp
