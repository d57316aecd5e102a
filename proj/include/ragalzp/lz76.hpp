// Lempel-Ziv (1976) exhaustive-history complexity.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ragalzp/encoder.hpp"

namespace ragalzp {

struct ComplexityValue {
  int phrase_count = 0;
  // End offsets (exclusive) of each component, when requested.
  std::optional<std::vector<std::size_t>> parse_boundaries;
};

// Number of components in the exhaustive history: from each position the
// longest prefix that already occurs starting earlier (self-overlap allowed)
// is copied and extended by one fresh symbol; a copy running off the end
// closes the final component without a fresh symbol. Backed by a suffix
// automaton so long sequences parse in linear-ish time.
ComplexityValue lz76Complexity(std::span<const int> seq,
                               bool with_boundaries = false);

inline ComplexityValue lz76Complexity(const SymbolSequence& seq,
                                      bool with_boundaries = false) {
  return lz76Complexity(std::span<const int>(seq.symbols), with_boundaries);
}

// C(x||y): complexity of y given x's grammar, via the left-to-right stream
// identity -- no grammar object is materialized.
ComplexityValue conditionalComplexity(std::span<const int> x,
                                      std::span<const int> y);

inline ComplexityValue conditionalComplexity(const SymbolSequence& x,
                                             const SymbolSequence& y) {
  return conditionalComplexity(std::span<const int>(x.symbols),
                               std::span<const int>(y.symbols));
}

}  // namespace ragalzp
