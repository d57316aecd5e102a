// Expansion of compositions into integer melody streams and the
// minimum-length windowing protocol.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ragalzp/note.hpp"
#include "ragalzp/rng.hpp"

namespace ragalzp {

// Rests map to this symbol in expanded streams; clamped pitches plus the
// octave transpose stay well below it.
constexpr int kRestSymbol = 100;

// Transpose added to every non-rest pitch so symbols are non-negative.
constexpr int kPitchTranspose = 36;

// Count multiplier before the ceiling; 32*3*5 keeps halves, triplets and
// fifth-beats integral.
constexpr int kDurationTicks = 480;

enum class Group { kMelakarta, kJanya };
enum class Origin { kOriginal, kSurrogate };

struct SequenceLabel {
  std::string composition_name;
  Group group = Group::kMelakarta;
  Origin origin = Origin::kOriginal;
  std::string raga_id;

  // Stable text form used for subseed derivation and display.
  std::string key() const;
};

struct SymbolSequence {
  std::vector<int> symbols;
  SequenceLabel label;
};

const char* groupName(Group g);
const char* originName(Origin o);

// Each event contributes ceil(480*duration) repetitions of (pitch + 36), or
// of kRestSymbol for rests, in event order.
SymbolSequence expand(const Composition& comp);
SymbolSequence expand(const Composition& comp, Group group, Origin origin);

// Shortest expanded length across the pool.
std::size_t poolMinLength(const std::vector<SymbolSequence>& pool);

// Contiguous window of exactly n_min symbols with a uniformly drawn start;
// the full sequence when the lengths match.
SymbolSequence sampleSubsequence(const SymbolSequence& seq, std::size_t n_min,
                                 Rng& rng);

// .seq format: one integer per line.
void writeSeqFile(const SymbolSequence& seq, const std::string& path);
SymbolSequence loadSeqFile(const std::string& path);

}  // namespace ragalzp
