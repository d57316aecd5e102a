// Plain-text notation parser: svara stream to measure-tracked note events.
//
// Grammar of a notation document:
//   - "#" starts a comment line; an optional header line "tala: <name>
//     beats: <theta>" pins the avartana length.
//   - Svara letters S R G M P D N (capitals = 1 count, smalls = 1/2 count),
//     each optionally followed by octave marks "'" (up) or "." (down).
//   - ";" is a 1-count rest, "," a 1/2-count rest.
//   - "||" ends an avartana (the measure counter increments); a single "|"
//     only separates divisions and is ignored.
// Whitespace and newlines separate nothing semantically; letters may be
// packed together ("dsns").

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ragalzp/note.hpp"
#include "ragalzp/raga.hpp"

namespace ragalzp {

struct ParseOptions {
  // Jump threshold in scale indices; unset picks 7 (twelve-tonal) or 5
  // (seven-tonal), the same musical interval either way.
  std::optional<int> octave_jump_threshold;
  // Clamp bounds; unset picks [-span, +2*span] around the base octave.
  std::optional<int> clamp_low;
  std::optional<int> clamp_high;
  bool apply_anya_rules = true;

  int jumpThreshold(const TonalSystem& ts) const;
  int clampLow(const TonalSystem& ts) const;
  int clampHigh(const TonalSystem& ts) const;
};

struct ParseReport {
  // Measures whose duration total fell short of theta (kept unstretched).
  std::vector<int> underfull_measures;
  bool trailing_unterminated_measure = false;
  // Theta actually used (header wins over the argument when present).
  int theta = 0;
  std::string tala_name;
};

// Full pipeline: tokenize, resolve octaves, apply anya relabeling, normalize
// each completed avartana. theta is the fallback when the document carries no
// header. Errors carry line/column positions for bad tokens.
Composition parseComposition(const std::string& text, const RagaScale& scale,
                             int theta, const ParseOptions& opts = {},
                             ParseReport* report = nullptr);

// Octave resolution pass: any pitch jumping more than the threshold from the
// previous non-rest pitch is folded an octave toward it (down from Dha and
// above, up below Dha), then clamped. Left-to-right, deterministic.
std::vector<NoteEvent> resolveOctave(std::vector<NoteEvent> events,
                                     const RagaScale& scale,
                                     const ParseOptions& opts = {});

// Normalizes one measure's durations to sum to theta when they exceed it
// (ratios preserved); under-full measures are returned unchanged.
std::vector<NoteEvent> normalizeAvartana(std::vector<NoteEvent> measure_events,
                                         int theta);

// Rewrites foreign-note occurrences per the scale's anya rules: for a
// (P, N, D) rule, every D whose two preceding non-rest letters are N then P
// gets that N relabeled to the replacement index in the same octave.
std::vector<NoteEvent> relabelAnyaSvara(std::vector<NoteEvent> events,
                                        const RagaScale& scale);

}  // namespace ragalzp
