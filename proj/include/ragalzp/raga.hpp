// Pitch-index systems, the raga scale database, and svara-token resolution.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ragalzp {

// Rests are a distinguished pitch, kept orderable after every real pitch so
// state listings put them last. Real pitches stay well below this.
constexpr int kRestPitch = 999;

inline bool isRest(int pitch) { return pitch == kRestPitch; }

enum class TonalKind { kSevenTonal, kTwelveTonal };

struct TonalSystem {
  TonalKind kind = TonalKind::kTwelveTonal;
  int octave_span = 12;

  static TonalSystem sevenTonal() { return {TonalKind::kSevenTonal, 7}; }
  static TonalSystem twelveTonal() { return {TonalKind::kTwelveTonal, 12}; }
};

// A foreign-note rule: when the svara letters trigger[0], trigger[1],
// trigger[2] occur in order (rests allowed in between), the event at
// affected_position is relabeled to replacement_index.
struct AnyaRule {
  std::array<char, 3> trigger = {'P', 'N', 'D'};
  int affected_position = 1;
  int replacement_index = 11;
};

struct RagaScale {
  std::string raga_id;
  std::string name;
  int melakarta_index = 0;
  TonalSystem tonal_system;
  std::vector<int> arohana;    // base indices in notated (ascending) order
  std::vector<int> avarohana;  // base indices in notated (descending) order
  std::vector<AnyaRule> anya_rules;
  bool seven_tonal_fallback = false;

  // Resolved base index per svara letter position (S R G M P D N), -1 when the
  // letter does not occur in this scale, -2 when it is ambiguous.
  std::array<int, 7> letter_index = {-1, -1, -1, -1, -1, -1, -1};

  // Base index of Dha, used as the octave-heuristic pivot; defaults to the
  // generic Dha position when the scale omits it.
  int dha_index = 8;
};

// Position of a letter within S R G M P D N, or -1.
int svaraLetterPosition(char letter);

// The seven letters in scale order.
char svaraLetterAt(int position);

// Base index of a database token such as "S", "R1", "N3" in the twelve-tonal
// system (octave marks "'" and "." are accepted and ignored). Throws
// Error(kBadScaleDatabase) for malformed tokens.
int twelveTonalIndex(std::string_view token);

// Sorted, deduplicated union of arohana, avarohana and anya replacements.
std::vector<int> vocabulary(const RagaScale& scale);

// Letter for a base index of this scale (vocabulary or anya replacement).
// Returns '?' for indices outside the scale.
char letterForBaseIndex(const RagaScale& scale, int base_index);

struct SvaraValue {
  int pitch = 0;        // kRestPitch for rests
  double duration = 1;  // counts: 1 for capitals and ";", 0.5 otherwise
};

// Resolves one notation token (svara letter with optional octave marks, or a
// rest mark) against a scale. Letter case selects the duration. Octave marks:
// "'" raises and "." lowers by one octave each.
SvaraValue svaraToIndex(std::string_view token, const RagaScale& scale);

class ScaleDb {
 public:
  static ScaleDb loadFile(const std::string& path);
  static ScaleDb loadJsonText(const std::string& json_text);

  // Seven-tonal letters map straight to 0..6; used when a raga is missing
  // from the database and the caller opted into the fallback.
  static RagaScale genericSevenTonal(const std::string& raga_id);

  const RagaScale& lookup(const std::string& raga_id) const;

  // With allow_seven_tonal_fallback, an unknown id yields a generic
  // seven-tonal scale whose seven_tonal_fallback flag is set so callers can
  // surface the downgrade; otherwise Error(kUnknownRaga).
  const RagaScale& lookup(const std::string& raga_id,
                          bool allow_seven_tonal_fallback);

  const std::map<std::string, RagaScale>& ragas() const { return ragas_; }

 private:
  std::map<std::string, RagaScale> ragas_;
  std::map<std::string, RagaScale> fallbacks_;
};

}  // namespace ragalzp
