// Note events, compositions and their CSV form.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ragalzp/raga.hpp"

namespace ragalzp {

// One notated event in the discrete (pitch, duration, measure) space.
struct NoteEvent {
  int pitch = 0;         // kRestPitch for rests
  double duration = 1;   // counts, > 0
  int measure = 0;       // non-decreasing across a composition

  bool isRestEvent() const { return isRest(pitch); }
};

struct Composition {
  std::vector<NoteEvent> events;
  std::string raga_id;
  int theta = 8;  // beats per avartana
  std::string source_name;
};

// CSV with header "a,b,c"; rests serialize their pitch as "inf"; durations
// use the shortest round-trip decimal form.
std::string emitCsv(const Composition& comp);
void emitCsv(const Composition& comp, std::ostream& out);

// Inverse of emitCsv for the (a,b,c) columns; raga_id/theta/source_name are
// not part of the CSV and are left for the caller.
Composition parseCsv(const std::string& csv_text);

Composition loadCsvFile(const std::string& path);
void writeCsvFile(const Composition& comp, const std::string& path);

}  // namespace ragalzp
