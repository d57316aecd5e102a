#include "ragalzp/parser.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <string_view>

#include "ragalzp/error.hpp"

namespace ragalzp {
namespace {

bool isSvaraLetter(char c) { return svaraLetterPosition(c) >= 0; }

int floorDiv(int a, int b) {
  const int q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

// Mathematical modulo into [0, b).
int floorMod(int a, int b) { return a - floorDiv(a, b) * b; }

// Letter of an event's pitch in this scale, or '?' for rests and pitches
// outside the vocabulary.
char letterOf(const NoteEvent& e, const RagaScale& scale) {
  if (e.isRestEvent()) return '?';
  return letterForBaseIndex(scale,
                            floorMod(e.pitch, scale.tonal_system.octave_span));
}

struct HeaderLine {
  std::string tala_name;
  int theta = 0;
};

// "tala: <name> beats: <theta>"
HeaderLine parseHeader(std::string_view line, std::size_t line_no) {
  const auto beats_pos = line.find("beats:");
  if (beats_pos == std::string_view::npos) {
    throw Error(ErrorCode::kBadConfig,
                "line " + std::to_string(line_no) +
                    ": tala header is missing 'beats:'");
  }
  HeaderLine header;
  std::string name(line.substr(5, beats_pos - 5));
  std::istringstream name_in(name);
  std::string word;
  while (name_in >> word) {
    if (!header.tala_name.empty()) header.tala_name += ' ';
    header.tala_name += word;
  }
  std::istringstream beats_in(std::string(line.substr(beats_pos + 6)));
  if (!(beats_in >> header.theta) || header.theta <= 0) {
    throw Error(ErrorCode::kBadConfig,
                "line " + std::to_string(line_no) +
                    ": tala header needs a positive beat count");
  }
  return header;
}

}  // namespace

int ParseOptions::jumpThreshold(const TonalSystem& ts) const {
  if (octave_jump_threshold) return *octave_jump_threshold;
  return ts.kind == TonalKind::kTwelveTonal ? 7 : 5;
}

int ParseOptions::clampLow(const TonalSystem& ts) const {
  return clamp_low ? *clamp_low : -ts.octave_span;
}

int ParseOptions::clampHigh(const TonalSystem& ts) const {
  return clamp_high ? *clamp_high : 2 * ts.octave_span;
}

std::vector<NoteEvent> resolveOctave(std::vector<NoteEvent> events,
                                     const RagaScale& scale,
                                     const ParseOptions& opts) {
  const TonalSystem& ts = scale.tonal_system;
  const int span = ts.octave_span;
  const int threshold = opts.jumpThreshold(ts);
  const int lo = opts.clampLow(ts);
  const int hi = opts.clampHigh(ts);

  int prev = 0;
  bool have_prev = false;
  for (NoteEvent& e : events) {
    if (e.isRestEvent()) continue;
    if (have_prev && std::abs(e.pitch - prev) > threshold) {
      // High notes fold down an octave, low notes fold up; Dha splits the
      // two regimes.
      e.pitch += e.pitch >= scale.dha_index ? -span : span;
    }
    e.pitch = std::clamp(e.pitch, lo, hi);
    prev = e.pitch;  // rests are skipped transitively by not updating this
    have_prev = true;
  }
  return events;
}

std::vector<NoteEvent> normalizeAvartana(std::vector<NoteEvent> measure_events,
                                         int theta) {
  double total = 0;
  for (const NoteEvent& e : measure_events) total += e.duration;
  if (total == 0) {
    throw Error(ErrorCode::kZeroDurationMeasure,
                "measure has zero total duration");
  }
  if (total > theta) {
    for (NoteEvent& e : measure_events) {
      e.duration = e.duration * theta / total;
    }
  }
  return measure_events;
}

std::vector<NoteEvent> relabelAnyaSvara(std::vector<NoteEvent> events,
                                        const RagaScale& scale) {
  const int span = scale.tonal_system.octave_span;
  for (const AnyaRule& rule : scale.anya_rules) {
    // prev1/prev2: indices of the closest and second-closest non-rest
    // events before the cursor.
    int prev1 = -1;
    int prev2 = -1;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (events[i].isRestEvent()) continue;
      if (prev1 >= 0 && prev2 >= 0 &&
          letterOf(events[i], scale) == rule.trigger[2] &&
          letterOf(events[prev1], scale) == rule.trigger[1] &&
          letterOf(events[prev2], scale) == rule.trigger[0]) {
        const int slots[3] = {prev2, prev1, static_cast<int>(i)};
        NoteEvent& hit = events[slots[rule.affected_position]];
        hit.pitch =
            rule.replacement_index + floorDiv(hit.pitch, span) * span;
      }
      prev2 = prev1;
      prev1 = static_cast<int>(i);
    }
  }
  return events;
}

Composition parseComposition(const std::string& text, const RagaScale& scale,
                             int theta, const ParseOptions& opts,
                             ParseReport* report) {
  Composition comp;
  comp.raga_id = scale.raga_id;

  ParseReport local_report;
  ParseReport& rep = report ? *report : local_report;
  rep = ParseReport{};

  std::optional<HeaderLine> header;
  std::vector<NoteEvent> events;
  // End offsets (into events) of each completed measure.
  std::vector<std::size_t> measure_ends;
  int measure = 0;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t col = 0;
    while (col < line.size() &&
           std::isspace(static_cast<unsigned char>(line[col]))) {
      ++col;
    }
    if (col >= line.size()) continue;
    if (line[col] == '#') continue;
    if (line.compare(col, 5, "tala:") == 0) {
      header = parseHeader(std::string_view(line).substr(col), line_no);
      continue;
    }

    while (col < line.size()) {
      const char c = line[col];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++col;
        continue;
      }
      if (c == '|') {
        if (col + 1 < line.size() && line[col + 1] == '|') {
          const std::size_t start =
              measure_ends.empty() ? 0 : measure_ends.back();
          if (events.size() == start) {
            throw Error(ErrorCode::kZeroDurationMeasure,
                        "line " + std::to_string(line_no) + ", column " +
                            std::to_string(col + 1) + ": empty avartana");
          }
          measure_ends.push_back(events.size());
          ++measure;
          col += 2;
        } else {
          ++col;  // single danda separates divisions, nothing to track
        }
        continue;
      }
      if (c == ';' || c == ',' || isSvaraLetter(c)) {
        std::size_t end = col + 1;
        if (isSvaraLetter(c)) {
          while (end < line.size() &&
                 (line[end] == '\'' || line[end] == '.')) {
            ++end;
          }
        }
        SvaraValue value;
        try {
          value = svaraToIndex(
              std::string_view(line).substr(col, end - col), scale);
        } catch (const Error& e) {
          throw Error(e.code(), "line " + std::to_string(line_no) +
                                    ", column " + std::to_string(col + 1) +
                                    ": " + e.what());
        }
        events.push_back(NoteEvent{value.pitch, value.duration, measure});
        col = end;
        continue;
      }
      throw Error(ErrorCode::kUnknownToken,
                  "line " + std::to_string(line_no) + ", column " +
                      std::to_string(col + 1) + ": unexpected character '" +
                      std::string(1, c) + "'");
    }
  }

  if (events.empty()) {
    throw Error(ErrorCode::kEmptyComposition, "no note events in input");
  }

  comp.theta = header ? header->theta : theta;
  if (comp.theta <= 0) {
    throw Error(ErrorCode::kBadConfig, "theta must be positive");
  }
  rep.theta = comp.theta;
  if (header) rep.tala_name = header->tala_name;
  rep.trailing_unterminated_measure =
      events.size() > (measure_ends.empty() ? 0 : measure_ends.back());

  events = resolveOctave(std::move(events), scale, opts);
  if (opts.apply_anya_rules) {
    events = relabelAnyaSvara(std::move(events), scale);
  }

  // Normalize each completed avartana in place; the trailing open measure
  // keeps its raw durations.
  std::size_t start = 0;
  for (std::size_t mi = 0; mi < measure_ends.size(); ++mi) {
    const std::size_t end = measure_ends[mi];
    std::vector<NoteEvent> slice(events.begin() + start,
                                 events.begin() + end);
    double total = 0;
    for (const NoteEvent& e : slice) total += e.duration;
    slice = normalizeAvartana(std::move(slice), comp.theta);
    if (total < comp.theta) {
      rep.underfull_measures.push_back(static_cast<int>(mi));
    }
    std::copy(slice.begin(), slice.end(), events.begin() + start);
    start = end;
  }

  comp.events = std::move(events);
  return comp;
}

}  // namespace ragalzp
