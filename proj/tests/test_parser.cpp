#include "ragalzp/parser.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "doctest.h"
#include "ragalzp/error.hpp"
#include "ragalzp/note.hpp"
#include "ragalzp/rng.hpp"

namespace {

using ragalzp::Composition;
using ragalzp::Error;
using ragalzp::ErrorCode;
using ragalzp::kRestPitch;
using ragalzp::NoteEvent;
using ragalzp::ParseOptions;
using ragalzp::ParseReport;
using ragalzp::parseComposition;
using ragalzp::RagaScale;
using ragalzp::ScaleDb;

ScaleDb& db() {
  static ScaleDb the_db = ScaleDb::loadFile("data/ragas.json");
  return the_db;
}

std::vector<NoteEvent> pitches(std::initializer_list<int> values) {
  std::vector<NoteEvent> events;
  for (int v : values) events.push_back(NoteEvent{v, 1.0, 0});
  return events;
}

ErrorCode codeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a ragalzp::Error");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_SUITE("parser") {

// Frozen from the avartana-normalization walkthrough: a 10-count phrase in
// an 8-beat cycle scales every duration by 0.8.
TEST_CASE("ten-count phrase normalizes to the eight-beat cycle") {
  const RagaScale& scale = db().lookup("15");
  ParseReport report;
  const Composition comp = parseComposition("G dsns d pdpP, g M P ;||",
                                            scale, 8, {}, &report);

  REQUIRE(comp.events.size() == 15);
  const std::vector<double> expected = {0.8, 0.4, 0.4, 0.4, 0.4,
                                        0.4, 0.4, 0.4, 0.4, 0.8,
                                        0.4, 0.4, 0.8, 0.8, 0.8};
  double total = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(comp.events[i].duration - expected[i]) < 1e-9);
    CHECK(comp.events[i].measure == 0);
    total += comp.events[i].duration;
  }
  CHECK(std::abs(total - 8.0) < 1e-9);

  // Pitches after octave resolution; the two "s" after high notes fold up.
  const std::vector<int> expected_pitch = {4,  8, 12, 11, 12, 8, 7, 8,
                                           7,  7, kRestPitch, 4, 5, 7,
                                           kRestPitch};
  for (std::size_t i = 0; i < expected_pitch.size(); ++i) {
    CAPTURE(i);
    CHECK(comp.events[i].pitch == expected_pitch[i]);
  }
  CHECK(report.underfull_measures.empty());
  CHECK(!report.trailing_unterminated_measure);
}

TEST_CASE("raw totals before normalization follow the case rule") {
  const RagaScale& scale = db().lookup("15");
  // No "||", so the trailing measure keeps raw durations.
  const Composition comp =
      parseComposition("G dsns d pdpP, g M P ;", scale, 8);
  double total = 0;
  for (const auto& e : comp.events) total += e.duration;
  CHECK(total == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("octave folding hand cases") {
  const RagaScale& scale = db().lookup("15");

  auto out = resolveOctave(pitches({0, 11}), scale);
  CHECK(out[1].pitch == -1);  // N >= Dha folds down

  out = resolveOctave(pitches({11, 0}), scale);
  CHECK(out[0].pitch == 11);
  CHECK(out[1].pitch == 12);  // S < Dha folds up

  auto events = pitches({0, 0, 2});
  events[1].pitch = kRestPitch;
  out = resolveOctave(events, scale);
  CHECK(out[0].pitch == 0);
  CHECK(out[2].pitch == 2);  // jump of 2 across the rest, no fold
}

TEST_CASE("octave folding clamps at the configured bounds") {
  const RagaScale& scale = db().lookup("15");
  ParseOptions opts;
  opts.clamp_low = -1;
  opts.clamp_high = 13;
  auto out = resolveOctave(pitches({0, 11, 31}), scale, opts);
  CHECK(out[1].pitch == -1);  // fold reaches -1 exactly, inside the clamp
  CHECK(out[2].pitch == 13);  // 31 folds to 19, clamp pulls it to the ceiling
}

TEST_CASE("under-full measures are flagged, not stretched") {
  const RagaScale& scale = db().lookup("15");
  ParseReport report;
  const Composition comp =
      parseComposition("S R G M ||", scale, 8, {}, &report);
  REQUIRE(comp.events.size() == 4);
  for (const auto& e : comp.events) CHECK(e.duration == 1.0);
  CHECK(report.underfull_measures == std::vector<int>{0});

  // At exactly theta the measure is neither scaled nor flagged.
  ParseReport exact;
  parseComposition("S R G M ||", scale, 4, {}, &exact);
  CHECK(exact.underfull_measures.empty());
}

TEST_CASE("measure indices increment at double danda only") {
  const RagaScale& scale = db().lookup("15");
  ParseReport report;
  const Composition comp =
      parseComposition("S | R || G M || P", scale, 8, {}, &report);
  const std::vector<int> measures = {0, 0, 1, 1, 2};
  REQUIRE(comp.events.size() == measures.size());
  for (std::size_t i = 0; i < measures.size(); ++i) {
    CHECK(comp.events[i].measure == measures[i]);
  }
  CHECK(report.trailing_unterminated_measure);
}

TEST_CASE("tala header wins over the argument") {
  const RagaScale& scale = db().lookup("15");
  ParseReport report;
  const Composition comp = parseComposition(
      "# a comment\ntala: Adi beats: 8\nS R G M P D N S' ||", scale, 4, {},
      &report);
  CHECK(comp.theta == 8);
  CHECK(report.theta == 8);
  CHECK(report.tala_name == "Adi");
  CHECK(comp.events.size() == 8);

  CHECK(codeOf([&] {
          parseComposition("tala: Adi\nS R ||", scale, 8);
        }) == ErrorCode::kBadConfig);
}

TEST_CASE("parse errors carry positions and codes") {
  const RagaScale& scale = db().lookup("15");
  try {
    parseComposition("S R\nG X ||", scale, 8);
    FAIL("expected UnknownToken");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownToken);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("column 3") != std::string::npos);
  }

  CHECK(codeOf([&] { parseComposition("# nothing\n", scale, 8); }) ==
        ErrorCode::kEmptyComposition);
  CHECK(codeOf([&] { parseComposition("S R || || G", scale, 8); }) ==
        ErrorCode::kZeroDurationMeasure);
  // Dhanyasi's arohana skips Ri but the avarohana supplies it; Hamsadhwani
  // has no Ma at all.
  CHECK(codeOf([&] {
          parseComposition("S M ||", db().lookup("29_h"), 8);
        }) == ErrorCode::kSvaraNotInScale);
}

TEST_CASE("anya relabeling rewrites the foreign Ni") {
  const RagaScale& kambhoji = db().lookup("28_k");

  auto out = relabelAnyaSvara(pitches({7, 10, 9}), kambhoji);
  CHECK(out[1].pitch == 11);

  auto with_rests = pitches({7, 0, 10, 0, 9});
  with_rests[1].pitch = kRestPitch;
  with_rests[3].pitch = kRestPitch;
  out = relabelAnyaSvara(with_rests, kambhoji);
  CHECK(out[2].pitch == 11);

  // No preceding Pa: untouched.
  out = relabelAnyaSvara(pitches({0, 10, 9}), kambhoji);
  CHECK(out[1].pitch == 10);

  // Lower octave keeps its octave: n at -2 becomes -1.
  out = relabelAnyaSvara(pitches({7 - 12, 10 - 12, 9 - 12}), kambhoji);
  CHECK(out[1].pitch == 11 - 12);

  // End to end through the parser.
  const Composition comp = parseComposition("p n d ||", kambhoji, 8);
  REQUIRE(comp.events.size() == 3);
  CHECK(comp.events[0].pitch == 7);
  CHECK(comp.events[1].pitch == 11);
  CHECK(comp.events[2].pitch == 9);

  // The melakarta parent has no anya rules, so nothing rewrites.
  const Composition plain = parseComposition("p n d ||", db().lookup("28"), 8);
  CHECK(plain.events[1].pitch == 10);
}

TEST_CASE("normalization is idempotent and ratio-preserving") {
  std::vector<NoteEvent> measure = {{0, 3.0, 0}, {1, 1.0, 0}, {2, 4.0, 0}};
  auto once = normalizeAvartana(measure, 4);
  CHECK(once[0].duration == doctest::Approx(1.5));
  CHECK(once[1].duration == doctest::Approx(0.5));
  CHECK(once[2].duration == doctest::Approx(2.0));
  auto twice = normalizeAvartana(once, 4);
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(twice[i].duration == once[i].duration);
  }
  CHECK(once[2].duration / once[1].duration ==
        doctest::Approx(4.0).epsilon(1e-12));

  CHECK(codeOf([&] { ragalzp::normalizeAvartana({}, 8); }) ==
        ErrorCode::kZeroDurationMeasure);
}

TEST_CASE("csv emission and round trip") {
  Composition comp;
  comp.events = {{4, 0.5, 1}, {kRestPitch, 1.0, 0}};
  const std::string csv = ragalzp::emitCsv(comp);
  CHECK(csv == "a,b,c\n4,0.5,1\ninf,1,0\n");

  comp.events.push_back({-3, 1.0 / 3.0, 2});
  comp.events.push_back({12, 1.0 / 7.0, 3});
  const Composition back = ragalzp::parseCsv(ragalzp::emitCsv(comp));
  REQUIRE(back.events.size() == comp.events.size());
  for (std::size_t i = 0; i < comp.events.size(); ++i) {
    CHECK(back.events[i].pitch == comp.events[i].pitch);
    CHECK(back.events[i].duration == comp.events[i].duration);  // bit-exact
    CHECK(back.events[i].measure == comp.events[i].measure);
  }

  CHECK(codeOf([&] { ragalzp::parseCsv("a,b,c\n1,not,0\n"); }) ==
        ErrorCode::kUnknownToken);
}

TEST_CASE("parsed pitches stay inside the scale vocabulary modulo octave") {
  const RagaScale& scale = db().lookup("22");
  const Composition comp = parseComposition(
      "S r g m P d n S' ||\ns' n d P m g r S ||", scale, 8);
  const auto vocab = ragalzp::vocabulary(scale);
  for (const auto& e : comp.events) {
    if (e.isRestEvent()) continue;
    const int base = ((e.pitch % 12) + 12) % 12;
    CHECK(std::find(vocab.begin(), vocab.end(), base) != vocab.end());
  }
}

}  // TEST_SUITE
