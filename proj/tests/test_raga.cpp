#include "ragalzp/raga.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "ragalzp/error.hpp"

namespace {

using ragalzp::Error;
using ragalzp::ErrorCode;
using ragalzp::RagaScale;
using ragalzp::ScaleDb;
using ragalzp::svaraToIndex;
using ragalzp::twelveTonalIndex;
using ragalzp::vocabulary;

ScaleDb& bundledDb() {
  static ScaleDb db = ScaleDb::loadFile("data/ragas.json");
  return db;
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

TEST_SUITE("raga") {

TEST_CASE("twelve-tonal token table") {
  CHECK(twelveTonalIndex("S") == 0);
  CHECK(twelveTonalIndex("R1") == 1);
  CHECK(twelveTonalIndex("R2") == 2);
  CHECK(twelveTonalIndex("R3") == 3);
  CHECK(twelveTonalIndex("G1") == 2);
  CHECK(twelveTonalIndex("G2") == 3);
  CHECK(twelveTonalIndex("G3") == 4);
  CHECK(twelveTonalIndex("M1") == 5);
  CHECK(twelveTonalIndex("M2") == 6);
  CHECK(twelveTonalIndex("P") == 7);
  CHECK(twelveTonalIndex("D1") == 8);
  CHECK(twelveTonalIndex("D2") == 9);
  CHECK(twelveTonalIndex("D3") == 10);
  CHECK(twelveTonalIndex("N1") == 9);
  CHECK(twelveTonalIndex("N2") == 10);
  CHECK(twelveTonalIndex("N3") == 11);
  CHECK(twelveTonalIndex("S'") == 0);   // octave marks are ignored here
  CHECK(twelveTonalIndex("N3.") == 11);
  CHECK_THROWS_AS(twelveTonalIndex("S1"), const Error&);
  CHECK_THROWS_AS(twelveTonalIndex("M3"), const Error&);
  CHECK_THROWS_AS(twelveTonalIndex("R"), const Error&);
  CHECK_THROWS_AS(twelveTonalIndex("X2"), const Error&);
  CHECK_THROWS_AS(twelveTonalIndex(""), const Error&);
}

TEST_CASE("bundled database scales") {
  const RagaScale& m15 = bundledDb().lookup("15");
  CHECK(sorted(m15.arohana) == std::vector<int>{0, 1, 4, 5, 7, 8, 11});
  CHECK(m15.melakarta_index == 15);

  const RagaScale& malahari = bundledDb().lookup("15_m");
  CHECK(sorted(malahari.arohana) == std::vector<int>{0, 1, 5, 7, 8});
  CHECK(sorted(malahari.avarohana) == std::vector<int>{0, 1, 4, 5, 7, 8});
  CHECK(vocabulary(malahari) == std::vector<int>{0, 1, 4, 5, 7, 8});
}

TEST_CASE("anya replacement joins the vocabulary") {
  const RagaScale& kambhoji = bundledDb().lookup("28_k");
  const auto vocab = vocabulary(kambhoji);
  CHECK(std::count(vocab.begin(), vocab.end(), 11) == 1);
  CHECK(std::count(vocab.begin(), vocab.end(), 10) == 1);
  // The letter N itself still resolves to the scale's own N2.
  CHECK(svaraToIndex("N", kambhoji).pitch == 10);
  REQUIRE(kambhoji.anya_rules.size() == 1);
  CHECK(kambhoji.anya_rules[0].replacement_index == 11);
  CHECK(kambhoji.anya_rules[0].affected_position == 1);
}

TEST_CASE("every bundled raga resolves all its letters uniquely") {
  for (const auto& [id, scale] : bundledDb().ragas()) {
    CAPTURE(id);
    for (int pos = 0; pos < 7; ++pos) {
      CHECK(scale.letter_index[pos] != -2);
    }
    const auto vocab = vocabulary(scale);
    CHECK(!vocab.empty());
    CHECK(vocab.front() >= 0);
    CHECK(vocab.back() < 12);
    CHECK(std::is_sorted(vocab.begin(), vocab.end()));
    CHECK(std::count(vocab.begin(), vocab.end(), 0) == 1);
  }
  CHECK(bundledDb().ragas().size() == 11);
}

TEST_CASE("svara resolution carries case and octave") {
  const RagaScale& m15 = bundledDb().lookup("15");
  CHECK(svaraToIndex("G", m15).pitch == 4);
  CHECK(svaraToIndex("G", m15).duration == 1.0);
  CHECK(svaraToIndex("s", m15).pitch == 0);
  CHECK(svaraToIndex("s", m15).duration == 0.5);
  CHECK(svaraToIndex("S'", m15).pitch == 12);
  CHECK(svaraToIndex("n.", m15).pitch == 11 - 12);
  CHECK(svaraToIndex(";", m15).pitch == ragalzp::kRestPitch);
  CHECK(svaraToIndex(";", m15).duration == 1.0);
  CHECK(svaraToIndex(",", m15).duration == 0.5);
  CHECK_THROWS_AS(svaraToIndex("Q", m15), const Error&);
}

TEST_CASE("absent and ambiguous letters are rejected") {
  const RagaScale& hamsadhwani = bundledDb().lookup("29_h");
  // Hamsadhwani omits Ma and Dha entirely.
  CHECK_THROWS_AS(svaraToIndex("M", hamsadhwani), const Error&);
  CHECK_THROWS_AS(svaraToIndex("d", hamsadhwani), const Error&);

  ScaleDb twisted = ScaleDb::loadJsonText(R"({"ragas": [{
    "id": "x", "melakarta": 1, "tonal_system": "twelve",
    "arohana": ["S", "R1", "P"], "avarohana": ["P", "R2", "S"]
  }]})");
  try {
    svaraToIndex("R", twisted.lookup("x"));
    FAIL("expected AmbiguousSvara");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAmbiguousSvara);
  }
}

TEST_CASE("unknown raga and the seven-tonal fallback") {
  CHECK_THROWS_AS(bundledDb().lookup("99_z"), const Error&);

  ScaleDb db = ScaleDb::loadFile("data/ragas.json");
  const RagaScale& generic = db.lookup("99_z", true);
  CHECK(generic.seven_tonal_fallback);
  CHECK(generic.tonal_system.octave_span == 7);
  CHECK(svaraToIndex("N", generic).pitch == 6);
  CHECK(svaraToIndex("D", generic).pitch == 5);
  CHECK(generic.dha_index == 5);
}

TEST_CASE("malformed databases are rejected with BadScaleDatabase") {
  const auto expectBad = [](const std::string& text) {
    try {
      ScaleDb::loadJsonText(text);
      FAIL("expected BadScaleDatabase");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kBadScaleDatabase);
    }
  };
  expectBad("{not json");
  expectBad(R"({"ragas": [{"id": "x", "tonal_system": "nine",
               "arohana": ["S"], "avarohana": ["S"]}]})");
  // Missing Sa.
  expectBad(R"({"ragas": [{"id": "x", "tonal_system": "twelve",
               "arohana": ["R1"], "avarohana": ["R1"]}]})");
  // Replacement equal to the scale's own index for that letter.
  expectBad(R"({"ragas": [{"id": "x", "tonal_system": "twelve",
               "arohana": ["S", "P", "N2"], "avarohana": ["S"],
               "anya_rules": [{"trigger": "PND", "affected": 1,
                               "replacement": "N2"}]}]})");
}

}  // TEST_SUITE
