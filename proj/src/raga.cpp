#include "ragalzp/raga.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "ragalzp/error.hpp"

namespace ragalzp {
namespace {

constexpr std::string_view kLetters = "SRGMPDN";

char upper(char c) {
  return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
}

}  // namespace

int svaraLetterPosition(char letter) {
  const auto pos = kLetters.find(upper(letter));
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

char svaraLetterAt(int position) {
  return position >= 0 && position < 7 ? kLetters[position] : '?';
}

int twelveTonalIndex(std::string_view token) {
  std::string bare;
  for (char c : token) {
    if (c != '\'' && c != '.') bare.push_back(c);
  }
  const auto fail = [&] {
    throw Error(ErrorCode::kBadScaleDatabase,
                "bad svara token '" + std::string(token) + "'");
  };
  if (bare.empty() || bare.size() > 2) fail();
  const char letter = upper(bare[0]);
  const int variant = bare.size() == 2 ? bare[1] - '0' : 0;
  switch (letter) {
    case 'S':
      if (variant != 0) fail();
      return 0;
    case 'P':
      if (variant != 0) fail();
      return 7;
    case 'R':
      if (variant < 1 || variant > 3) fail();
      return variant;  // 1 2 3
    case 'G':
      if (variant < 1 || variant > 3) fail();
      return variant + 1;  // 2 3 4
    case 'M':
      if (variant < 1 || variant > 2) fail();
      return variant + 4;  // 5 6
    case 'D':
      if (variant < 1 || variant > 3) fail();
      return variant + 7;  // 8 9 10
    case 'N':
      if (variant < 1 || variant > 3) fail();
      return variant + 8;  // 9 10 11
    default:
      fail();
  }
  return -1;  // unreachable
}

std::vector<int> vocabulary(const RagaScale& scale) {
  std::set<int> vocab(scale.arohana.begin(), scale.arohana.end());
  vocab.insert(scale.avarohana.begin(), scale.avarohana.end());
  for (const AnyaRule& rule : scale.anya_rules) {
    vocab.insert(rule.replacement_index);
  }
  return std::vector<int>(vocab.begin(), vocab.end());
}

char letterForBaseIndex(const RagaScale& scale, int base_index) {
  for (int pos = 0; pos < 7; ++pos) {
    if (scale.letter_index[pos] == base_index) return svaraLetterAt(pos);
  }
  for (const AnyaRule& rule : scale.anya_rules) {
    if (rule.replacement_index == base_index) {
      return rule.trigger[rule.affected_position];
    }
  }
  return '?';
}

SvaraValue svaraToIndex(std::string_view token, const RagaScale& scale) {
  if (token.empty()) {
    throw Error(ErrorCode::kUnknownToken, "empty svara token");
  }
  if (token == ";") return {kRestPitch, 1.0};
  if (token == ",") return {kRestPitch, 0.5};

  const char letter = token[0];
  const int pos = svaraLetterPosition(letter);
  if (pos < 0) {
    throw Error(ErrorCode::kUnknownToken,
                "unknown svara token '" + std::string(token) + "'");
  }
  int octave = 0;
  for (char c : token.substr(1)) {
    if (c == '\'') {
      ++octave;
    } else if (c == '.') {
      --octave;
    } else {
      throw Error(ErrorCode::kUnknownToken,
                  "unknown svara token '" + std::string(token) + "'");
    }
  }

  const int base = scale.letter_index[pos];
  if (base == -1) {
    throw Error(ErrorCode::kSvaraNotInScale,
                std::string(1, letter) + " is not in the scale of raga " +
                    scale.raga_id);
  }
  if (base == -2) {
    throw Error(ErrorCode::kAmbiguousSvara,
                std::string(1, letter) + " is ambiguous in raga " +
                    scale.raga_id);
  }
  const double duration =
      std::isupper(static_cast<unsigned char>(letter)) ? 1.0 : 0.5;
  return {base + octave * scale.tonal_system.octave_span, duration};
}

namespace {

RagaScale scaleFromJson(const nlohmann::json& j) {
  RagaScale scale;
  scale.raga_id = j.at("id").get<std::string>();
  scale.name = j.value("name", scale.raga_id);
  scale.melakarta_index = j.value("melakarta", 0);
  const std::string system = j.value("tonal_system", "twelve");
  if (system == "twelve") {
    scale.tonal_system = TonalSystem::twelveTonal();
  } else if (system == "seven") {
    scale.tonal_system = TonalSystem::sevenTonal();
  } else {
    throw Error(ErrorCode::kBadScaleDatabase,
                "raga " + scale.raga_id + ": bad tonal_system '" + system +
                    "'");
  }

  // letter_index accumulates one base index per letter; a second distinct
  // index marks the letter ambiguous (-2).
  const auto addToken = [&scale](const std::string& token,
                                 std::vector<int>& out) {
    std::string bare;
    for (char c : token) {
      if (c != '\'' && c != '.') bare.push_back(c);
    }
    if (bare.empty()) {
      throw Error(ErrorCode::kBadScaleDatabase,
                  "raga " + scale.raga_id + ": empty token");
    }
    const int pos = svaraLetterPosition(bare[0]);
    if (pos < 0) {
      throw Error(ErrorCode::kBadScaleDatabase,
                  "raga " + scale.raga_id + ": bad token '" + token + "'");
    }
    const int base = scale.tonal_system.kind == TonalKind::kTwelveTonal
                         ? twelveTonalIndex(bare)
                         : pos;
    if (base < 0 || base >= scale.tonal_system.octave_span) {
      throw Error(ErrorCode::kBadScaleDatabase,
                  "raga " + scale.raga_id + ": token '" + token +
                      "' out of range");
    }
    out.push_back(base);
    int& slot = scale.letter_index[pos];
    if (slot == -1) {
      slot = base;
    } else if (slot != base) {
      slot = -2;
    }
  };

  for (const auto& token : j.at("arohana")) {
    addToken(token.get<std::string>(), scale.arohana);
  }
  for (const auto& token : j.at("avarohana")) {
    addToken(token.get<std::string>(), scale.avarohana);
  }

  if (j.contains("anya_rules")) {
    for (const auto& jr : j.at("anya_rules")) {
      AnyaRule rule;
      const std::string trigger = jr.at("trigger").get<std::string>();
      if (trigger.size() != 3) {
        throw Error(ErrorCode::kBadScaleDatabase,
                    "raga " + scale.raga_id + ": anya trigger must have "
                    "three letters");
      }
      for (int k = 0; k < 3; ++k) {
        if (svaraLetterPosition(trigger[k]) < 0) {
          throw Error(ErrorCode::kBadScaleDatabase,
                      "raga " + scale.raga_id + ": bad anya trigger '" +
                          trigger + "'");
        }
        rule.trigger[k] = upper(trigger[k]);
      }
      rule.affected_position = jr.at("affected").get<int>();
      if (rule.affected_position < 0 || rule.affected_position > 2) {
        throw Error(ErrorCode::kBadScaleDatabase,
                    "raga " + scale.raga_id + ": anya affected position "
                    "out of range");
      }
      rule.replacement_index =
          twelveTonalIndex(jr.at("replacement").get<std::string>());
      const int affected_letter =
          svaraLetterPosition(rule.trigger[rule.affected_position]);
      if (scale.letter_index[affected_letter] == rule.replacement_index) {
        throw Error(ErrorCode::kBadScaleDatabase,
                    "raga " + scale.raga_id + ": anya replacement equals "
                    "the letter's default index");
      }
      scale.anya_rules.push_back(rule);
    }
  }

  const std::vector<int> vocab = vocabulary(scale);
  if (vocab.empty() ||
      !std::binary_search(vocab.begin(), vocab.end(), 0)) {
    throw Error(ErrorCode::kBadScaleDatabase,
                "raga " + scale.raga_id + ": vocabulary must contain Sa");
  }

  const int dha = scale.letter_index[5];
  scale.dha_index =
      dha >= 0 ? dha
               : (scale.tonal_system.kind == TonalKind::kTwelveTonal ? 8 : 5);
  return scale;
}

}  // namespace

ScaleDb ScaleDb::loadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open scale database " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return loadJsonText(text.str());
}

ScaleDb ScaleDb::loadJsonText(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadScaleDatabase, e.what());
  }
  ScaleDb db;
  try {
    for (const auto& j : doc.at("ragas")) {
      RagaScale scale = scaleFromJson(j);
      const std::string id = scale.raga_id;
      if (!db.ragas_.emplace(id, std::move(scale)).second) {
        throw Error(ErrorCode::kBadScaleDatabase, "duplicate raga id " + id);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadScaleDatabase, e.what());
  }
  return db;
}

RagaScale ScaleDb::genericSevenTonal(const std::string& raga_id) {
  RagaScale scale;
  scale.raga_id = raga_id;
  scale.name = raga_id + " (seven-tonal fallback)";
  scale.tonal_system = TonalSystem::sevenTonal();
  scale.arohana = {0, 1, 2, 3, 4, 5, 6};
  scale.avarohana = {6, 5, 4, 3, 2, 1, 0};
  scale.letter_index = {0, 1, 2, 3, 4, 5, 6};
  scale.seven_tonal_fallback = true;
  scale.dha_index = 5;
  return scale;
}

const RagaScale& ScaleDb::lookup(const std::string& raga_id) const {
  const auto it = ragas_.find(raga_id);
  if (it == ragas_.end()) {
    throw Error(ErrorCode::kUnknownRaga, "raga " + raga_id +
                                             " is not in the scale database");
  }
  return it->second;
}

const RagaScale& ScaleDb::lookup(const std::string& raga_id,
                                 bool allow_seven_tonal_fallback) {
  const auto it = ragas_.find(raga_id);
  if (it != ragas_.end()) return it->second;
  if (!allow_seven_tonal_fallback) {
    throw Error(ErrorCode::kUnknownRaga, "raga " + raga_id +
                                             " is not in the scale database");
  }
  const auto cached = fallbacks_.find(raga_id);
  if (cached != fallbacks_.end()) return cached->second;
  return fallbacks_.emplace(raga_id, genericSevenTonal(raga_id))
      .first->second;
}

}  // namespace ragalzp
