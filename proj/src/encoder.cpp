#include "ragalzp/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ragalzp/error.hpp"

namespace ragalzp {

const char* groupName(Group g) {
  return g == Group::kMelakarta ? "melakarta" : "janya";
}

const char* originName(Origin o) {
  return o == Origin::kOriginal ? "original" : "surrogate";
}

std::string SequenceLabel::key() const {
  std::string key = groupName(group);
  key += ':';
  key += originName(origin);
  key += ':';
  key += raga_id;
  key += ':';
  key += composition_name;
  return key;
}

SymbolSequence expand(const Composition& comp) {
  SymbolSequence seq;
  seq.label.composition_name = comp.source_name;
  seq.label.raga_id = comp.raga_id;
  for (const NoteEvent& e : comp.events) {
    int symbol;
    if (e.isRestEvent()) {
      symbol = kRestSymbol;
    } else {
      symbol = e.pitch + kPitchTranspose;
      if (symbol < 0) {
        throw Error(ErrorCode::kNegativeSymbol,
                    "pitch " + std::to_string(e.pitch) +
                        " transposes below zero; check clamp bounds");
      }
    }
    const auto reps =
        static_cast<long long>(std::ceil(kDurationTicks * e.duration));
    seq.symbols.insert(seq.symbols.end(), static_cast<std::size_t>(reps),
                       symbol);
  }
  return seq;
}

SymbolSequence expand(const Composition& comp, Group group, Origin origin) {
  SymbolSequence seq = expand(comp);
  seq.label.group = group;
  seq.label.origin = origin;
  return seq;
}

std::size_t poolMinLength(const std::vector<SymbolSequence>& pool) {
  if (pool.empty()) {
    throw Error(ErrorCode::kEmptyPool, "no sequences in pool");
  }
  std::size_t min_len = std::numeric_limits<std::size_t>::max();
  for (const SymbolSequence& seq : pool) {
    min_len = std::min(min_len, seq.symbols.size());
  }
  if (min_len == 0) {
    throw Error(ErrorCode::kMinLengthZero, "pool contains an empty sequence");
  }
  return min_len;
}

SymbolSequence sampleSubsequence(const SymbolSequence& seq, std::size_t n_min,
                                 Rng& rng) {
  if (n_min == 0) {
    throw Error(ErrorCode::kMinLengthZero, "window length must be positive");
  }
  if (n_min > seq.symbols.size()) {
    throw Error(ErrorCode::kWindowTooLong,
                "window " + std::to_string(n_min) + " exceeds sequence " +
                    seq.label.key() + " of length " +
                    std::to_string(seq.symbols.size()));
  }
  const std::size_t start = rng.index(seq.symbols.size() - n_min + 1);
  SymbolSequence window;
  window.label = seq.label;
  window.symbols.assign(seq.symbols.begin() + start,
                        seq.symbols.begin() + start + n_min);
  return window;
}

void writeSeqFile(const SymbolSequence& seq, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path);
  }
  for (int symbol : seq.symbols) out << symbol << '\n';
  if (!out) {
    throw Error(ErrorCode::kIoError, "write failed for " + path);
  }
}

SymbolSequence loadSeqFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path);
  }
  SymbolSequence seq;
  seq.label.composition_name = path;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream parse(line);
    int symbol = 0;
    char extra;
    if (!(parse >> symbol) || (parse >> extra)) {
      throw Error(ErrorCode::kUnknownToken,
                  path + " line " + std::to_string(line_no) +
                      ": expected one integer per line");
    }
    if (symbol < 0) {
      throw Error(ErrorCode::kNegativeSymbol,
                  path + " line " + std::to_string(line_no) +
                      ": negative symbols are not supported");
    }
    seq.symbols.push_back(symbol);
  }
  return seq;
}

}  // namespace ragalzp
