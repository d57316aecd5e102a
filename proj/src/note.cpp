#include "ragalzp/note.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "ragalzp/error.hpp"

namespace ragalzp {
namespace {

// Shortest decimal form that round-trips the exact double.
std::string formatDuration(double b) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), b);
  return std::string(buf, res.ptr);
}

[[noreturn]] void badCsv(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kUnknownToken,
              "csv line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

void emitCsv(const Composition& comp, std::ostream& out) {
  out << "a,b,c\n";
  for (const NoteEvent& e : comp.events) {
    if (e.isRestEvent()) {
      out << "inf";
    } else {
      out << e.pitch;
    }
    out << ',' << formatDuration(e.duration) << ',' << e.measure << '\n';
  }
}

std::string emitCsv(const Composition& comp) {
  std::ostringstream out;
  emitCsv(comp, out);
  return out.str();
}

Composition parseCsv(const std::string& csv_text) {
  Composition comp;
  std::istringstream in(csv_text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "a,b,c") continue;

    const auto comma1 = line.find(',');
    const auto comma2 =
        comma1 == std::string::npos ? comma1 : line.find(',', comma1 + 1);
    if (comma2 == std::string::npos) badCsv(line_no, "expected a,b,c row");
    const std::string_view a(line.data(), comma1);
    const std::string_view b(line.data() + comma1 + 1, comma2 - comma1 - 1);
    const std::string_view c(line.data() + comma2 + 1,
                             line.size() - comma2 - 1);

    NoteEvent e;
    if (a == "inf") {
      e.pitch = kRestPitch;
    } else {
      const auto r = std::from_chars(a.data(), a.data() + a.size(), e.pitch);
      if (r.ec != std::errc{} || r.ptr != a.data() + a.size()) {
        badCsv(line_no, "bad pitch field '" + std::string(a) + "'");
      }
    }
    {
      const auto r =
          std::from_chars(b.data(), b.data() + b.size(), e.duration);
      if (r.ec != std::errc{} || r.ptr != b.data() + b.size() ||
          !(e.duration > 0)) {
        badCsv(line_no, "bad duration field '" + std::string(b) + "'");
      }
    }
    {
      const auto r = std::from_chars(c.data(), c.data() + c.size(), e.measure);
      if (r.ec != std::errc{} || r.ptr != c.data() + c.size() ||
          e.measure < 0) {
        badCsv(line_no, "bad measure field '" + std::string(c) + "'");
      }
    }
    comp.events.push_back(e);
  }
  return comp;
}

Composition loadCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  Composition comp = parseCsv(text.str());
  comp.source_name = path;
  return comp;
}

void writeCsvFile(const Composition& comp, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path);
  }
  emitCsv(comp, out);
  if (!out) {
    throw Error(ErrorCode::kIoError, "write failed for " + path);
  }
}

}  // namespace ragalzp
