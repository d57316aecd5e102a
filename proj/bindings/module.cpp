// Python bindings: a thin functional surface over the core operations,
// working in plain Python types (event tuples, int lists, dicts, str).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ragalzp/causality.hpp"
#include "ragalzp/encoder.hpp"
#include "ragalzp/experiment.hpp"
#include "ragalzp/lz76.hpp"
#include "ragalzp/markov.hpp"
#include "ragalzp/note.hpp"
#include "ragalzp/parser.hpp"
#include "ragalzp/raga.hpp"
#include "ragalzp/rng.hpp"

namespace py = pybind11;

namespace {

using namespace ragalzp;

// (pitch, duration, measure) rows; rests keep the sentinel pitch.
using EventTuple = std::tuple<int, double, int>;

std::vector<EventTuple> toTuples(const Composition& comp) {
  std::vector<EventTuple> rows;
  rows.reserve(comp.events.size());
  for (const NoteEvent& e : comp.events) {
    rows.emplace_back(e.pitch, e.duration, e.measure);
  }
  return rows;
}

Composition fromTuples(const std::vector<EventTuple>& rows) {
  Composition comp;
  comp.events.reserve(rows.size());
  for (const auto& [pitch, duration, measure] : rows) {
    comp.events.push_back(NoteEvent{pitch, duration, measure});
  }
  return comp;
}

std::vector<Composition> fromPitchStreams(
    const std::vector<std::vector<int>>& streams) {
  std::vector<Composition> corpus;
  corpus.reserve(streams.size());
  for (const std::vector<int>& pitches : streams) {
    Composition comp;
    comp.events.reserve(pitches.size());
    for (int p : pitches) comp.events.push_back(NoteEvent{p, 1.0, 0});
    corpus.push_back(std::move(comp));
  }
  return corpus;
}

std::vector<EventTuple> parseCompositionPy(const std::string& text,
                                           const std::string& scale_db,
                                           const std::string& raga,
                                           int theta) {
  ScaleDb db = scale_db.empty() ? ScaleDb() : ScaleDb::loadFile(scale_db);
  const RagaScale& scale =
      db.lookup(raga, /*allow_seven_tonal_fallback=*/true);
  return toTuples(parseComposition(text, scale, theta));
}

std::vector<int> expandEventsPy(const std::vector<EventTuple>& rows) {
  return expand(fromTuples(rows)).symbols;
}

int lz76Py(const std::vector<int>& symbols) {
  return lz76Complexity(symbols).phrase_count;
}

int penaltyPy(const std::vector<int>& x, const std::vector<int>& y) {
  return penalty(std::span<const int>(x), std::span<const int>(y));
}

std::tuple<int, int, std::string> directionPy(const std::vector<int>& x,
                                              const std::vector<int>& y) {
  const PenaltyPair pair =
      direction(std::span<const int>(x), std::span<const int>(y));
  const char* verdict = pair.decision == Decision::kXCausesY ? "x_causes_y"
                        : pair.decision == Decision::kYCausesX ? "y_causes_x"
                                                               : "tie";
  return {pair.p_xy, pair.p_yx, verdict};
}

std::map<int, double> fitStationaryPy(
    const std::vector<std::vector<int>>& streams) {
  return stationary(fit(fromPitchStreams(streams), 1)).probabilities;
}

std::vector<EventTuple> surrogateEventsPy(
    const std::vector<std::vector<int>>& streams, int n_events,
    std::uint64_t seed, int order) {
  SurrogateConfig cfg;
  cfg.n_events = n_events;
  cfg.max_restarts = 1000000;
  const std::vector<Composition> pool =
      surrogatePool(fromPitchStreams(streams), 1, cfg, seed, order);
  return toTuples(pool.front());
}

std::string runExperimentPy(const std::string& config_path,
                            std::optional<std::uint64_t> seed,
                            std::optional<long long> nmin) {
  ExperimentConfig cfg = loadExperimentConfig(config_path);
  if (seed) cfg.master_seed = *seed;
  if (nmin) cfg.fixed_nmin = *nmin;
  const ExperimentReport report = runExperiment(cfg);
  writeReportFiles(report, cfg.output_dir);
  return reportJson(report);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symbolic melody toolkit: notation parsing, stream expansion, "
            "compression complexity, causal direction, surrogates.";

  m.attr("REST_PITCH") = kRestPitch;
  m.attr("REST_SYMBOL") = kRestSymbol;

  m.def("parse_composition", &parseCompositionPy, py::arg("text"),
        py::arg("scale_db") = "", py::arg("raga") = "", py::arg("theta") = 8,
        "Parse notation text against a raga scale; returns (pitch, duration, "
        "measure) tuples with durations normalized onto the theta-beat "
        "cycle. An empty scale_db path uses the generic seven-tonal letters.");

  m.def("expand_events", &expandEventsPy, py::arg("events"),
        py::call_guard<py::gil_scoped_release>(),
        "Expand (pitch, duration, measure) tuples into the integer symbol "
        "stream used by the complexity and causality routines.");

  m.def("lz76", &lz76Py, py::arg("symbols"),
        py::call_guard<py::gil_scoped_release>(),
        "Exhaustive-history phrase count of an integer sequence.");

  m.def("penalty", &penaltyPy, py::arg("x"), py::arg("y"),
        py::call_guard<py::gil_scoped_release>(),
        "Extra phrases needed to parse y as a continuation of x, relative "
        "to parsing y alone.");

  m.def("direction", &directionPy, py::arg("x"), py::arg("y"),
        py::call_guard<py::gil_scoped_release>(),
        "Penalties in both directions plus the verdict string: "
        "'x_causes_y', 'y_causes_x' or 'tie'.");

  m.def("fit_stationary", &fitStationaryPy, py::arg("pitch_streams"),
        py::call_guard<py::gil_scoped_release>(),
        "Fit an order-1 transition model over the given pitch streams and "
        "return its stationary distribution as {pitch: probability}.");

  m.def("surrogate_events", &surrogateEventsPy, py::arg("pitch_streams"),
        py::arg("n_events") = 1000, py::arg("seed") = 0, py::arg("order") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "Generate one surrogate composition from a model fitted on the "
        "given pitch streams; returns (pitch, duration, measure) tuples.");

  m.def("run_experiment", &runExperimentPy, py::arg("config_path"),
        py::arg("seed") = py::none(), py::arg("nmin") = py::none(),
        py::call_guard<py::gil_scoped_release>(),
        "Run the full windowed-causality experiment described by a JSON "
        "config; writes report and graph files to the configured output "
        "directory and returns the results JSON text.");
}
