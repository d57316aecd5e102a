#include "ragalzp/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "ragalzp/error.hpp"
#include "ragalzp/parser.hpp"

namespace ragalzp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kDefaultTheta = 8;

double secondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

std::string directionArrow(Decision d) {
  switch (d) {
    case Decision::kXCausesY:
      return "melakarta->janya";
    case Decision::kYCausesX:
      return "janya->melakarta";
    case Decision::kTie:
      break;
  }
  return "tie";
}

Decision thresholdDirection(double accuracy_pct) {
  if (accuracy_pct > 50.0) return Decision::kXCausesY;
  if (accuracy_pct < 50.0) return Decision::kYCausesX;
  return Decision::kTie;
}

void writeTextFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw Error(ErrorCode::kIoError, "write failed for " + path.string());
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.pools.empty()) {
    throw Error(ErrorCode::kEmptyExperiment, "no pools configured");
  }
  if (cfg.iterations < 1) {
    throw Error(ErrorCode::kBadConfig, "iterations must be at least 1");
  }
  for (int s : cfg.surrogate_counts) {
    if (s < 0) {
      throw Error(ErrorCode::kBadConfig, "surrogate counts must be >= 0");
    }
  }
  if (cfg.surrogate_counts.empty()) {
    throw Error(ErrorCode::kBadConfig, "no surrogate counts configured");
  }
  if (cfg.fixed_nmin && *cfg.fixed_nmin <= 0) {
    throw Error(ErrorCode::kBadConfig, "fixed nmin must be positive");
  }
  if (cfg.markov_order < 1) {
    throw Error(ErrorCode::kBadConfig, "markov order must be at least 1");
  }
}

}  // namespace

std::vector<Composition> loadCorpus(const fs::path& dir, const RagaScale& scale,
                                    const std::string& raga_id) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoError,
                "corpus directory missing: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".txt" || ext == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw Error(ErrorCode::kEmptyPool,
                "no .txt or .csv compositions in " + dir.string());
  }

  std::vector<Composition> corpus;
  for (const fs::path& file : files) {
    try {
      Composition comp;
      if (file.extension() == ".txt") {
        std::ifstream in(file);
        if (!in) {
          throw Error(ErrorCode::kIoError, "cannot open " + file.string());
        }
        std::stringstream text;
        text << in.rdbuf();
        comp = parseComposition(text.str(), scale, kDefaultTheta);
      } else {
        comp = loadCsvFile(file.string());
      }
      comp.raga_id = raga_id;
      comp.source_name = file.stem().string();
      corpus.push_back(std::move(comp));
    } catch (const Error& e) {
      throw Error(e.code(), file.string() + ": " + e.what());
    }
  }
  return corpus;
}

std::string stationaryCsv(const StationaryDistribution& pi) {
  std::ostringstream out;
  out.precision(17);
  out << "pitch,probability\n";
  for (const auto& [pitch, probability] : pi.probabilities) {
    if (isRest(pitch)) {
      out << "inf";
    } else {
      out << pitch;
    }
    out << ',' << probability << '\n';
  }
  return out.str();
}

void writeStationaryCsv(const fs::path& path,
                        const StationaryDistribution& pi) {
  writeTextFile(path, stationaryCsv(pi));
}

ExperimentConfig loadExperimentConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open config " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  ExperimentConfig cfg;
  try {
    const json doc = json::parse(buffer.str());
    for (const json& pool : doc.at("pools")) {
      PoolSpec spec;
      spec.pool_id = pool.at("pool_id").get<std::string>();
      spec.melakarta_raga = pool.at("melakarta_raga").get<std::string>();
      spec.melakarta_dir =
          fs::path(pool.at("melakarta_dir").get<std::string>());
      spec.janya_raga = pool.at("janya_raga").get<std::string>();
      spec.janya_dir = fs::path(pool.at("janya_dir").get<std::string>());
      cfg.pools.push_back(std::move(spec));
    }
    if (doc.contains("surrogate_counts")) {
      cfg.surrogate_counts =
          doc.at("surrogate_counts").get<std::vector<int>>();
    }
    if (doc.contains("iterations")) cfg.iterations = doc.at("iterations");
    if (doc.contains("fixed_nmin") && !doc.at("fixed_nmin").is_null()) {
      cfg.fixed_nmin = doc.at("fixed_nmin").get<long long>();
    }
    if (doc.contains("master_seed")) {
      cfg.master_seed = doc.at("master_seed").get<std::uint64_t>();
    }
    if (doc.contains("output_dir")) {
      cfg.output_dir = fs::path(doc.at("output_dir").get<std::string>());
    }
    if (doc.contains("scale_db")) {
      cfg.scale_db = fs::path(doc.at("scale_db").get<std::string>());
    }
    if (doc.contains("markov_order")) cfg.markov_order = doc.at("markov_order");
    if (doc.contains("write_graphs")) cfg.write_graphs = doc.at("write_graphs");
    if (doc.contains("write_stationary")) {
      cfg.write_stationary = doc.at("write_stationary");
    }
    if (doc.contains("workers")) cfg.workers = doc.at("workers");
    if (doc.contains("graph_orientation")) {
      const std::string o = doc.at("graph_orientation");
      if (o == "TB") {
        cfg.graph_orientation = Orientation::kTopDown;
      } else if (o == "LR") {
        cfg.graph_orientation = Orientation::kLeftRight;
      } else {
        throw Error(ErrorCode::kBadConfig,
                    "graph_orientation must be TB or LR, got " + o);
      }
    }
    if (doc.contains("surrogate")) {
      const json& s = doc.at("surrogate");
      SurrogateConfig& sc = cfg.surrogate;
      if (s.contains("n_events")) sc.n_events = s.at("n_events");
      if (s.contains("epsilon")) sc.epsilon = s.at("epsilon");
      if (s.contains("avartana_choices")) {
        sc.avartana_choices = s.at("avartana_choices").get<std::vector<int>>();
      }
      if (s.contains("duration_mean")) sc.duration_mean = s.at("duration_mean");
      if (s.contains("duration_sd")) sc.duration_sd = s.at("duration_sd");
      if (s.contains("max_restarts")) sc.max_restarts = s.at("max_restarts");
    }
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadConfig,
                path.string() + ": " + std::string(e.what()));
  }
  validate(cfg);
  return cfg;
}

ExperimentReport runExperiment(const ExperimentConfig& cfg) {
  validate(cfg);

  ScaleDb db;
  if (!cfg.scale_db.empty()) {
    db = ScaleDb::loadFile(cfg.scale_db.string());
  }

  fs::create_directories(cfg.output_dir);
  if (cfg.write_graphs) fs::create_directories(cfg.output_dir / "graphs");
  if (cfg.write_stationary) {
    fs::create_directories(cfg.output_dir / "stationary");
  }

  ExperimentReport report;
  for (std::size_t pidx = 0; pidx < cfg.pools.size(); ++pidx) {
    const PoolSpec& pool = cfg.pools[pidx];
    const RagaScale& mela_scale = db.lookup(pool.melakarta_raga, true);
    const RagaScale& janya_scale = db.lookup(pool.janya_raga, true);
    const auto mela_corpus =
        loadCorpus(pool.melakarta_dir, mela_scale, pool.melakarta_raga);
    const auto janya_corpus =
        loadCorpus(pool.janya_dir, janya_scale, pool.janya_raga);

    std::vector<SymbolSequence> originals;
    for (const Composition& comp : mela_corpus) {
      originals.push_back(expand(comp, Group::kMelakarta, Origin::kOriginal));
    }
    for (const Composition& comp : janya_corpus) {
      originals.push_back(expand(comp, Group::kJanya, Origin::kOriginal));
    }
    const long long originals_min =
        static_cast<long long>(poolMinLength(originals));
    const long long reported_nmin = cfg.fixed_nmin.value_or(originals_min);

    if (cfg.write_stationary && cfg.markov_order == 1) {
      writeStationaryCsv(
          cfg.output_dir / "stationary" / (pool.melakarta_raga + ".csv"),
          stationary(fit(mela_corpus, 1)));
      writeStationaryCsv(
          cfg.output_dir / "stationary" / (pool.janya_raga + ".csv"),
          stationary(fit(janya_corpus, 1)));
    }

    // Generation steers within each scale's own playable range.
    const SurrogateConfig mela_surr =
        cfg.surrogate.withCoreBounds(mela_scale.tonal_system);
    const SurrogateConfig janya_surr =
        cfg.surrogate.withCoreBounds(janya_scale.tonal_system);

    PoolSummary summary;
    summary.pool_id = pool.pool_id;
    double accuracy_over_cells = 0;

    for (int s : cfg.surrogate_counts) {
      CellResult cell;
      cell.pool_id = pool.pool_id;
      cell.surrogate_count = s;
      cell.base_nmin = reported_nmin;
      cell.cross_pairs =
          static_cast<long long>(mela_corpus.size() + s) *
          static_cast<long long>(janya_corpus.size() + s);

      for (int iteration = 0; iteration < cfg.iterations; ++iteration) {
        const std::uint64_t iter_seed =
            deriveSeed(cfg.master_seed, "iter", pidx, s, iteration);

        const auto gen_start = std::chrono::steady_clock::now();
        const auto mela_surrogates =
            surrogatePool(mela_corpus, s, mela_surr,
                          deriveSeed(iter_seed, "mela"), cfg.markov_order);
        const auto janya_surrogates =
            surrogatePool(janya_corpus, s, janya_surr,
                          deriveSeed(iter_seed, "janya"), cfg.markov_order);
        const double t_gen = secondsSince(gen_start);

        std::vector<SymbolSequence> sequences = originals;
        for (const Composition& comp : mela_surrogates) {
          sequences.push_back(
              expand(comp, Group::kMelakarta, Origin::kSurrogate));
        }
        for (const Composition& comp : janya_surrogates) {
          sequences.push_back(expand(comp, Group::kJanya, Origin::kSurrogate));
        }

        const long long nmin =
            cfg.fixed_nmin.value_or(
                static_cast<long long>(poolMinLength(sequences)));

        std::vector<SymbolSequence> windows;
        windows.reserve(sequences.size());
        for (const SymbolSequence& seq : sequences) {
          Rng window_rng(deriveSeed(iter_seed, "window", seq.label.key()));
          windows.push_back(sampleSubsequence(
              seq, static_cast<std::size_t>(nmin), window_rng));
        }

        const auto calc_start = std::chrono::steady_clock::now();
        const CausalGraph graph = buildGraph(windows, cfg.workers);
        const AccuracyStats stats = causalAccuracy(graph);
        const double t_calc = secondsSince(calc_start);

        if (cfg.write_graphs) {
          const std::string name = "pool_" + pool.pool_id + "_s" +
                                   std::to_string(s) + "_it" +
                                   std::to_string(iteration) + ".gv";
          writeTextFile(cfg.output_dir / "graphs" / name,
                        toDot(graph, cfg.graph_orientation));
        }

        IterationResult result;
        result.iteration = iteration;
        result.nmin = nmin;
        result.evaluated_pairs = stats.evaluated_pairs;
        result.correct_edges = stats.correct_edges;
        result.accuracy_pct = stats.accuracy_pct;
        result.tie_count = stats.tie_count;
        result.t_gen_seconds = t_gen;
        result.t_calc_seconds = t_calc;
        cell.iterations.push_back(result);

        cell.mean_correct += static_cast<double>(stats.correct_edges);
        cell.mean_accuracy_pct += stats.accuracy_pct;
        cell.mean_tie_count += static_cast<double>(stats.tie_count);
        cell.mean_t_gen += t_gen;
        cell.mean_t_calc += t_calc;
      }

      const double k = static_cast<double>(cfg.iterations);
      cell.mean_correct /= k;
      cell.mean_accuracy_pct /= k;
      cell.mean_tie_count /= k;
      cell.mean_t_gen /= k;
      cell.mean_t_calc /= k;
      cell.direction = thresholdDirection(cell.mean_accuracy_pct);
      accuracy_over_cells += cell.mean_accuracy_pct;
      report.cells.push_back(std::move(cell));
    }

    summary.grand_mean_accuracy_pct =
        accuracy_over_cells / static_cast<double>(cfg.surrogate_counts.size());
    summary.direction = thresholdDirection(summary.grand_mean_accuracy_pct);
    report.pool_summaries.push_back(std::move(summary));
  }
  return report;
}

std::string reportCsv(const ExperimentReport& report) {
  // One column per pool; every pool carries the same surrogate counts, so
  // rows line up by construction.
  std::vector<std::string> pool_ids;
  for (const PoolSummary& summary : report.pool_summaries) {
    pool_ids.push_back(summary.pool_id);
  }
  auto cellFor = [&](const std::string& pool_id,
                     int s) -> const CellResult* {
    for (const CellResult& cell : report.cells) {
      if (cell.pool_id == pool_id && cell.surrogate_count == s) return &cell;
    }
    return nullptr;
  };
  std::vector<int> counts;
  for (const CellResult& cell : report.cells) {
    if (std::find(counts.begin(), counts.end(), cell.surrogate_count) ==
        counts.end()) {
      counts.push_back(cell.surrogate_count);
    }
  }

  std::ostringstream out;
  out << "quantity";
  for (const auto& id : pool_ids) out << ',' << id;
  out << '\n';

  out << "N_min";
  for (const auto& id : pool_ids) {
    const CellResult* cell = counts.empty() ? nullptr : cellFor(id, counts[0]);
    out << ',' << (cell ? std::to_string(cell->base_nmin) : "");
  }
  out << '\n';

  for (int s : counts) {
    const std::string suffix = "_" + std::to_string(s);
    const std::vector<std::pair<std::string,
                                std::function<std::string(const CellResult&)>>>
        rows = {
            {"E" + suffix,
             [](const CellResult& c) { return std::to_string(c.cross_pairs); }},
            {"mean_Eprime" + suffix,
             [](const CellResult& c) { return fixed(c.mean_correct, 2); }},
            {"accuracy_pct" + suffix,
             [](const CellResult& c) {
               return fixed(c.mean_accuracy_pct, 4);
             }},
            {"mean_ties" + suffix,
             [](const CellResult& c) { return fixed(c.mean_tie_count, 2); }},
            {"mean_t_gen" + suffix,
             [](const CellResult& c) { return fixed(c.mean_t_gen, 2); }},
            {"mean_t_calc" + suffix,
             [](const CellResult& c) { return fixed(c.mean_t_calc, 2); }},
        };
    for (const auto& [label, format] : rows) {
      out << label;
      for (const auto& id : pool_ids) {
        const CellResult* cell = cellFor(id, s);
        out << ',' << (cell ? format(*cell) : "");
      }
      out << '\n';
    }
  }

  out << "direction";
  for (const PoolSummary& summary : report.pool_summaries) {
    out << ',' << directionArrow(summary.direction);
  }
  out << '\n';
  return out.str();
}

std::string reportJson(const ExperimentReport& report, bool mask_timings) {
  json doc;
  doc["cells"] = json::array();
  for (const CellResult& cell : report.cells) {
    json c;
    c["pool_id"] = cell.pool_id;
    c["surrogate_count"] = cell.surrogate_count;
    c["nmin"] = cell.base_nmin;
    c["cross_pairs"] = cell.cross_pairs;
    c["mean_correct"] = cell.mean_correct;
    c["mean_accuracy_pct"] = cell.mean_accuracy_pct;
    c["mean_ties"] = cell.mean_tie_count;
    c["mean_t_gen"] = mask_timings ? 0.0 : cell.mean_t_gen;
    c["mean_t_calc"] = mask_timings ? 0.0 : cell.mean_t_calc;
    c["direction"] = directionArrow(cell.direction);
    c["iterations"] = json::array();
    for (const IterationResult& it : cell.iterations) {
      json i;
      i["iteration"] = it.iteration;
      i["nmin"] = it.nmin;
      i["evaluated_pairs"] = it.evaluated_pairs;
      i["correct_edges"] = it.correct_edges;
      i["accuracy_pct"] = it.accuracy_pct;
      i["ties"] = it.tie_count;
      i["t_gen_seconds"] = mask_timings ? 0.0 : it.t_gen_seconds;
      i["t_calc_seconds"] = mask_timings ? 0.0 : it.t_calc_seconds;
      c["iterations"].push_back(std::move(i));
    }
    doc["cells"].push_back(std::move(c));
  }
  doc["pools"] = json::array();
  for (const PoolSummary& summary : report.pool_summaries) {
    json p;
    p["pool_id"] = summary.pool_id;
    p["grand_mean_accuracy_pct"] = summary.grand_mean_accuracy_pct;
    p["direction"] = directionArrow(summary.direction);
    doc["pools"].push_back(std::move(p));
  }
  return doc.dump(2) + "\n";
}

void writeReportFiles(const ExperimentReport& report,
                      const fs::path& output_dir) {
  fs::create_directories(output_dir);
  writeTextFile(output_dir / "results.csv", reportCsv(report));
  writeTextFile(output_dir / "results.json", reportJson(report));
}

}  // namespace ragalzp
