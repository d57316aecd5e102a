#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ragalzp/encoder.hpp"
#include "ragalzp/error.hpp"
#include "ragalzp/experiment.hpp"
#include "ragalzp/parser.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ragalzp;

ErrorCode codeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a ragalzp::Error");
  return ErrorCode::kIoError;
}

fs::path scratchDir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("ragalzp_exp_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path writeConfig(const fs::path& dir, const std::string& name,
                     const std::string& body) {
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << body;
  return path;
}

// Mirrors the driver's corpus protocol: sorted .txt files parsed in an
// eight-beat cycle, expanded, and reduced to the pool minimum.
long long expandedPoolMin(const ScaleDb& db,
                          const std::vector<std::pair<std::string, Group>>&
                              corpora) {
  std::vector<SymbolSequence> pool;
  for (const auto& [raga, group] : corpora) {
    const RagaScale& scale = db.lookup(raga);
    std::vector<fs::path> files;
    for (const auto& entry :
         fs::directory_iterator(fs::path("data/corpus") / raga)) {
      if (entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      std::ifstream in(file);
      std::stringstream text;
      text << in.rdbuf();
      pool.push_back(expand(parseComposition(text.str(), scale, 8), group,
                            Origin::kOriginal));
    }
  }
  return static_cast<long long>(poolMinLength(pool));
}

const std::string kOnePool =
    "\"pools\": [{\"pool_id\": \"p\", \"melakarta_raga\": \"15\","
    " \"melakarta_dir\": \"data/corpus/15\", \"janya_raga\": \"15_m\","
    " \"janya_dir\": \"data/corpus/15_m\"}]";

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("bundled demo config loads with every field applied") {
  const ExperimentConfig cfg = loadExperimentConfig("data/experiment.json");
  REQUIRE(cfg.pools.size() == 2);
  CHECK(cfg.pools[0].pool_id == "15");
  CHECK(cfg.pools[0].melakarta_raga == "15");
  CHECK(cfg.pools[0].melakarta_dir == fs::path("data/corpus/15"));
  CHECK(cfg.pools[0].janya_raga == "15_m");
  CHECK(cfg.pools[1].pool_id == "28");
  CHECK(cfg.pools[1].janya_dir == fs::path("data/corpus/28_k"));
  CHECK(cfg.surrogate_counts == std::vector<int>{0, 25});
  CHECK(cfg.iterations == 5);
  CHECK_FALSE(cfg.fixed_nmin.has_value());
  CHECK(cfg.master_seed == 20260825u);
  CHECK(cfg.output_dir == fs::path("out"));
  CHECK(cfg.scale_db == fs::path("data/ragas.json"));
  CHECK(cfg.markov_order == 1);
  CHECK(cfg.surrogate.n_events == 1000);
  CHECK(cfg.surrogate.max_restarts == 1000000);
  CHECK(cfg.write_graphs);
  CHECK(cfg.write_stationary);
  CHECK(cfg.workers == 0);
  CHECK(cfg.graph_orientation == Orientation::kTopDown);
}

TEST_CASE("config rejections carry the right codes") {
  const fs::path dir = scratchDir("cfg");

  CHECK(codeOf([&] { loadExperimentConfig(dir / "absent.json"); }) ==
        ErrorCode::kIoError);
  CHECK(codeOf([&] {
          loadExperimentConfig(writeConfig(dir, "garbled.json", "not json"));
        }) == ErrorCode::kBadConfig);
  CHECK(codeOf([&] {
          loadExperimentConfig(writeConfig(dir, "nopools.json",
                                           "{\"pools\": []}"));
        }) == ErrorCode::kEmptyExperiment);
  CHECK(codeOf([&] {
          loadExperimentConfig(writeConfig(
              dir, "field.json",
              "{\"pools\": [{\"pool_id\": \"p\"}]}"));
        }) == ErrorCode::kBadConfig);
  CHECK(codeOf([&] {
          loadExperimentConfig(writeConfig(
              dir, "iters.json", "{" + kOnePool + ", \"iterations\": 0}"));
        }) == ErrorCode::kBadConfig);
  CHECK(codeOf([&] {
          loadExperimentConfig(writeConfig(
              dir, "counts.json",
              "{" + kOnePool + ", \"surrogate_counts\": [-1]}"));
        }) == ErrorCode::kBadConfig);
  CHECK(codeOf([&] {
          loadExperimentConfig(writeConfig(
              dir, "nocounts.json",
              "{" + kOnePool + ", \"surrogate_counts\": []}"));
        }) == ErrorCode::kBadConfig);
  CHECK(codeOf([&] {
          loadExperimentConfig(writeConfig(
              dir, "nmin.json", "{" + kOnePool + ", \"fixed_nmin\": 0}"));
        }) == ErrorCode::kBadConfig);
  CHECK(codeOf([&] {
          loadExperimentConfig(writeConfig(
              dir, "order.json", "{" + kOnePool + ", \"markov_order\": 0}"));
        }) == ErrorCode::kBadConfig);
  CHECK(codeOf([&] {
          loadExperimentConfig(writeConfig(
              dir, "orient.json",
              "{" + kOnePool + ", \"graph_orientation\": \"XX\"}"));
        }) == ErrorCode::kBadConfig);

  fs::remove_all(dir);
}

TEST_CASE("demo corpus run: shape, pair arithmetic, outputs, determinism") {
  ExperimentConfig cfg;
  cfg.pools = {{"15", "15", "data/corpus/15", "15_m", "data/corpus/15_m"},
               {"28", "28", "data/corpus/28", "28_k", "data/corpus/28_k"}};
  cfg.surrogate_counts = {0, 2};
  cfg.iterations = 2;
  cfg.master_seed = 97;
  cfg.scale_db = "data/ragas.json";
  cfg.surrogate.n_events = 150;
  cfg.surrogate.max_restarts = 1000000;
  cfg.output_dir = scratchDir("runA");

  const ExperimentReport report = runExperiment(cfg);

  REQUIRE(report.cells.size() == 4);
  CHECK(report.cells[0].pool_id == "15");
  CHECK(report.cells[0].surrogate_count == 0);
  CHECK(report.cells[1].pool_id == "15");
  CHECK(report.cells[1].surrogate_count == 2);
  CHECK(report.cells[2].pool_id == "28");
  CHECK(report.cells[3].pool_id == "28");

  // Cross pairs are (|M| + s) * (|J| + s) over the bundled corpora: six and
  // four compositions in pool 15, three and three in pool 28.
  CHECK(report.cells[0].cross_pairs == 24);
  CHECK(report.cells[1].cross_pairs == 48);
  CHECK(report.cells[2].cross_pairs == 9);
  CHECK(report.cells[3].cross_pairs == 25);

  ScaleDb db = ScaleDb::loadFile("data/ragas.json");
  const long long nmin15 = expandedPoolMin(
      db, {{"15", Group::kMelakarta}, {"15_m", Group::kJanya}});
  const long long nmin28 = expandedPoolMin(
      db, {{"28", Group::kMelakarta}, {"28_k", Group::kJanya}});
  CHECK(report.cells[0].base_nmin == nmin15);
  CHECK(report.cells[1].base_nmin == nmin15);
  CHECK(report.cells[2].base_nmin == nmin28);
  CHECK(report.cells[3].base_nmin == nmin28);

  for (const CellResult& cell : report.cells) {
    REQUIRE(cell.iterations.size() == 2);
    double acc = 0, correct = 0, ties = 0;
    for (const IterationResult& it : cell.iterations) {
      CHECK(it.evaluated_pairs == cell.cross_pairs);
      CHECK(it.correct_edges <= it.evaluated_pairs);
      CHECK(it.accuracy_pct >= 0.0);
      CHECK(it.accuracy_pct <= 100.0);
      CHECK(it.nmin > 0);
      // Surrogates expand far longer than the originals, so the pool minimum
      // stays pinned to the originals.
      CHECK(it.nmin == cell.base_nmin);
      acc += it.accuracy_pct;
      correct += static_cast<double>(it.correct_edges);
      ties += static_cast<double>(it.tie_count);
    }
    CHECK(std::abs(cell.mean_accuracy_pct - acc / 2) < 1e-12);
    CHECK(std::abs(cell.mean_correct - correct / 2) < 1e-12);
    CHECK(std::abs(cell.mean_tie_count - ties / 2) < 1e-12);
    if (cell.mean_accuracy_pct > 50.0) {
      CHECK(cell.direction == Decision::kXCausesY);
    } else if (cell.mean_accuracy_pct < 50.0) {
      CHECK(cell.direction == Decision::kYCausesX);
    } else {
      CHECK(cell.direction == Decision::kTie);
    }
  }

  REQUIRE(report.pool_summaries.size() == 2);
  CHECK(report.pool_summaries[0].pool_id == "15");
  CHECK(std::abs(report.pool_summaries[0].grand_mean_accuracy_pct -
                 (report.cells[0].mean_accuracy_pct +
                  report.cells[1].mean_accuracy_pct) /
                     2) < 1e-12);
  CHECK(std::abs(report.pool_summaries[1].grand_mean_accuracy_pct -
                 (report.cells[2].mean_accuracy_pct +
                  report.cells[3].mean_accuracy_pct) /
                     2) < 1e-12);

  // Side outputs: one graph per (pool, s, iteration), one stationary
  // distribution per raga.
  std::size_t graph_count = 0;
  for (const auto& entry : fs::directory_iterator(cfg.output_dir / "graphs")) {
    if (entry.path().extension() == ".gv") ++graph_count;
  }
  CHECK(graph_count == 8);
  CHECK(fs::exists(cfg.output_dir / "graphs" / "pool_15_s0_it0.gv"));
  CHECK(fs::exists(cfg.output_dir / "graphs" / "pool_28_s2_it1.gv"));
  for (const char* raga : {"15", "15_m", "28", "28_k"}) {
    const fs::path path =
        cfg.output_dir / "stationary" / (std::string(raga) + ".csv");
    REQUIRE(fs::exists(path));
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "pitch,probability");
  }

  writeReportFiles(report, cfg.output_dir);
  REQUIRE(fs::exists(cfg.output_dir / "results.csv"));
  REQUIRE(fs::exists(cfg.output_dir / "results.json"));
  {
    std::ifstream in(cfg.output_dir / "results.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "quantity,15,28");
    std::getline(in, line);
    CHECK(line == "N_min," + std::to_string(nmin15) + "," +
                      std::to_string(nmin28));
  }
  {
    std::ifstream in(cfg.output_dir / "results.json");
    std::stringstream text;
    text << in.rdbuf();
    const nlohmann::json doc = nlohmann::json::parse(text.str());
    CHECK(doc.at("cells").size() == 4);
    CHECK(doc.at("pools").size() == 2);
    CHECK(doc.at("cells")[0].at("iterations").size() == 2);
  }

  // Same config, fresh output directory: byte-identical once wall-clock
  // fields are masked.
  ExperimentConfig cfg2 = cfg;
  cfg2.output_dir = scratchDir("runB");
  const ExperimentReport rerun = runExperiment(cfg2);
  CHECK(reportJson(report, true) == reportJson(rerun, true));

  fs::remove_all(cfg.output_dir);
  fs::remove_all(cfg2.output_dir);
}

TEST_CASE("results.csv layout from a hand-built report") {
  ExperimentReport report;
  CellResult a;
  a.pool_id = "A";
  a.surrogate_count = 0;
  a.base_nmin = 100;
  a.cross_pairs = 24;
  a.mean_correct = 23.375;
  a.mean_accuracy_pct = 97.04;
  a.mean_tie_count = 1.5;
  a.direction = Decision::kXCausesY;
  CellResult b;
  b.pool_id = "B";
  b.surrogate_count = 0;
  b.base_nmin = 200;
  b.cross_pairs = 9;
  b.mean_correct = 4.0;
  b.mean_accuracy_pct = 44.4444;
  b.mean_tie_count = 2.25;
  b.direction = Decision::kYCausesX;
  report.cells = {a, b};
  report.pool_summaries = {{"A", 97.04, Decision::kXCausesY},
                           {"B", 44.4444, Decision::kYCausesX}};

  CHECK(reportCsv(report) ==
        "quantity,A,B\n"
        "N_min,100,200\n"
        "E_0,24,9\n"
        "mean_Eprime_0,23.38,4.00\n"
        "accuracy_pct_0,97.0400,44.4444\n"
        "mean_ties_0,1.50,2.25\n"
        "mean_t_gen_0,0.00,0.00\n"
        "mean_t_calc_0,0.00,0.00\n"
        "direction,melakarta->janya,janya->melakarta\n");
}

TEST_CASE("masked json zeroes only the wall-clock fields") {
  ExperimentReport report;
  CellResult cell;
  cell.pool_id = "A";
  cell.surrogate_count = 3;
  cell.base_nmin = 40;
  cell.cross_pairs = 6;
  cell.mean_accuracy_pct = 75.0;
  cell.mean_t_gen = 1.25;
  cell.mean_t_calc = 2.5;
  IterationResult it;
  it.iteration = 0;
  it.nmin = 40;
  it.evaluated_pairs = 6;
  it.correct_edges = 4;
  it.accuracy_pct = 75.0;
  it.t_gen_seconds = 1.25;
  it.t_calc_seconds = 2.5;
  cell.iterations = {it};
  report.cells = {cell};
  report.pool_summaries = {{"A", 75.0, Decision::kXCausesY}};

  const nlohmann::json masked = nlohmann::json::parse(reportJson(report, true));
  const nlohmann::json plain = nlohmann::json::parse(reportJson(report));
  CHECK(masked.at("cells")[0].at("mean_t_gen") == 0.0);
  CHECK(masked.at("cells")[0].at("mean_t_calc") == 0.0);
  CHECK(masked.at("cells")[0].at("iterations")[0].at("t_gen_seconds") == 0.0);
  CHECK(masked.at("cells")[0].at("mean_accuracy_pct") == 75.0);
  CHECK(plain.at("cells")[0].at("mean_t_gen") == 1.25);
  CHECK(plain.at("cells")[0].at("iterations")[0].at("t_calc_seconds") == 2.5);
  CHECK(plain.at("pools")[0].at("direction") == "melakarta->janya");
}

}  // TEST_SUITE
