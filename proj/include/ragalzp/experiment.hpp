// End-to-end experiment driver: corpus loading, surrogate augmentation,
// windowed causal analysis over seeded iterations, and report emission.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ragalzp/causality.hpp"
#include "ragalzp/markov.hpp"
#include "ragalzp/raga.hpp"

namespace ragalzp {

struct PoolSpec {
  std::string pool_id;
  std::string melakarta_raga;
  std::filesystem::path melakarta_dir;
  std::string janya_raga;
  std::filesystem::path janya_dir;
};

struct ExperimentConfig {
  std::vector<PoolSpec> pools;
  std::vector<int> surrogate_counts = {0, 50, 100};
  int iterations = 10;
  // Window length for the whole run; unset means each pool uses its own
  // minimum expanded length.
  std::optional<long long> fixed_nmin;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir = "out";
  std::filesystem::path scale_db;  // empty: bundled seven-tonal fallback only
  int markov_order = 1;
  SurrogateConfig surrogate;
  bool write_graphs = true;
  bool write_stationary = true;
  int workers = 0;
  Orientation graph_orientation = Orientation::kTopDown;
};

struct IterationResult {
  int iteration = 0;
  long long nmin = 0;
  long long evaluated_pairs = 0;
  long long correct_edges = 0;
  double accuracy_pct = 0.0;
  long long tie_count = 0;
  double t_gen_seconds = 0.0;
  double t_calc_seconds = 0.0;
};

// One (pool, surrogate count) cell of the result table.
struct CellResult {
  std::string pool_id;
  int surrogate_count = 0;
  long long base_nmin = 0;       // over the originals, before augmentation
  long long cross_pairs = 0;     // constant across iterations by construction
  double mean_correct = 0.0;
  double mean_accuracy_pct = 0.0;
  double mean_tie_count = 0.0;
  double mean_t_gen = 0.0;
  double mean_t_calc = 0.0;
  std::vector<IterationResult> iterations;
  Decision direction = Decision::kTie;  // kXCausesY = Melakarta -> Janya
};

struct PoolSummary {
  std::string pool_id;
  double grand_mean_accuracy_pct = 0.0;  // equal-weighted over cells
  Decision direction = Decision::kTie;
};

struct ExperimentReport {
  std::vector<CellResult> cells;
  std::vector<PoolSummary> pool_summaries;
};

// Compositions from one directory, sorted by filename: .txt files are parsed
// as notation (eight-beat default cycle), .csv files as event lists. Each is
// labeled with the raga id and its filename stem.
std::vector<Composition> loadCorpus(const std::filesystem::path& dir,
                                    const RagaScale& scale,
                                    const std::string& raga_id);

// "pitch,probability" rows with full round-trip precision; rests print "inf".
std::string stationaryCsv(const StationaryDistribution& pi);
void writeStationaryCsv(const std::filesystem::path& path,
                        const StationaryDistribution& pi);

ExperimentConfig loadExperimentConfig(const std::filesystem::path& path);

// Runs every (pool, s) cell for cfg.iterations seeded iterations. Graph and
// stationary side outputs land under cfg.output_dir as the run progresses.
ExperimentReport runExperiment(const ExperimentConfig& cfg);

// results.csv: one column per pool, one row per reported quantity.
std::string reportCsv(const ExperimentReport& report);

// results.json: full raw per-iteration data. mask_timings zeroes wall-clock
// fields so reruns can be compared byte-for-byte.
std::string reportJson(const ExperimentReport& report,
                       bool mask_timings = false);

void writeReportFiles(const ExperimentReport& report,
                      const std::filesystem::path& output_dir);

}  // namespace ragalzp
