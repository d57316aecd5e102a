// Command-line front end: notation parsing, melody expansion, complexity,
// causal-structure analysis, surrogate generation, and the experiment driver.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ragalzp/causality.hpp"
#include "ragalzp/encoder.hpp"
#include "ragalzp/error.hpp"
#include "ragalzp/experiment.hpp"
#include "ragalzp/lz76.hpp"
#include "ragalzp/markov.hpp"
#include "ragalzp/note.hpp"
#include "ragalzp/parser.hpp"
#include "ragalzp/raga.hpp"
#include "ragalzp/rng.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ragalzp;

std::string readTextFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
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

ScaleDb loadDb(const std::string& path) {
  if (path.empty()) return {};
  return ScaleDb::loadFile(path);
}

const RagaScale& lookupScale(ScaleDb& db, const std::string& raga) {
  const RagaScale& scale = db.lookup(raga, true);
  if (scale.seven_tonal_fallback) {
    std::cerr << "warning: raga '" << raga
              << "' not in the scale database; using the generic seven-tonal"
                 " scale\n";
  }
  return scale;
}

void warnHighOrder(int order) {
  if (order >= 2) {
    std::cerr << "warning: order-" << order
              << " generation is supported but order-1 chains validate best;"
                 " higher orders can wander into absorbing rest loops\n";
  }
}

std::string lowered(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

Group parseGroup(const std::string& text) {
  if (text == "melakarta") return Group::kMelakarta;
  if (text == "janya") return Group::kJanya;
  throw Error(ErrorCode::kBadConfig,
              "group must be 'melakarta' or 'janya', got '" + text + "'");
}

Origin parseOrigin(const std::string& text) {
  if (text == "original") return Origin::kOriginal;
  if (text == "surrogate") return Origin::kSurrogate;
  throw Error(ErrorCode::kBadConfig,
              "origin must be 'original' or 'surrogate', got '" + text + "'");
}

// Directory pools take every .seq file in filename order; names containing
// "janya" ("surrogate") are labeled Janya (Surrogate). A manifest JSON makes
// the labels explicit instead:
//   {"sequences": [{"file": "a.seq", "group": "melakarta",
//                   "origin": "original", "name": "a", "raga": "15"}]}
// with file paths resolved relative to the manifest.
std::vector<SymbolSequence> loadPool(const fs::path& pool_path) {
  std::vector<SymbolSequence> pool;
  if (fs::is_directory(pool_path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(pool_path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".seq") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      SymbolSequence seq = loadSeqFile(file.string());
      const std::string stem = lowered(file.stem().string());
      seq.label.composition_name = file.stem().string();
      seq.label.group = stem.find("janya") != std::string::npos
                            ? Group::kJanya
                            : Group::kMelakarta;
      seq.label.origin = stem.find("surrogate") != std::string::npos
                             ? Origin::kSurrogate
                             : Origin::kOriginal;
      pool.push_back(std::move(seq));
    }
    return pool;
  }

  const fs::path base = pool_path.parent_path();
  try {
    const nlohmann::json doc = nlohmann::json::parse(readTextFile(pool_path));
    for (const nlohmann::json& entry : doc.at("sequences")) {
      fs::path file(entry.at("file").get<std::string>());
      if (file.is_relative()) file = base / file;
      SymbolSequence seq = loadSeqFile(file.string());
      seq.label.group = parseGroup(entry.at("group").get<std::string>());
      seq.label.origin =
          entry.contains("origin")
              ? parseOrigin(entry.at("origin").get<std::string>())
              : Origin::kOriginal;
      seq.label.composition_name =
          entry.contains("name") ? entry.at("name").get<std::string>()
                                 : file.stem().string();
      if (entry.contains("raga")) {
        seq.label.raga_id = entry.at("raga").get<std::string>();
      }
      pool.push_back(std::move(seq));
    }
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadConfig,
                pool_path.string() + ": " + std::string(e.what()));
  }
  return pool;
}

long long resolveNmin(const std::string& text,
                      const std::vector<SymbolSequence>& pool) {
  if (text == "auto") return static_cast<long long>(poolMinLength(pool));
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size() || value <= 0) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kBadConfig,
                "--nmin expects a positive integer or 'auto', got '" + text +
                    "'");
  }
}

struct ParseArgs {
  std::string raga;
  std::string scale_db;
  int theta = 8;
  std::string in;
  std::string out;
};

void cmdParse(const ParseArgs& args) {
  ScaleDb db = loadDb(args.scale_db);
  const RagaScale& scale = lookupScale(db, args.raga);
  ParseReport report;
  const Composition comp =
      parseComposition(readTextFile(args.in), scale, args.theta, {}, &report);
  for (int measure : report.underfull_measures) {
    std::cerr << "warning: measure " << measure
              << " falls short of the avartana length and was kept as is\n";
  }
  if (report.trailing_unterminated_measure) {
    std::cerr << "warning: trailing measure has no closing '||' and was kept"
                 " un-normalized\n";
  }
  const std::string csv = emitCsv(comp);
  if (args.out.empty()) {
    std::cout << csv;
  } else {
    writeTextFile(args.out, csv);
  }
}

struct ExpandArgs {
  std::string in;
  std::string out;
};

void cmdExpand(const ExpandArgs& args) {
  const Composition comp = loadCsvFile(args.in);
  writeSeqFile(expand(comp), args.out);
}

void cmdLz76(const std::string& in) {
  const SymbolSequence seq = loadSeqFile(in);
  std::cout << lz76Complexity(seq).phrase_count << "\n";
}

struct CausalityArgs {
  std::string pool;
  std::string nmin = "auto";
  std::uint64_t seed = 0;
  std::string dot;
  std::string stats;
  std::string orientation = "TB";
  int workers = 0;
};

void cmdCausality(const CausalityArgs& args) {
  const std::vector<SymbolSequence> pool = loadPool(args.pool);
  const long long nmin = resolveNmin(args.nmin, pool);

  std::vector<SymbolSequence> windows;
  windows.reserve(pool.size());
  for (const SymbolSequence& seq : pool) {
    Rng rng(deriveSeed(args.seed, "window", seq.label.key()));
    windows.push_back(
        sampleSubsequence(seq, static_cast<std::size_t>(nmin), rng));
  }

  const CausalGraph graph = buildGraph(windows, args.workers);

  std::cout << "nodes: " << graph.nodes.size() << "\n"
            << "window: " << nmin << "\n"
            << "edges: " << graph.edges.size() << "\n"
            << "ties: " << graph.ties.size() << "\n"
            << "cyclic components: " << graph.cyclic_components.size() << "\n"
            << "cross pairs: " << graph.cross_pair_count << "\n";
  std::optional<AccuracyStats> stats;
  if (graph.cross_pair_count > 0) {
    stats = causalAccuracy(graph);
    char line[128];
    std::snprintf(line, sizeof(line),
                  "accuracy: %.4f%% (%lld/%lld correct, %lld cross ties)\n",
                  stats->accuracy_pct,
                  static_cast<long long>(stats->correct_edges),
                  static_cast<long long>(stats->evaluated_pairs),
                  static_cast<long long>(stats->tie_count));
    std::cout << line;
  } else {
    std::cout << "accuracy: not defined (no cross pairs)\n";
  }

  if (!args.dot.empty()) {
    const Orientation orientation = args.orientation == "LR"
                                        ? Orientation::kLeftRight
                                        : Orientation::kTopDown;
    writeTextFile(args.dot, toDot(graph, orientation));
  }

  if (!args.stats.empty()) {
    nlohmann::json doc;
    doc["nmin"] = nmin;
    doc["nodes"] = nlohmann::json::array();
    for (const SequenceLabel& label : graph.nodes) {
      doc["nodes"].push_back(label.key());
    }
    doc["penalties"] = graph.penalties;
    doc["edges"] = nlohmann::json::array();
    for (const CausalEdge& edge : graph.edges) {
      doc["edges"].push_back({{"cause", edge.cause},
                              {"effect", edge.effect},
                              {"cause_label", graph.nodes[edge.cause].key()},
                              {"effect_label", graph.nodes[edge.effect].key()},
                              {"margin", edge.margin}});
    }
    doc["ties"] = nlohmann::json::array();
    for (const auto& [a, b] : graph.ties) {
      doc["ties"].push_back({a, b});
    }
    doc["cyclic_components"] = graph.cyclic_components;
    doc["cross_pair_count"] = graph.cross_pair_count;
    if (stats) {
      doc["accuracy"] = {{"evaluated_pairs", stats->evaluated_pairs},
                         {"correct_edges", stats->correct_edges},
                         {"accuracy_pct", stats->accuracy_pct},
                         {"tie_count", stats->tie_count}};
    } else {
      doc["accuracy"] = nullptr;
    }
    writeTextFile(args.stats, doc.dump(2) + "\n");
  }
}

struct GenArgs {
  std::string raga;
  std::string corpus;
  std::string scale_db;
  int count = 0;
  std::uint64_t seed = 0;
  std::string out;
  int order = 1;
  int events = 1000;
  int max_restarts = 10000;
};

void cmdGenSurrogates(const GenArgs& args) {
  ScaleDb db = loadDb(args.scale_db);
  const RagaScale& scale = lookupScale(db, args.raga);
  warnHighOrder(args.order);
  const std::vector<Composition> corpus =
      loadCorpus(args.corpus, scale, args.raga);

  SurrogateConfig cfg;
  cfg.n_events = args.events;
  cfg.max_restarts = args.max_restarts;
  cfg = cfg.withCoreBounds(scale.tonal_system);

  const std::vector<Composition> surrogates =
      surrogatePool(corpus, args.count, cfg, args.seed, args.order);
  fs::create_directories(args.out);
  for (const Composition& comp : surrogates) {
    writeCsvFile(comp, (fs::path(args.out) / (comp.source_name + ".csv"))
                           .string());
  }
  std::cout << "wrote " << surrogates.size() << " surrogates to " << args.out
            << "\n";
}

struct StationaryArgs {
  std::string raga;
  std::string corpus;
  std::string scale_db;
  std::string out;
};

void cmdStationary(const StationaryArgs& args) {
  ScaleDb db = loadDb(args.scale_db);
  const RagaScale& scale = lookupScale(db, args.raga);
  const std::vector<Composition> corpus =
      loadCorpus(args.corpus, scale, args.raga);
  const std::string csv = stationaryCsv(stationary(fit(corpus, 1)));
  if (args.out.empty()) {
    std::cout << csv;
  } else {
    writeTextFile(args.out, csv);
  }
}

struct ExperimentArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<long long> nmin;
};

void cmdExperiment(const ExperimentArgs& args) {
  ExperimentConfig cfg = loadExperimentConfig(args.config);
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.nmin) cfg.fixed_nmin = *args.nmin;
  warnHighOrder(cfg.markov_order);
  const ExperimentReport report = runExperiment(cfg);
  writeReportFiles(report, cfg.output_dir);
  std::cout << reportCsv(report);
  std::cerr << "results written under " << cfg.output_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Symbolic-notation analysis: note-event parsing, melody expansion,"
      " compression complexity, surrogate generation, and causal-structure"
      " discovery between composition corpora."};
  app.require_subcommand(1);

  ParseArgs parse_args;
  CLI::App* parse = app.add_subcommand(
      "parse", "Parse a notation file into an event CSV (a,b,c rows)");
  parse->add_option("--raga", parse_args.raga, "Raga id for scale lookup")
      ->required();
  parse->add_option("--scale-db", parse_args.scale_db,
                    "Scale database JSON (omit for the generic seven-tonal"
                    " scale)");
  parse
      ->add_option("--tala-beats", parse_args.theta,
                   "Beats per avartana when the file carries no tala header")
      ->capture_default_str();
  parse->add_option("--in", parse_args.in, "Notation text file")
      ->required()
      ->check(CLI::ExistingFile);
  parse->add_option("--out", parse_args.out,
                    "Output CSV path (omit for stdout)");
  parse->callback([&] { cmdParse(parse_args); });

  ExpandArgs expand_args;
  CLI::App* expand_cmd = app.add_subcommand(
      "expand", "Expand an event CSV into an integer melody stream (.seq)");
  expand_cmd->add_option("--in", expand_args.in, "Event CSV file")
      ->required()
      ->check(CLI::ExistingFile);
  expand_cmd->add_option("--out", expand_args.out, "Output .seq path")
      ->required();
  expand_cmd->callback([&] { cmdExpand(expand_args); });

  std::string lz76_in;
  CLI::App* lz76_cmd = app.add_subcommand(
      "lz76", "Print the compression complexity of a .seq stream");
  lz76_cmd->add_option("--in", lz76_in, "Symbol stream (.seq)")
      ->required()
      ->check(CLI::ExistingFile);
  lz76_cmd->callback([&] { cmdLz76(lz76_in); });

  CausalityArgs causality_args;
  CLI::App* causality_cmd = app.add_subcommand(
      "causality",
      "Build the pairwise causal graph over a pool of .seq streams");
  causality_cmd
      ->add_option("--pool", causality_args.pool,
                   "Directory of .seq files, or a manifest JSON with explicit"
                   " group labels")
      ->required()
      ->check(CLI::ExistingPath);
  causality_cmd
      ->add_option("--nmin", causality_args.nmin,
                   "Window length, or 'auto' for the pool minimum")
      ->capture_default_str();
  causality_cmd
      ->add_option("--seed", causality_args.seed,
                   "Master seed for window placement")
      ->capture_default_str();
  causality_cmd->add_option("--dot", causality_args.dot,
                            "Write the graph in DOT form to this path");
  causality_cmd->add_option("--stats", causality_args.stats,
                            "Write penalties, edges, ties and accuracy as"
                            " JSON to this path");
  causality_cmd
      ->add_option("--orientation", causality_args.orientation,
                   "DOT rank direction")
      ->check(CLI::IsMember({"TB", "LR"}))
      ->capture_default_str();
  causality_cmd
      ->add_option("--workers", causality_args.workers,
                   "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  causality_cmd->callback([&] { cmdCausality(causality_args); });

  GenArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-surrogates",
      "Fit a pitch-transition chain to a corpus and sample surrogate"
      " compositions");
  gen_cmd->add_option("--raga", gen_args.raga, "Raga id for scale lookup")
      ->required();
  gen_cmd
      ->add_option("--corpus", gen_args.corpus,
                   "Directory of notation (.txt) or event CSV (.csv) files")
      ->required()
      ->check(CLI::ExistingDirectory);
  gen_cmd->add_option("--scale-db", gen_args.scale_db,
                      "Scale database JSON");
  gen_cmd->add_option("--count", gen_args.count, "Number of surrogates")
      ->required();
  gen_cmd->add_option("--seed", gen_args.seed, "Master seed")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_args.out, "Output directory for CSVs")
      ->required();
  gen_cmd->add_option("--order", gen_args.order, "Chain order")
      ->capture_default_str();
  gen_cmd->add_option("--events", gen_args.events, "Events per surrogate")
      ->capture_default_str();
  gen_cmd
      ->add_option("--max-restarts", gen_args.max_restarts,
                   "Consecutive discarded draws tolerated per event slot")
      ->capture_default_str();
  gen_cmd->callback([&] { cmdGenSurrogates(gen_args); });

  StationaryArgs stationary_args;
  CLI::App* stationary_cmd = app.add_subcommand(
      "stationary",
      "Print the stationary pitch distribution of a corpus's order-1 chain");
  stationary_cmd
      ->add_option("--raga", stationary_args.raga, "Raga id for scale lookup")
      ->required();
  stationary_cmd
      ->add_option("--corpus", stationary_args.corpus,
                   "Directory of notation (.txt) or event CSV (.csv) files")
      ->required()
      ->check(CLI::ExistingDirectory);
  stationary_cmd->add_option("--scale-db", stationary_args.scale_db,
                             "Scale database JSON");
  stationary_cmd->add_option("--out", stationary_args.out,
                             "Output CSV path (omit for stdout)");
  stationary_cmd->callback([&] { cmdStationary(stationary_args); });

  ExperimentArgs experiment_args;
  CLI::App* experiment_cmd = app.add_subcommand(
      "experiment",
      "Run the full surrogate-augmented causal-analysis protocol from a"
      " config file");
  experiment_cmd
      ->add_option("--config", experiment_args.config, "Experiment JSON")
      ->required()
      ->check(CLI::ExistingFile);
  experiment_cmd->add_option("--seed", experiment_args.seed,
                             "Override the config's master seed");
  experiment_cmd->add_option("--nmin", experiment_args.nmin,
                             "Override with a fixed window length");
  experiment_cmd->callback([&] { cmdExperiment(experiment_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
