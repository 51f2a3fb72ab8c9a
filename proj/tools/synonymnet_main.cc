// Copyright 2026 The SynonymNet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// synonymnet: command-line driver.
//
//   synonymnet [--seed N] [--config FILE] [--workdir DIR] <subcommand> ...
//
// Subcommands: synth, ingest, train, evaluate, score, discover, gradcheck.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "synonymnet/checkpoint.h"
#include "synonymnet/corpus.h"
#include "synonymnet/embeddings.h"
#include "synonymnet/error.h"
#include "synonymnet/eval.h"
#include "synonymnet/model.h"
#include "synonymnet/model_gradcheck.h"
#include "synonymnet/synth.h"
#include "synonymnet/trainer.h"

namespace {

using namespace synonymnet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct Globals {
  uint64_t seed = 1;
  std::string config;
  std::string workdir = ".";
  CLI::Option *seed_opt = nullptr;
};

std::string Resolve(const Globals &g, const std::string &path) {
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(g.workdir) / p).string();
}

void Echo(const std::string &key, const std::string &value) {
  std::cerr << "# " << key << '=' << value << '\n';
}

void EchoConfig(const TrainConfig &c) {
  std::istringstream lines(FormatConfig(c));
  std::string line;
  while (std::getline(lines, line)) std::cerr << "# " << line << '\n';
}

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

Split ParseSplit(const std::string &s) {
  if (s == "train") return Split::kTrain;
  if (s == "valid") return Split::kValid;
  if (s == "test") return Split::kTest;
  throw UsageError("unknown split '" + s + "' (expected train, valid or test)");
}

TokenId EntityId(const Corpus &corpus, const std::string &name) {
  auto id = corpus.vocab.Find(name);
  if (!id || !corpus.synsets.Contains(*id)) {
    throw DataError("unknown entity '" + name + "'");
  }
  return *id;
}

// Loaded artifacts shared by the model-consuming subcommands.
struct Loaded {
  Corpus corpus;
  EmbeddingTable table;
  Model model;
};

Loaded LoadAll(const Globals &g, const std::string &index, const std::string &emb,
               const std::string &ckpt) {
  Loaded l;
  l.corpus = LoadIndex(Resolve(g, index));
  l.table = EmbeddingTable::LoadFile(Resolve(g, emb), l.corpus.vocab);
  l.model = LoadCheckpointFile(Resolve(g, ckpt));
  if (l.model.params.encoder.input_dim() != l.table.dim()) {
    throw DataError("checkpoint expects " + std::to_string(l.model.params.encoder.input_dim()) +
                    "-dim embeddings, file has " + std::to_string(l.table.dim()));
  }
  return l;
}

// Seed for evaluation-time sampling: --seed when given, else the model's.
uint64_t EvalSeed(const Globals &g, const Model &m) {
  return g.seed_opt->count() > 0 ? g.seed : m.config.seed;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"SynonymNet: context-based entity synonym discovery"};
  app.require_subcommand(1);
  Globals g;
  g.seed_opt = app.add_option("--seed", g.seed, "Run seed")->capture_default_str();
  app.add_option("--config", g.config, "key=value config file (train settings)");
  app.add_option("--workdir", g.workdir, "Base directory for relative paths")
      ->capture_default_str();

  // synth
  SynthConfig sc;
  std::string synth_dir = ".";
  auto *synth = app.add_subcommand("synth", "Write a synthetic corpus, synsets and embeddings");
  synth->add_option("--out-dir", synth_dir, "Output directory")->capture_default_str();
  synth->add_option("--clusters", sc.clusters, "Synonym clusters")->capture_default_str();
  synth->add_option("--entities-per-cluster", sc.entities_per_cluster)->capture_default_str();
  synth->add_option("--contexts", sc.contexts_per_entity, "Sentences per entity")
      ->capture_default_str();
  synth->add_option("--vocab", sc.vocab_size, "Vocabulary size")->capture_default_str();
  synth->add_option("--noise", sc.noise, "Fraction of background-only sentences")
      ->capture_default_str();
  synth->add_option("--embed-dim", sc.embed_dim, "Embedding dimension")->capture_default_str();
  synth->add_option("--entity-spread", sc.entity_spread, "Entity vector noise around the centroid")
      ->capture_default_str();
  synth->add_option("--signature-spread", sc.signature_spread,
                    "Signature vector noise around the centroid")
      ->capture_default_str();
  synth->add_option("--semantic-fraction", sc.semantic_fraction,
                    "Share of embedding dimensions carrying cluster structure")
      ->capture_default_str();

  // ingest
  std::string corpus_path = "corpus.txt", synset_path = "synsets.tsv", index_out = "index.bin";
  uint32_t min_count = 5;
  double valid_frac = 0.1, test_frac = 0.2;
  auto *ingest = app.add_subcommand("ingest", "Build the binary index from corpus and synsets");
  ingest->add_option("--corpus", corpus_path)->capture_default_str();
  ingest->add_option("--synsets", synset_path)->capture_default_str();
  ingest->add_option("--min-count", min_count, "Minimum entity frequency")->capture_default_str();
  ingest->add_option("--valid-frac", valid_frac)->capture_default_str();
  ingest->add_option("--test-frac", test_frac)->capture_default_str();
  ingest->add_option("--out", index_out)->capture_default_str();

  // Shared artifact paths.
  std::string index = "index.bin", emb = "embeddings.txt", ckpt = "model.ckpt";
  auto add_artifacts = [&](CLI::App *sub, bool with_ckpt) {
    sub->add_option("--index", index)->capture_default_str();
    sub->add_option("--embeddings", emb)->capture_default_str();
    if (with_ckpt) sub->add_option("--checkpoint", ckpt)->capture_default_str();
  };

  // train
  TrainConfig tc;
  std::string history = "history.tsv", objective, encoder, leaky;
  std::vector<std::string> overrides;
  auto *train = app.add_subcommand("train", "Train a model and write checkpoint and history");
  add_artifacts(train, false);
  train->add_option("--out", ckpt, "Checkpoint path")->capture_default_str();
  train->add_option("--history", history)->capture_default_str();
  std::vector<std::pair<std::string, CLI::Option *>> flag_map;
  auto cfg = [&](const std::string &flag, const std::string &key, auto &target) {
    flag_map.emplace_back(key, train->add_option(flag, target));
  };
  cfg("--contexts", "contexts", tc.contexts);
  cfg("--max-len", "max_len", tc.max_len);
  cfg("--d-ce", "d_ce", tc.d_ce);
  cfg("--margin", "margin", tc.margin);
  cfg("--objective", "objective", objective);
  cfg("--optimizer", "optimizer", tc.optimizer);
  cfg("--batch-size", "batch_size", tc.batch_size);
  cfg("--lr", "learning_rate", tc.learning_rate);
  cfg("--epochs", "epochs", tc.epochs);
  cfg("--encoder", "encoder", encoder);
  cfg("--leaky", "leaky", leaky);
  train->add_option("--set", overrides, "Extra key=value setting (repeatable)");

  // evaluate
  std::string split_name = "test", report_out;
  size_t topk = 50;
  auto *evaluate = app.add_subcommand("evaluate", "Pair AUC and ranking metrics on a split");
  add_artifacts(evaluate, true);
  evaluate->add_option("--split", split_name)->capture_default_str();
  evaluate->add_option("--topk", topk, "Candidates per query")->capture_default_str();
  evaluate->add_option("--out", report_out, "Also write the report here");

  // score
  std::string ent_a, ent_b;
  auto *score = app.add_subcommand("score", "Score one entity pair");
  add_artifacts(score, true);
  score->add_option("a", ent_a)->required();
  score->add_option("b", ent_b)->required();

  // discover
  std::string query;
  double threshold = 0.8;
  auto *discover = app.add_subcommand("discover", "Candidate generation plus reranking");
  add_artifacts(discover, true);
  discover->add_option("--query", query)->required();
  discover->add_option("--topk", topk)->capture_default_str();
  discover->add_option("--threshold", threshold)->capture_default_str();

  // gradcheck
  GradCheckSetup gs;
  double tolerance = 1e-4;
  auto *gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the full model");
  gradcheck->add_option("--eps", gs.eps)->capture_default_str();
  gradcheck->add_option("--tolerance", tolerance)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Echo("seed", std::to_string(g.seed));
    Echo("workdir", g.workdir);
    if (*synth) {
      sc.seed = g.seed;
      Echo("out_dir", synth_dir);
      Echo("clusters", std::to_string(sc.clusters));
      Echo("entities_per_cluster", std::to_string(sc.entities_per_cluster));
      Echo("contexts", std::to_string(sc.contexts_per_entity));
      Echo("vocab", std::to_string(sc.vocab_size));
      Echo("noise", std::to_string(sc.noise));
      Echo("embed_dim", std::to_string(sc.embed_dim));
      Echo("entity_spread", std::to_string(sc.entity_spread));
      Echo("signature_spread", std::to_string(sc.signature_spread));
      Echo("semantic_fraction", std::to_string(sc.semantic_fraction));
      const SynthStats st = GenerateSyntheticFiles(sc, Resolve(g, synth_dir));
      std::cout << "sentences=" << st.sentences << '\n'
                << "signature_per_cluster=" << st.signature_per_cluster << '\n'
                << "background=" << st.background << '\n';
    } else if (*ingest) {
      Echo("corpus", corpus_path);
      Echo("synsets", synset_path);
      Echo("min_count", std::to_string(min_count));
      Echo("valid_frac", std::to_string(valid_frac));
      Echo("test_frac", std::to_string(test_frac));
      Echo("out", index_out);
      IngestStats stats;
      Corpus corpus = IngestFiles(Resolve(g, corpus_path), Resolve(g, synset_path), min_count, &stats);
      for (const auto &w : stats.warnings) std::cerr << "warning: " << w << '\n';
      Rng rng = MakeStream(g.seed, "ingest.split");
      SplitSynsets(corpus.synsets, valid_frac, test_frac, rng);
      SaveIndex(corpus, Resolve(g, index_out));
      std::cout << "lines=" << corpus.lines.size() << '\n'
                << "duplicate_lines=" << stats.duplicate_lines << '\n'
                << "vocab=" << corpus.vocab.size() << '\n'
                << "synsets=" << corpus.synsets.size() << '\n'
                << "entities_dropped=" << stats.entities_dropped << '\n';
      for (Split s : {Split::kTrain, Split::kValid, Split::kTest}) {
        std::cout << SplitName(s) << "_synsets=" << corpus.synsets.SynsetsIn(s).size() << '\n';
      }
    } else if (*train) {
      // Defaults, then the config file, then explicit flags.
      TrainConfig resolved;
      if (!g.config.empty()) ApplyConfigFile(resolved, Resolve(g, g.config));
      for (const auto &[key, opt] : flag_map) {
        if (opt->count() > 0) SetConfigValue(resolved, key, opt->as<std::string>());
      }
      for (const auto &kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        SetConfigValue(resolved, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (g.seed_opt->count() > 0 || g.config.empty()) resolved.seed = g.seed;
      resolved.Validate();
      EchoConfig(resolved);
      Echo("index", index);
      Echo("embeddings", emb);
      Echo("out", ckpt);
      Echo("history", history);
      const Corpus corpus = LoadIndex(Resolve(g, index));
      const EmbeddingTable table = EmbeddingTable::LoadFile(Resolve(g, emb), corpus.vocab);
      TrainResult r = Train(resolved, corpus, table.matrix(), &std::cerr);
      SaveCheckpointFile(r.model, Resolve(g, ckpt));
      std::ofstream h(Resolve(g, history));
      if (!h) throw DataError("cannot write history " + history);
      h << FormatHistory(r.history);
      std::cout << "initial_loss=" << r.history.initial_loss << '\n'
                << "final_loss="
                << (r.history.epochs.empty() ? r.history.initial_loss
                                             : r.history.epochs.back().train_loss)
                << '\n'
                << "best_epoch=" << r.history.best_epoch << '\n';
    } else if (*evaluate) {
      Loaded l = LoadAll(g, index, emb, ckpt);
      const uint64_t seed = EvalSeed(g, l.model);
      EchoConfig(l.model.config);
      Echo("split", split_name);
      Echo("topk", std::to_string(topk));
      Echo("eval_seed", std::to_string(seed));
      const EvalReport rep = Evaluate(l.model, l.corpus, l.table.matrix(), l.table,
                                      ParseSplit(split_name), seed, topk);
      const std::string text = FormatReport(rep);
      std::cout << text;
      if (!report_out.empty()) {
        std::ofstream o(Resolve(g, report_out));
        if (!o) throw DataError("cannot write report " + report_out);
        o << text;
      }
    } else if (*score) {
      Loaded l = LoadAll(g, index, emb, ckpt);
      const uint64_t seed = EvalSeed(g, l.model);
      EchoConfig(l.model.config);
      Echo("eval_seed", std::to_string(seed));
      const double s = ScorePair(l.model, l.corpus, l.table.matrix(), EntityId(l.corpus, ent_a),
                                 EntityId(l.corpus, ent_b), seed);
      std::cout << ent_a << '\t' << ent_b << '\t' << Fixed6(s) << '\n';
    } else if (*discover) {
      Loaded l = LoadAll(g, index, emb, ckpt);
      const uint64_t seed = EvalSeed(g, l.model);
      EchoConfig(l.model.config);
      Echo("topk", std::to_string(topk));
      Echo("threshold", Fixed6(threshold));
      Echo("eval_seed", std::to_string(seed));
      const std::vector<TokenId> universe = l.corpus.synsets.AllEntities();
      const DiscoveryResult r =
          Discover(l.model, l.corpus, l.table.matrix(), l.table, EntityId(l.corpus, query),
                   universe, topk, threshold, seed);
      std::cout << FormatDiscovery(r, l.corpus.vocab);
    } else if (*gradcheck) {
      gs.seed = g.seed;
      Echo("eps", std::to_string(gs.eps));
      Echo("tolerance", std::to_string(tolerance));
      double worst = 0.0;
      for (const ModelGradCase &c : RunModelGradCheck(gs)) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3e", c.report.max_rel_error);
        std::cout << c.name << "\tloss=" << c.loss << "\tmax_rel_error=" << buf << '\t'
                  << c.report.worst_param << '\n';
        worst = std::max(worst, c.report.max_rel_error);
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.3e", worst);
      std::cout << "max_rel_error=" << buf << '\n';
      if (!(worst < tolerance)) {
        std::cerr << "error: gradient check exceeds tolerance " << tolerance << '\n';
        return kExitNumeric;
      }
    }
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
