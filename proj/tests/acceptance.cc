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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// The end-to-end criteria drive the installed CLI the same way a user would.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "synonymnet/checkpoint.h"
#include "synonymnet/encoder.h"
#include "synonymnet/eval.h"
#include "synonymnet/losses.h"
#include "synonymnet/matcher.h"
#include "synonymnet/model_gradcheck.h"
#include "synonymnet/rng.h"

namespace synonymnet {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char *format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

Matrix Gauss(size_t r, size_t c, Rng &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(r, c);
  for (double &v : m.data()) v = g(rng);
  return m;
}

// --- numerical criteria ---------------------------------------------------

Outcome MatrixForm() {
  const auto t0 = Clock::now();
  Rng rng(2026);
  double worst = 0.0;
  int instances = 0;
  const size_t dims[] = {4, 8, 16};
  for (int trial = 0; trial < 240; ++trial) {
    const size_t P = 1 + UniformIndex(rng, 8), Q = 1 + UniformIndex(rng, 8);
    const size_t d = dims[trial % 3];
    const Matrix h = Gauss(P, d, rng), g = Gauss(Q, d, rng), w = InitSymmetric(d, 0.5, rng);
    LeakyUnit leak{Gauss(1, d, rng), false};
    for (const LeakyUnit *l : std::array<const LeakyUnit *, 2>{nullptr, &leak}) {
      const MatchResult a = Match(h, g, w, l), b = oracle::ScalarMatch(h, g, w, l);
      auto track = [&](double x, double y) { worst = std::max(worst, std::abs(x - y)); };
      for (size_t i = 0; i < a.m_fwd.size(); ++i) {
        track(a.m_fwd[i], b.m_fwd[i]);
        track(a.m_bwd[i], b.m_bwd[i]);
      }
      for (size_t q = 0; q < Q; ++q) track(a.leak_fwd[q], b.leak_fwd[q]);
      for (size_t p = 0; p < P; ++p) track(a.leak_bwd[p], b.leak_bwd[p]);
      for (size_t k = 0; k < d; ++k) {
        track(a.h_bar[k], b.h_bar[k]);
        track(a.g_bar[k], b.g_bar[k]);
      }
      track(a.score, b.score);
      ++instances;
    }
  }
  const double secs = Seconds(t0);
  return {worst <= 1e-12 && instances >= 200 && secs < 5.0,
          std::to_string(instances) + " instances, max abs diff " + Fmt("%.3g", worst) +
              " (tol 1e-12), " + Fmt("%.2f", secs) + " s (limit 5 s)"};
}

Outcome GradientFidelity() {
  const auto t0 = Clock::now();
  const std::vector<ModelGradCase> cases = RunModelGradCheck(GradCheckSetup{});
  double worst = 0.0;
  std::string worst_name;
  for (const auto &c : cases) {
    if (!(c.report.max_rel_error <= worst)) {
      worst = c.report.max_rel_error;
      worst_name = c.name + ":" + c.report.worst_param;
    }
  }
  const double secs = Seconds(t0);
  return {cases.size() == 8 && worst < 1e-4 && secs < 60.0,
          std::to_string(cases.size()) + " cases, max rel error " + Fmt("%.3g", worst) + " at " +
              worst_name + " (tol 1e-4), " + Fmt("%.2f", secs) + " s (limit 60 s)"};
}

Outcome LossTrivialCases() {
  const double m = 0.75;
  std::vector<std::pair<const char *, double>> got = {
      {"siamese y=1 s=1", SiameseLoss(1.0, 1, m)},
      {"siamese y=0 s=m", SiameseLoss(m, 0, m)},
      {"siamese y=0 s=-1", SiameseLoss(-1.0, 0, m)},
      {"siamese y=0 s=0.3", SiameseLoss(0.3, 0, m)},
      {"triplet s+=1 s-=-1", TripletLoss(1.0, -1.0, m)},
      {"triplet gap=m", TripletLoss(1.0, 0.25, m)},
  };
  bool ok = true;
  std::string bad;
  for (const auto &[name, v] : got) {
    if (v != 0.0) {
      ok = false;
      bad += std::string(" ") + name + "=" + Fmt("%.17g", v);
    }
  }
  return {ok, ok ? "6 trivial cases exactly 0" : "nonzero:" + bad};
}

Outcome Stochasticity() {
  Rng rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const size_t P = 1 + UniformIndex(rng, 8), Q = 1 + UniformIndex(rng, 8), d = 8;
    const Matrix h = Gauss(P, d, rng), g = Gauss(Q, d, rng), w = InitSymmetric(d, 1.0, rng);
    LeakyUnit leak{Gauss(1, d, rng), false};
    for (const LeakyUnit *l : std::array<const LeakyUnit *, 2>{nullptr, &leak}) {
      const MatchResult r = Match(h, g, w, l);
      for (size_t q = 0; q < Q; ++q) {
        double s = r.leak_fwd[q];
        for (size_t p = 0; p < P; ++p) s += r.m_fwd(p, q);
        worst = std::max(worst, std::abs(s - 1.0));
      }
      for (size_t p = 0; p < P; ++p) {
        double s = r.leak_bwd[p];
        for (size_t q = 0; q < Q; ++q) s += r.m_bwd(p, q);
        worst = std::max(worst, std::abs(s - 1.0));
      }
    }
  }
  return {worst <= 1e-12, "max |sum - 1| " + Fmt("%.3g", worst) + " over 600 matches (tol 1e-12)"};
}

Outcome MetricOracles() {
  std::mt19937_64 rng(11);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 2 + rng() % 199;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % 9) / 8.0;
      y[i] = static_cast<int>(rng() % 2);
    }
    y[0] = 1;
    y[n - 1] = 0;
    if (Auc(s, y) != oracle::PairCountAuc(s, y)) ++mismatches;
  }
  std::vector<std::string> fails;
  auto expect = [&](const char *name, double got, double want) {
    if (std::abs(got - want) > 1e-12) fails.push_back(name);
  };
  expect("auc worked example",
         Auc(std::vector<double>{0.9, 0.8, 0.7, 0.6}, std::vector<int>{1, 0, 1, 0}), 0.75);
  const std::vector<RankedQuery> one{{{1, 2, 3}, {1}}};
  expect("map rank1", MeanAveragePrecision(one), 1.0);
  expect("p@1 rank1", PrecisionAtK(one, 1), 1.0);
  const RankedQuery ap{{1, 2, 3}, {1, 3}};
  expect("ap ranks 1,3", AveragePrecision(ap), (1.0 + 2.0 / 3.0) / 2.0);
  const std::vector<RankedQuery> two{ap};
  expect("r@10 all retrieved", RecallAtK(two, 10), 1.0);
  expect("p@3", PrecisionAtK(two, 3), 2.0 / 3.0);
  expect("f1@3", F1AtK(two, 3), 2.0 * (2.0 / 3.0) * 1.0 / (2.0 / 3.0 + 1.0));
  expect("f1 no hits", F1AtK(std::vector<RankedQuery>{{{5}, {6}}}, 1), 0.0);
  std::string detail = "AUC vs pair counting: " + std::to_string(mismatches) +
                       " mismatches in 500 tied instances; hand examples: " +
                       (fails.empty() ? "all match" : "failed");
  for (const auto &f : fails) detail += " [" + f + "]";
  return {mismatches == 0 && fails.empty(), detail};
}

Outcome Truncation() {
  Rng rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int violations = 0;
  for (int draw = 0; draw < 100; ++draw) {
    const size_t vocab = 40, dim = 5, d_ce = 2 * (1 + UniformIndex(rng, 4));
    Matrix emb(vocab, dim);
    for (double &v : emb.data()) v = gauss(rng);
    const EncoderParams params = InitEncoderParams(dim, d_ce, rng, 0.5);
    ContextWindow w;
    const size_t len = 1 + UniformIndex(rng, 20);
    for (size_t i = 0; i < len; ++i) w.token_ids.push_back(2 + static_cast<TokenId>(UniformIndex(rng, vocab - 2)));
    w.entity_pos = UniformIndex(rng, len);
    const auto base = EncodeAnchored(w, params, emb);
    ContextWindow suffix = w, prefix = w;
    for (size_t i = w.entity_pos + 1; i < len; ++i) suffix.token_ids[i] = 2 + static_cast<TokenId>(UniformIndex(rng, vocab - 2));
    for (size_t k = UniformIndex(rng, 3); k > 0; --k) suffix.token_ids.push_back(2);
    for (size_t i = 0; i < w.entity_pos; ++i) prefix.token_ids[i] = 2 + static_cast<TokenId>(UniformIndex(rng, vocab - 2));
    const size_t extra = UniformIndex(rng, 3);
    prefix.token_ids.insert(prefix.token_ids.begin(), extra, 3);
    prefix.entity_pos += extra;
    const auto s = EncodeAnchored(suffix, params, emb), p = EncodeAnchored(prefix, params, emb);
    const size_t h = d_ce / 2;
    for (size_t j = 0; j < h; ++j) violations += s[j] != base[j];
    for (size_t j = h; j < d_ce; ++j) violations += p[j] != base[j];
  }
  return {violations == 0, "100 draws, " + std::to_string(violations) + " bitwise changes"};
}

// --- CLI-driven criteria ---------------------------------------------------

fs::path g_root;

int Run(const std::string &args) {
  const std::string cmd = std::string(SYNONYMNET_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double ReportValue(const std::string &report, const std::string &key) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return std::stod(line.substr(key.size() + 1));
  }
  return std::nan("");
}

// synth + ingest + train + evaluate; returns the report text.
std::string Pipeline(const std::string &tag, uint64_t seed, double noise,
                     const std::string &train_extra, size_t epochs) {
  const fs::path dir = g_root / tag;
  fs::create_directories(dir);
  const std::string base = "--seed " + std::to_string(seed) + " --workdir " + dir.string() + " ";
  const bool ok =
      Run(base + "synth --clusters 40 --entities-per-cluster 3 --contexts 30 --vocab 2000 --noise " +
          Fmt("%g", noise)) == 0 &&
      Run(base + "ingest --valid-frac 0 --test-frac 0.25") == 0 &&
      Run(base + "train --objective triplet --d-ce 32 --contexts 5 --max-len 20 --optimizer adam "
                 "--lr 3e-4 --batch-size 16 --margin 0.75 --epochs " +
          std::to_string(epochs) + " " + train_extra) == 0 &&
      Run(base + "evaluate --split test --out report.txt") == 0;
  return ok ? Slurp(dir / "report.txt") : std::string();
}

constexpr size_t kEpochs = 30;

Outcome EndToEnd() {
  const auto t0 = Clock::now();
  double auc = 0.0, map = 0.0;
  std::string per_seed;
  for (uint64_t seed : {1, 2, 3}) {
    const std::string report = Pipeline("e2e_" + std::to_string(seed), seed, 0.3, "", kEpochs);
    if (report.empty()) return {false, "pipeline failed for seed " + std::to_string(seed)};
    const double a = ReportValue(report, "auc"), m = ReportValue(report, "map");
    auc += a / 3.0;
    map += m / 3.0;
    per_seed += " seed" + std::to_string(seed) + "=" + Fmt("%.4f", a) + "/" + Fmt("%.4f", m);
  }
  return {auc >= 0.90 && map >= 0.85,
          "mean AUC " + Fmt("%.4f", auc) + " (>= 0.90), mean MAP " + Fmt("%.4f", map) +
              " (>= 0.85);" + per_seed + "; " + Fmt("%.0f", Seconds(t0)) + " s"};
}

Outcome Ablation() {
  double on = 0.0, off = 0.0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const std::string s = std::to_string(seed);
    const std::string a = Pipeline("abl_on_" + s, seed, 0.6, "--leaky true", kEpochs);
    const std::string b = Pipeline("abl_off_" + s, seed, 0.6, "--leaky false", kEpochs);
    if (a.empty() || b.empty()) return {false, "pipeline failed for seed " + s};
    on += ReportValue(a, "auc") / 5.0;
    off += ReportValue(b, "auc") / 5.0;
  }
  return {on >= off - 0.02, "noise 0.6, 5 seeds: leaky on AUC " + Fmt("%.4f", on) +
                                ", leaky off AUC " + Fmt("%.4f", off) + " (fail if on < off - 0.02)"};
}

Outcome Determinism() {
  std::vector<std::string> diffs;
  std::string first_report, first_history, first_ckpt;
  for (int rep = 0; rep < 2; ++rep) {
    const std::string report = Pipeline("det_" + std::to_string(rep), 4, 0.3, "", 3);
    if (report.empty()) return {false, "pipeline failed"};
    const fs::path dir = g_root / ("det_" + std::to_string(rep));
    const std::string history = Slurp(dir / "history.tsv"), ckpt = Slurp(dir / "model.ckpt");
    if (rep == 0) {
      first_report = report;
      first_history = history;
      first_ckpt = ckpt;
    } else {
      if (report != first_report) diffs.push_back("report");
      if (history != first_history) diffs.push_back("history");
      if (ckpt != first_ckpt) diffs.push_back("checkpoint");
    }
  }
  // Round trip: load then save must reproduce the file and every parameter bit.
  const fs::path ckpt_path = g_root / "det_0" / "model.ckpt";
  Model m = LoadCheckpointFile(ckpt_path.string());
  std::ostringstream again;
  SaveCheckpoint(m, again);
  if (again.str() != first_ckpt) diffs.push_back("checkpoint round trip");
  std::istringstream in(again.str());
  Model back = LoadCheckpoint(in);
  auto a = m.params.All(), b = back.params.All();
  for (size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].value->data().size() == b[i].value->data().size() &&
          std::memcmp(a[i].value->data().data(), b[i].value->data().data(),
                      a[i].value->data().size() * sizeof(double)) == 0)) {
      diffs.push_back("param " + a[i].name);
    }
  }
  std::string detail = diffs.empty() ? "report, history and checkpoint byte-identical; round trip bit-exact"
                                     : "differs:";
  for (const auto &d : diffs) detail += " " + d;
  return {diffs.empty(), detail};
}

}  // namespace
}  // namespace synonymnet

int main() {
  using namespace synonymnet;
  g_root = fs::temp_directory_path() / ("synonymnet_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(g_root);
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"matrix-form equivalence", MatrixForm},
      {"gradient fidelity", GradientFidelity},
      {"loss trivial cases", LossTrivialCases},
      {"stochasticity invariants", Stochasticity},
      {"metric oracles", MetricOracles},
      {"synthetic end-to-end", EndToEnd},
      {"ablation direction", Ablation},
      {"encoder truncation invariant", Truncation},
      {"determinism", Determinism},
  };
  int failed = 0;
  for (const auto &[name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  fs::remove_all(g_root);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
