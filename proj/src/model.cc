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

#include "synonymnet/model.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "synonymnet/error.h"
#include "synonymnet/optimizer.h"

namespace synonymnet {
namespace {

size_t ParseCount(const std::string &key, const std::string &v) {
  size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw UsageError("config " + key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

double ParseReal(const std::string &key, const std::string &v) {
  char *end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0') {
    throw UsageError("config " + key + ": expected a number, got '" + v + "'");
  }
  return out;
}

bool ParseBool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw UsageError("config " + key + ": expected true/false, got '" + v + "'");
}

std::string Real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Trim(const std::string &s) {
  const char *ws = " \t\r\n";
  size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// Visits every stored parameter as (name, matrix, trainable under config).
template <typename Params, typename Fn>
void ForEachParam(Params &p, const TrainConfig &config, Fn fn) {
  fn("encoder.fw.w_x", p.encoder.forward.w_x, true);
  fn("encoder.fw.w_h", p.encoder.forward.w_h, true);
  fn("encoder.fw.bias", p.encoder.forward.bias, true);
  fn("encoder.bw.w_x", p.encoder.backward.w_x, true);
  fn("encoder.bw.w_h", p.encoder.backward.w_h, true);
  fn("encoder.bw.bias", p.encoder.backward.bias, true);
  fn("matcher.w_bm", p.w_bm, true);
  fn("matcher.leaky", p.leaky.vector, config.leaky && config.leaky_trainable);
  if (p.embeddings) fn("embeddings", *p.embeddings, config.finetune_embeddings);
}

}  // namespace

const char *ObjectiveName(Objective o) {
  return o == Objective::kSiamese ? "siamese" : "triplet";
}

Objective ParseObjective(const std::string &name) {
  if (name == "siamese") return Objective::kSiamese;
  if (name == "triplet") return Objective::kTriplet;
  throw UsageError("unknown objective '" + name + "' (expected siamese or triplet)");
}

void TrainConfig::Validate() const {
  if (contexts < 1) throw UsageError("contexts (P) must be >= 1");
  if (max_len < 1) throw UsageError("max_len (T) must be >= 1");
  if (d_ce == 0 || d_ce % 2 != 0) throw UsageError("d_ce must be even and positive");
  if (!(margin > 0.0)) throw UsageError("margin must be > 0");
  if (!(learning_rate >= 0.0)) throw UsageError("learning_rate must be >= 0");
  if (batch_size < 1) throw UsageError("batch_size must be >= 1");
  if (!(clip_norm >= 0.0)) throw UsageError("clip_norm must be >= 0");
  if (!(init_scale > 0.0)) throw UsageError("init_scale must be > 0");
  ParseOptimizerKind(optimizer);
}

void SetConfigValue(TrainConfig &c, const std::string &key, const std::string &value) {
  const std::string v = Trim(value);
  if (key == "contexts") c.contexts = ParseCount(key, v);
  else if (key == "max_len") c.max_len = ParseCount(key, v);
  else if (key == "d_ce") c.d_ce = ParseCount(key, v);
  else if (key == "margin") c.margin = ParseReal(key, v);
  else if (key == "objective") c.objective = ParseObjective(v);
  else if (key == "optimizer") c.optimizer = v;
  else if (key == "batch_size") c.batch_size = ParseCount(key, v);
  else if (key == "learning_rate") c.learning_rate = ParseReal(key, v);
  else if (key == "epochs") c.epochs = ParseCount(key, v);
  else if (key == "seed") c.seed = ParseCount(key, v);
  else if (key == "encoder") c.encoder = ParseEncoderKind(v);
  else if (key == "leaky") c.leaky = ParseBool(key, v);
  else if (key == "leaky_trainable") c.leaky_trainable = ParseBool(key, v);
  else if (key == "symmetric_bm") c.symmetric_bm = ParseBool(key, v);
  else if (key == "finetune_embeddings") c.finetune_embeddings = ParseBool(key, v);
  else if (key == "resample_contexts") c.resample_contexts = ParseBool(key, v);
  else if (key == "clip_norm") c.clip_norm = ParseReal(key, v);
  else if (key == "neg_ratio") c.neg_ratio = ParseCount(key, v);
  else if (key == "samples_per_epoch") c.samples_per_epoch = ParseCount(key, v);
  else if (key == "init_scale") c.init_scale = ParseReal(key, v);
  else throw UsageError("unknown config key '" + key + "'");
}

void ApplyConfigText(TrainConfig &config, std::istream &in) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    SetConfigValue(config, Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void ApplyConfigFile(TrainConfig &config, const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read config file " + path);
  ApplyConfigText(config, in);
}

std::string FormatConfig(const TrainConfig &c) {
  std::ostringstream o;
  auto b = [](bool v) { return v ? "true" : "false"; };
  o << "contexts=" << c.contexts << '\n'
    << "max_len=" << c.max_len << '\n'
    << "d_ce=" << c.d_ce << '\n'
    << "margin=" << Real(c.margin) << '\n'
    << "objective=" << ObjectiveName(c.objective) << '\n'
    << "optimizer=" << c.optimizer << '\n'
    << "batch_size=" << c.batch_size << '\n'
    << "learning_rate=" << Real(c.learning_rate) << '\n'
    << "epochs=" << c.epochs << '\n'
    << "seed=" << c.seed << '\n'
    << "encoder=" << EncoderKindName(c.encoder) << '\n'
    << "leaky=" << b(c.leaky) << '\n'
    << "leaky_trainable=" << b(c.leaky_trainable) << '\n'
    << "symmetric_bm=" << b(c.symmetric_bm) << '\n'
    << "finetune_embeddings=" << b(c.finetune_embeddings) << '\n'
    << "resample_contexts=" << b(c.resample_contexts) << '\n'
    << "clip_norm=" << Real(c.clip_norm) << '\n'
    << "neg_ratio=" << c.neg_ratio << '\n'
    << "samples_per_epoch=" << c.samples_per_epoch << '\n'
    << "init_scale=" << Real(c.init_scale) << '\n';
  return o.str();
}

std::vector<ModelParams::Named> ModelParams::Trainable(const TrainConfig &config) {
  std::vector<Named> out;
  ForEachParam(*this, config, [&](const char *name, Matrix &m, bool trainable) {
    if (trainable) out.push_back({name, &m});
  });
  return out;
}

std::vector<ModelParams::Named> ModelParams::All() {
  std::vector<Named> out;
  TrainConfig any;
  ForEachParam(*this, any, [&](const char *name, Matrix &m, bool) {
    out.push_back({name, &m});
  });
  return out;
}

Model InitModel(const TrainConfig &config, const Matrix &pretrained, Rng &rng) {
  config.Validate();
  Model model;
  model.config = config;
  model.params.encoder =
      InitEncoderParams(pretrained.cols(), config.d_ce, rng, config.init_scale);
  if (config.symmetric_bm) {
    model.params.w_bm = InitSymmetric(config.d_ce, config.init_scale, rng);
  } else {
    std::uniform_real_distribution<double> u(-config.init_scale, config.init_scale);
    model.params.w_bm = Matrix(config.d_ce, config.d_ce);
    for (double &v : model.params.w_bm.data()) v = u(rng);
  }
  model.params.leaky = LeakyUnit::Zero(config.d_ce);
  model.params.leaky.trainable = config.leaky_trainable;
  if (config.finetune_embeddings) model.params.embeddings = pretrained;
  return model;
}

ModelVars BindModel(Tape &tape, const Model &model, const Matrix &pretrained,
                    bool trainable) {
  ModelVars v;
  std::vector<Var> bound;
  ForEachParam(model.params, model.config,
               [&](const char *, const Matrix &m, bool is_trainable) {
                 Var var = trainable && is_trainable ? tape.ParameterRef(m)
                                                     : tape.ConstantRef(m);
                 bound.push_back(var);
                 if (trainable && is_trainable) v.trainable.push_back(var);
               });
  v.encoder.forward = {bound[0], bound[1], bound[2]};
  v.encoder.backward = {bound[3], bound[4], bound[5]};
  v.encoder.hidden = model.params.encoder.hidden();
  v.w_bm = model.config.symmetric_bm ? tape.Symmetrize(bound[6]) : bound[6];
  if (model.config.leaky) v.leaky = bound[7];
  v.embeddings = model.params.embeddings ? bound[8] : tape.ConstantRef(pretrained);
  return v;
}

Matrix EffectiveBilinear(const Model &model) {
  const Matrix &w = model.params.w_bm;
  if (!model.config.symmetric_bm) return w;
  Matrix out(w.rows(), w.cols());
  for (size_t i = 0; i < w.rows(); ++i) {
    for (size_t j = 0; j < w.cols(); ++j) out(i, j) = 0.5 * (w(i, j) + w(j, i));
  }
  return out;
}

Matrix EncodeContexts(const Model &model, const Matrix &pretrained,
                      std::span<const ContextWindow> windows) {
  return EncodeBatch(windows, model.params.encoder, model.EmbeddingMatrix(pretrained),
                     model.config.encoder);
}

MatchResult MatchEncoded(const Model &model, const Matrix &h, const Matrix &g) {
  const Matrix w = EffectiveBilinear(model);
  return Match(h, g, w, model.config.leaky ? &model.params.leaky : nullptr);
}

}  // namespace synonymnet
