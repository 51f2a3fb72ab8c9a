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

#include "synonymnet/checkpoint.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "synonymnet/error.h"

namespace synonymnet {
namespace {

constexpr const char *kMagic = "synonymnet-checkpoint";

std::string NextLine(std::istream &in, const std::string &what) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("checkpoint truncated: expected " + what);
  return line;
}

size_t ParseSize(const std::string &tok, const std::string &field) {
  char *end = nullptr;
  const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
  if (tok.empty() || *end != '\0' || tok[0] == '-') {
    throw DataError("checkpoint: bad value '" + tok + "' for " + field);
  }
  return static_cast<size_t>(v);
}

// Expected shape of each named parameter under `m`'s config and the
// input dimension recorded in the first block.
void ExpectShape(const std::string &name, size_t rows, size_t cols, size_t want_rows,
                 size_t want_cols) {
  if (rows != want_rows || cols != want_cols) {
    throw ShapeError("checkpoint: parameter " + name + " has shape " + std::to_string(rows) +
                     "x" + std::to_string(cols) + ", expected " + std::to_string(want_rows) +
                     "x" + std::to_string(want_cols));
  }
}

}  // namespace

void SaveCheckpoint(const Model &model, std::ostream &out) {
  out << kMagic << ' ' << kCheckpointVersion << '\n';
  const std::string config = FormatConfig(model.config);
  size_t n = 0;
  for (char c : config) n += c == '\n';
  out << "config " << n << '\n' << config;
  Model copy = model;
  const auto params = copy.params.All();
  out << "params " << params.size() << '\n';
  char buf[64];
  for (const auto &p : params) {
    const Matrix &m = *p.value;
    out << "param " << p.name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (size_t r = 0; r < m.rows(); ++r) {
      for (size_t c = 0; c < m.cols(); ++c) {
        std::snprintf(buf, sizeof(buf), "%a", m(r, c));
        if (c) out << ' ';
        out << buf;
      }
      out << '\n';
    }
  }
}

void SaveCheckpointFile(const Model &model, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path);
  SaveCheckpoint(model, out);
  if (!out) throw DataError("error writing checkpoint " + path);
}

Model LoadCheckpoint(std::istream &in) {
  {
    std::istringstream head(NextLine(in, "header"));
    std::string magic;
    int version = -1;
    head >> magic >> version;
    if (magic != kMagic) throw DataError("not a checkpoint file (header '" + magic + "')");
    if (version != kCheckpointVersion) {
      throw DataError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kCheckpointVersion) + ")");
    }
  }
  Model model;
  {
    std::istringstream cl(NextLine(in, "config count"));
    std::string word, count;
    cl >> word >> count;
    if (word != "config") throw DataError("checkpoint: expected 'config <n>', got '" + word + "'");
    const size_t n = ParseSize(count, "config count");
    std::ostringstream text;
    for (size_t i = 0; i < n; ++i) text << NextLine(in, "config line") << '\n';
    std::istringstream ctext(text.str());
    ApplyConfigText(model.config, ctext);
    model.config.Validate();
  }
  std::istringstream pl(NextLine(in, "params count"));
  std::string word, count;
  pl >> word >> count;
  if (word != "params") throw DataError("checkpoint: expected 'params <n>', got '" + word + "'");
  const size_t n = ParseSize(count, "params count");

  // Allocate the expected layout, then fill block by block.
  model.params.leaky = LeakyUnit::Zero(model.config.d_ce);
  model.params.leaky.trainable = model.config.leaky_trainable;
  const bool has_embeddings = n == 9;
  if (n != 8 && n != 9) {
    throw DataError("checkpoint: params count " + std::to_string(n) + ", expected 8 or 9");
  }
  if (has_embeddings) model.params.embeddings = Matrix();
  const auto slots = model.params.All();
  const size_t h4 = 2 * model.config.d_ce;  // 4 * (d_ce / 2)
  const size_t h = model.config.d_ce / 2;
  size_t input_dim = 0;
  for (size_t i = 0; i < slots.size(); ++i) {
    std::istringstream bl(NextLine(in, "param header"));
    std::string tag, name, rows_s, cols_s;
    bl >> tag >> name >> rows_s >> cols_s;
    if (tag != "param") throw DataError("checkpoint: expected 'param', got '" + tag + "'");
    if (name != slots[i].name) {
      throw DataError("checkpoint: expected parameter " + slots[i].name + ", found '" + name + "'");
    }
    const size_t rows = ParseSize(rows_s, name + " rows");
    const size_t cols = ParseSize(cols_s, name + " cols");
    if (name == "encoder.fw.w_x") input_dim = rows;
    if (name == "encoder.fw.w_x" || name == "encoder.bw.w_x") {
      ExpectShape(name, rows, cols, input_dim, h4);
    } else if (name == "encoder.fw.w_h" || name == "encoder.bw.w_h") {
      ExpectShape(name, rows, cols, h, h4);
    } else if (name == "encoder.fw.bias" || name == "encoder.bw.bias") {
      ExpectShape(name, rows, cols, 1, h4);
    } else if (name == "matcher.w_bm") {
      ExpectShape(name, rows, cols, model.config.d_ce, model.config.d_ce);
    } else if (name == "matcher.leaky") {
      ExpectShape(name, rows, cols, 1, model.config.d_ce);
    } else if (name == "embeddings") {
      ExpectShape(name, rows, cols, rows, input_dim);
    }
    Matrix m(rows, cols);
    for (size_t r = 0; r < rows; ++r) {
      std::istringstream vals(NextLine(in, name + " row " + std::to_string(r)));
      std::string tok;
      for (size_t c = 0; c < cols; ++c) {
        if (!(vals >> tok)) {
          throw DataError("checkpoint: parameter " + name + " row " + std::to_string(r) +
                          " has fewer than " + std::to_string(cols) + " values");
        }
        char *end = nullptr;
        m(r, c) = std::strtod(tok.c_str(), &end);
        if (*end != '\0') {
          throw DataError("checkpoint: parameter " + name + " has a bad value '" + tok + "'");
        }
      }
      if (vals >> tok) {
        throw DataError("checkpoint: parameter " + name + " row " + std::to_string(r) +
                        " has more than " + std::to_string(cols) + " values");
      }
    }
    *slots[i].value = std::move(m);
  }
  return model;
}

Model LoadCheckpointFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read checkpoint " + path);
  return LoadCheckpoint(in);
}

}  // namespace synonymnet
