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

#ifndef SYNONYMNET_CHECKPOINT_H_
#define SYNONYMNET_CHECKPOINT_H_

#include <istream>
#include <ostream>
#include <string>

#include "synonymnet/model.h"

namespace synonymnet {

inline constexpr int kCheckpointVersion = 1;

// Text container:
//   synonymnet-checkpoint <version>
//   config <n>            followed by n "key=value" lines
//   params <n>            followed by n parameter blocks:
//   param <name> <rows> <cols>
//   <rows lines of cols hexfloat values>
// Hexfloats make the round trip bit-exact.
void SaveCheckpoint(const Model &model, std::ostream &out);
void SaveCheckpointFile(const Model &model, const std::string &path);

// Throws DataError on version or format problems and ShapeError when a
// parameter block disagrees with the stored config; both name the field.
Model LoadCheckpoint(std::istream &in);
Model LoadCheckpointFile(const std::string &path);

}  // namespace synonymnet

#endif  // SYNONYMNET_CHECKPOINT_H_
