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

#ifndef SYNONYMNET_ERROR_H_
#define SYNONYMNET_ERROR_H_

#include <stdexcept>
#include <string>

namespace synonymnet {

// Base class for all library errors. The CLI maps the subclasses onto exit
// codes: DataError -> 2, NumericError -> 3, UsageError -> 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed or missing input data (files, unknown entities, empty samples).
class DataError : public Error {
 public:
  using Error::Error;
};

// Non-finite losses, gradients or parameters.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values or command-line usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace synonymnet

#endif  // SYNONYMNET_ERROR_H_
