// Copyright 2026 The AGCN Authors
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace agcn {

#ifdef AGCN_FLOAT32
using Scalar = float;
#else
using Scalar = double;
#endif

/// Root of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent input data. The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure during optimization. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define AGCN_DATA_ERROR(Name)    \
  class Name : public DataError { \
   public:                        \
    using DataError::DataError;   \
  }

AGCN_DATA_ERROR(DuplicateEdge);
AGCN_DATA_ERROR(SelfLoop);
AGCN_DATA_ERROR(NodeIdOutOfRange);
AGCN_DATA_ERROR(SchemaMismatch);
AGCN_DATA_ERROR(TargetsEqual);
AGCN_DATA_ERROR(PositiveNotAnEdge);
AGCN_DATA_ERROR(NegativeSamplingExhausted);
AGCN_DATA_ERROR(SingleClassDataset);
AGCN_DATA_ERROR(SingleClassInput);
AGCN_DATA_ERROR(InfeasibleConfig);
AGCN_DATA_ERROR(CheckpointError);

#undef AGCN_DATA_ERROR

/// Malformed text input; carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : DataError(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class IncompleteTape : public Error {
 public:
  using Error::Error;
};

class DivergedLoss : public NumericalError {
 public:
  DivergedLoss(int epoch, const std::string& what)
      : NumericalError("loss diverged at epoch " + std::to_string(epoch) + ": " + what),
        epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace agcn
