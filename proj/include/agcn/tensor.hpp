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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "agcn/common.hpp"

namespace agcn {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Scalar fill = Scalar{0})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> data);

  static Matrix identity(std::size_t n);
  static Matrix row(std::vector<Scalar> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Scalar operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Scalar> row_span(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Scalar> row_span(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<Scalar>& data() noexcept { return data_; }
  const std::vector<Scalar>& data() const noexcept { return data_; }

  bool all_finite() const noexcept;
  /// Throws NumericalError naming `what` if any entry is NaN or infinite.
  void require_finite(const std::string& what) const;
  void fill(Scalar v);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// Rows of 0/1 entries stored as column indices; a row may repeat no index.
/// This is how concatenated one-hot attribute vectors are represented.
struct OneHotRows {
  std::size_t cols = 0;
  std::vector<std::vector<std::uint32_t>> active;

  std::size_t rows() const noexcept { return active.size(); }
  Matrix dense() const;
};

Matrix matmul(const Matrix& a, const Matrix& b);
/// One-hot rows times a dense matrix: each output row is the sum of the
/// selected rows of b. Cost is proportional to the number of nonzeros.
Matrix matmul(const OneHotRows& a, const Matrix& b);
Matrix elementwise_mul(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

/// Handle to a value recorded on a Tape.
struct Var {
  std::uint32_t id = ~std::uint32_t{0};
  bool valid() const noexcept { return id != ~std::uint32_t{0}; }
};

/// Reverse-mode tape over matrix primitives. Values are computed eagerly as
/// ops are recorded; backward() replays the records in reverse order.
class Tape {
 public:
  /// Leaf that receives no gradient.
  Var constant(Matrix value);
  /// Leaf whose gradient is collected by backward().
  Var parameter(Matrix value);

  Var matmul(Var a, Var b);
  Var matmul(std::shared_ptr<const OneHotRows> a, Var b);
  Var hadamard(Var a, Var b);
  Var add(Var a, Var b);
  /// a (r x c) plus a 1 x c row repeated on every row.
  Var add_row(Var a, Var row);
  Var scale(Var a, Scalar s);
  /// Multiplies row r by factors[r].
  Var scale_rows(Var a, std::vector<Scalar> factors);
  /// out row k = a row index[k].
  Var gather_rows(Var a, std::vector<std::uint32_t> index);
  /// out row index[k] += a row k; out has out_rows rows.
  Var scatter_add_rows(Var a, std::vector<std::uint32_t> index, std::size_t out_rows);
  Var concat_cols(std::span<const Var> parts);
  /// Horizontally concatenates the given rows of a into one 1 x (k * cols) row.
  Var flatten_rows(Var a, std::vector<std::uint32_t> rows);
  Var leaky_relu(Var a, Scalar negative_slope);
  Var abs(Var a);
  Var sigmoid(Var a);
  /// 1 x 1 sum of all entries.
  Var sum(Var a);
  /// Binary cross-entropy of a 1 x 1 probability against label, with the
  /// probability clamped to [eps, 1 - eps] before the log.
  Var bce(Var prob, int label, Scalar eps = Scalar(1e-12));

  const Matrix& value(Var v) const;
  /// Gradient of the last backward() loss w.r.t. v (zero for untouched slots).
  const Matrix& grad(Var v) const;

  /// Zeroes all gradients, seeds d(loss)/d(loss) = 1 and propagates. Calling
  /// it again reproduces the same gradients bit for bit.
  void backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    kLeaf,
    kMatMul,
    kOneHotMatMul,
    kHadamard,
    kAdd,
    kAddRow,
    kScale,
    kScaleRows,
    kGather,
    kScatterAdd,
    kConcatCols,
    kFlattenRows,
    kLeakyRelu,
    kAbs,
    kSigmoid,
    kSum,
    kBce,
  };

  struct Node {
    Op op = Op::kLeaf;
    bool trainable = false;
    bool requires_grad = false;
    std::vector<std::uint32_t> inputs;
    Matrix value;
    Matrix grad;
    Scalar scalar = 0;
    int label = 0;
    std::vector<std::uint32_t> index;
    std::vector<Scalar> factors;
    std::shared_ptr<const OneHotRows> onehot;
  };

  Var push(Node node);
  const Node& node(Var v) const;
  void accumulate(std::uint32_t id, const Matrix& g);

  std::vector<Node> nodes_;
};

}  // namespace agcn
