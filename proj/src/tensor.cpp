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

#include "agcn/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace agcn {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw ShapeMismatch("matrix data length " + std::to_string(data_.size()) + " != " +
                        std::to_string(rows) + "x" + std::to_string(cols));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::row(std::vector<Scalar> values) {
  const auto n = values.size();
  return Matrix(1, n, std::move(values));
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](Scalar x) { return std::isfinite(x); });
}

void Matrix::require_finite(const std::string& what) const {
  if (!all_finite()) throw NumericalError(what + " contains NaN or Inf");
}

void Matrix::fill(Scalar v) { std::fill(data_.begin(), data_.end(), v); }

Matrix OneHotRows::dense() const {
  Matrix m(rows(), cols);
  for (std::size_t r = 0; r < rows(); ++r)
    for (auto c : active[r]) m(r, c) = 1;
  return m;
}

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch(std::string(op) + ": " + shape(a) + " vs " + shape(b));
}

// out += a * b
void gemm_acc(const Matrix& a, const Matrix& b, Matrix& out) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  const Scalar* A = a.data().data();
  const Scalar* B = b.data().data();
  Scalar* C = out.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    Scalar* c = C + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const Scalar s = A[i * k + p];
      if (s == Scalar{0}) continue;
      const Scalar* brow = B + p * m;
      for (std::size_t j = 0; j < m; ++j) c[j] += s * brow[j];
    }
  }
}

// out += a * b^T
void gemm_nt_acc(const Matrix& a, const Matrix& b, Matrix& out) {
  const std::size_t n = a.rows(), m = a.cols(), k = b.rows();
  const Scalar* A = a.data().data();
  const Scalar* B = b.data().data();
  Scalar* C = out.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar* arow = A + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const Scalar* brow = B + p * m;
      Scalar s = 0;
      for (std::size_t j = 0; j < m; ++j) s += arow[j] * brow[j];
      C[i * k + p] += s;
    }
  }
}

// out += a^T * b
void gemm_tn_acc(const Matrix& a, const Matrix& b, Matrix& out) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  const Scalar* A = a.data().data();
  const Scalar* B = b.data().data();
  Scalar* C = out.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar* brow = B + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const Scalar s = A[i * k + p];
      if (s == Scalar{0}) continue;
      Scalar* c = C + p * m;
      for (std::size_t j = 0; j < m; ++j) c[j] += s * brow[j];
    }
  }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("matmul: " + shape(a) + " * " + shape(b));
  Matrix out(a.rows(), b.cols());
  gemm_acc(a, b, out);
  return out;
}

Matrix matmul(const OneHotRows& a, const Matrix& b) {
  if (a.cols != b.rows())
    throw ShapeMismatch("matmul: one-hot " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols) + " * " + shape(b));
  Matrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row_span(r);
    for (auto c : a.active[r]) {
      if (c >= a.cols) throw ShapeMismatch("one-hot index out of range");
      auto src = b.row_span(c);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
  }
  return out;
}

Matrix elementwise_mul(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "elementwise_mul");
  Matrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k] * b.data()[k];
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = a.data()[k] + b.data()[k];
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

// ---------------------------------------------------------------------------
// Tape

Var Tape::push(Node node) {
  if (node.op != Op::kLeaf)
    for (auto in : node.inputs) node.requires_grad = node.requires_grad || nodes_[in].requires_grad;
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || v.id >= nodes_.size())
    throw IncompleteTape("variable " + std::to_string(v.id) + " is not on this tape");
  return nodes_[v.id];
}

Var Tape::constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::parameter(Matrix value) {
  Node n;
  n.value = std::move(value);
  n.trainable = true;
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
  Node n;
  n.op = Op::kMatMul;
  n.value = agcn::matmul(node(a).value, node(b).value);
  n.inputs = {a.id, b.id};
  return push(std::move(n));
}

Var Tape::matmul(std::shared_ptr<const OneHotRows> a, Var b) {
  Node n;
  n.op = Op::kOneHotMatMul;
  n.value = agcn::matmul(*a, node(b).value);
  n.inputs = {b.id};
  n.onehot = std::move(a);
  return push(std::move(n));
}

Var Tape::hadamard(Var a, Var b) {
  Node n;
  n.op = Op::kHadamard;
  n.value = elementwise_mul(node(a).value, node(b).value);
  n.inputs = {a.id, b.id};
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  Node n;
  n.op = Op::kAdd;
  n.value = agcn::add(node(a).value, node(b).value);
  n.inputs = {a.id, b.id};
  return push(std::move(n));
}

Var Tape::add_row(Var a, Var row) {
  const auto& av = node(a).value;
  const auto& rv = node(row).value;
  if (rv.rows() != 1 || rv.cols() != av.cols())
    throw ShapeMismatch("add_row: " + shape(av) + " + row " + shape(rv));
  Node n;
  n.op = Op::kAddRow;
  n.value = av;
  for (std::size_t r = 0; r < av.rows(); ++r) {
    auto dst = n.value.row_span(r);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += rv(0, c);
  }
  n.inputs = {a.id, row.id};
  return push(std::move(n));
}

Var Tape::scale(Var a, Scalar s) {
  Node n;
  n.op = Op::kScale;
  n.value = node(a).value;
  for (auto& x : n.value.data()) x *= s;
  n.scalar = s;
  n.inputs = {a.id};
  return push(std::move(n));
}

Var Tape::scale_rows(Var a, std::vector<Scalar> factors) {
  const auto& av = node(a).value;
  if (factors.size() != av.rows())
    throw ShapeMismatch("scale_rows: " + std::to_string(factors.size()) + " factors for " +
                        shape(av));
  Node n;
  n.op = Op::kScaleRows;
  n.value = av;
  for (std::size_t r = 0; r < av.rows(); ++r)
    for (auto& x : n.value.row_span(r)) x *= factors[r];
  n.factors = std::move(factors);
  n.inputs = {a.id};
  return push(std::move(n));
}

Var Tape::gather_rows(Var a, std::vector<std::uint32_t> index) {
  const auto& av = node(a).value;
  Node n;
  n.op = Op::kGather;
  n.value = Matrix(index.size(), av.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= av.rows()) throw ShapeMismatch("gather_rows: index out of range");
    auto src = av.row_span(index[k]);
    std::copy(src.begin(), src.end(), n.value.row_span(k).begin());
  }
  n.index = std::move(index);
  n.inputs = {a.id};
  return push(std::move(n));
}

Var Tape::scatter_add_rows(Var a, std::vector<std::uint32_t> index, std::size_t out_rows) {
  const auto& av = node(a).value;
  if (index.size() != av.rows())
    throw ShapeMismatch("scatter_add_rows: " + std::to_string(index.size()) +
                        " indices for " + shape(av));
  Node n;
  n.op = Op::kScatterAdd;
  n.value = Matrix(out_rows, av.cols());
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= out_rows) throw ShapeMismatch("scatter_add_rows: index out of range");
    auto src = av.row_span(k);
    auto dst = n.value.row_span(index[k]);
    for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
  }
  n.index = std::move(index);
  n.inputs = {a.id};
  return push(std::move(n));
}

Var Tape::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeMismatch("concat_cols: no inputs");
  const std::size_t rows = node(parts[0]).value.rows();
  std::size_t cols = 0;
  for (auto p : parts) {
    if (node(p).value.rows() != rows)
      throw ShapeMismatch("concat_cols: row count mismatch");
    cols += node(p).value.cols();
  }
  Node n;
  n.op = Op::kConcatCols;
  n.value = Matrix(rows, cols);
  std::size_t off = 0;
  for (auto p : parts) {
    const auto& pv = node(p).value;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < pv.cols(); ++c) n.value(r, off + c) = pv(r, c);
    off += pv.cols();
    n.inputs.push_back(p.id);
  }
  return push(std::move(n));
}

Var Tape::flatten_rows(Var a, std::vector<std::uint32_t> rows) {
  const auto& av = node(a).value;
  Node n;
  n.op = Op::kFlattenRows;
  n.value = Matrix(1, rows.size() * av.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= av.rows()) throw ShapeMismatch("flatten_rows: row out of range");
    for (std::size_t c = 0; c < av.cols(); ++c) n.value(0, k * av.cols() + c) = av(rows[k], c);
  }
  n.index = std::move(rows);
  n.inputs = {a.id};
  return push(std::move(n));
}

Var Tape::leaky_relu(Var a, Scalar negative_slope) {
  Node n;
  n.op = Op::kLeakyRelu;
  n.value = node(a).value;
  for (auto& x : n.value.data())
    if (x < 0) x *= negative_slope;
  n.scalar = negative_slope;
  n.inputs = {a.id};
  return push(std::move(n));
}

Var Tape::abs(Var a) {
  Node n;
  n.op = Op::kAbs;
  n.value = node(a).value;
  for (auto& x : n.value.data()) x = std::abs(x);
  n.inputs = {a.id};
  return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
  Node n;
  n.op = Op::kSigmoid;
  n.value = node(a).value;
  for (auto& x : n.value.data()) x = Scalar(1) / (Scalar(1) + std::exp(-x));
  n.inputs = {a.id};
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  Node n;
  n.op = Op::kSum;
  Scalar s = 0;
  for (auto x : node(a).value.data()) s += x;
  n.value = Matrix(1, 1, s);
  n.inputs = {a.id};
  return push(std::move(n));
}

Var Tape::bce(Var prob, int label, Scalar eps) {
  const auto& pv = node(prob).value;
  if (pv.rows() != 1 || pv.cols() != 1) throw ShapeMismatch("bce: probability must be 1x1");
  const Scalar p = std::clamp(pv(0, 0), eps, Scalar(1) - eps);
  Node n;
  n.op = Op::kBce;
  n.value = Matrix(1, 1, label ? -std::log(p) : -std::log(Scalar(1) - p));
  n.scalar = eps;
  n.label = label;
  n.inputs = {prob.id};
  return push(std::move(n));
}

const Matrix& Tape::value(Var v) const { return node(v).value; }

const Matrix& Tape::grad(Var v) const {
  const auto& n = node(v);
  if (n.grad.rows() != n.value.rows() || n.grad.cols() != n.value.cols())
    throw IncompleteTape("no gradient recorded for variable " + std::to_string(v.id) +
                         "; call backward() first");
  return n.grad;
}

void Tape::backward(Var loss) {
  const auto& lv = node(loss).value;
  if (lv.rows() != 1 || lv.cols() != 1)
    throw IncompleteTape("backward: loss must be a 1x1 value, got " + shape(lv));

  for (auto& n : nodes_) {
    if (n.grad.rows() == n.value.rows() && n.grad.cols() == n.value.cols())
      n.grad.fill(0);
    else
      n.grad = Matrix(n.value.rows(), n.value.cols());
  }
  nodes_[loss.id].grad(0, 0) = 1;

  for (std::size_t idx = loss.id + 1; idx-- > 0;) {
    Node& n = nodes_[idx];
    if (n.op == Op::kLeaf || !n.requires_grad) continue;
    const Matrix& g = n.grad;
    auto in_grad = [this](std::uint32_t id) -> Matrix* {
      return nodes_[id].requires_grad ? &nodes_[id].grad : nullptr;
    };

    switch (n.op) {
      case Op::kLeaf:
        break;
      case Op::kMatMul: {
        const Matrix& a = nodes_[n.inputs[0]].value;
        const Matrix& b = nodes_[n.inputs[1]].value;
        if (auto* ga = in_grad(n.inputs[0])) gemm_nt_acc(g, b, *ga);
        if (auto* gb = in_grad(n.inputs[1])) gemm_tn_acc(a, g, *gb);
        break;
      }
      case Op::kOneHotMatMul: {
        if (auto* gb = in_grad(n.inputs[0])) {
          for (std::size_t r = 0; r < n.onehot->rows(); ++r) {
            auto src = g.row_span(r);
            for (auto c : n.onehot->active[r]) {
              auto dst = gb->row_span(c);
              for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
            }
          }
        }
        break;
      }
      case Op::kHadamard: {
        const Matrix& a = nodes_[n.inputs[0]].value;
        const Matrix& b = nodes_[n.inputs[1]].value;
        if (auto* ga = in_grad(n.inputs[0]))
          for (std::size_t k = 0; k < g.size(); ++k) ga->data()[k] += g.data()[k] * b.data()[k];
        if (auto* gb = in_grad(n.inputs[1]))
          for (std::size_t k = 0; k < g.size(); ++k) gb->data()[k] += g.data()[k] * a.data()[k];
        break;
      }
      case Op::kAdd: {
        for (auto in : n.inputs)
          if (auto* gi = in_grad(in))
            for (std::size_t k = 0; k < g.size(); ++k) gi->data()[k] += g.data()[k];
        break;
      }
      case Op::kAddRow: {
        if (auto* ga = in_grad(n.inputs[0]))
          for (std::size_t k = 0; k < g.size(); ++k) ga->data()[k] += g.data()[k];
        if (auto* gr = in_grad(n.inputs[1]))
          for (std::size_t r = 0; r < g.rows(); ++r)
            for (std::size_t c = 0; c < g.cols(); ++c) (*gr)(0, c) += g(r, c);
        break;
      }
      case Op::kScale: {
        if (auto* ga = in_grad(n.inputs[0]))
          for (std::size_t k = 0; k < g.size(); ++k) ga->data()[k] += n.scalar * g.data()[k];
        break;
      }
      case Op::kScaleRows: {
        if (auto* ga = in_grad(n.inputs[0]))
          for (std::size_t r = 0; r < g.rows(); ++r)
            for (std::size_t c = 0; c < g.cols(); ++c) (*ga)(r, c) += n.factors[r] * g(r, c);
        break;
      }
      case Op::kGather: {
        if (auto* ga = in_grad(n.inputs[0]))
          for (std::size_t k = 0; k < n.index.size(); ++k) {
            auto src = g.row_span(k);
            auto dst = ga->row_span(n.index[k]);
            for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
          }
        break;
      }
      case Op::kScatterAdd: {
        if (auto* ga = in_grad(n.inputs[0]))
          for (std::size_t k = 0; k < n.index.size(); ++k) {
            auto src = g.row_span(n.index[k]);
            auto dst = ga->row_span(k);
            for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
          }
        break;
      }
      case Op::kConcatCols: {
        std::size_t off = 0;
        for (auto in : n.inputs) {
          const std::size_t w = nodes_[in].value.cols();
          if (auto* gi = in_grad(in))
            for (std::size_t r = 0; r < g.rows(); ++r)
              for (std::size_t c = 0; c < w; ++c) (*gi)(r, c) += g(r, off + c);
          off += w;
        }
        break;
      }
      case Op::kFlattenRows: {
        if (auto* ga = in_grad(n.inputs[0])) {
          const std::size_t w = ga->cols();
          for (std::size_t k = 0; k < n.index.size(); ++k)
            for (std::size_t c = 0; c < w; ++c) (*ga)(n.index[k], c) += g(0, k * w + c);
        }
        break;
      }
      case Op::kLeakyRelu: {
        const Matrix& a = nodes_[n.inputs[0]].value;
        if (auto* ga = in_grad(n.inputs[0]))
          for (std::size_t k = 0; k < g.size(); ++k)
            ga->data()[k] += (a.data()[k] < 0 ? n.scalar : Scalar(1)) * g.data()[k];
        break;
      }
      case Op::kAbs: {
        const Matrix& a = nodes_[n.inputs[0]].value;
        if (auto* ga = in_grad(n.inputs[0]))
          for (std::size_t k = 0; k < g.size(); ++k) {
            const Scalar x = a.data()[k];
            const Scalar sign = x > 0 ? Scalar(1) : (x < 0 ? Scalar(-1) : Scalar(0));
            ga->data()[k] += sign * g.data()[k];
          }
        break;
      }
      case Op::kSigmoid: {
        if (auto* ga = in_grad(n.inputs[0]))
          for (std::size_t k = 0; k < g.size(); ++k) {
            const Scalar s = n.value.data()[k];
            ga->data()[k] += s * (Scalar(1) - s) * g.data()[k];
          }
        break;
      }
      case Op::kSum: {
        if (auto* ga = in_grad(n.inputs[0]))
          for (auto& x : ga->data()) x += g(0, 0);
        break;
      }
      case Op::kBce: {
        if (auto* ga = in_grad(n.inputs[0])) {
          const Scalar p = nodes_[n.inputs[0]].value(0, 0);
          if (p > n.scalar && p < Scalar(1) - n.scalar)
            (*ga)(0, 0) += g(0, 0) * (n.label ? -Scalar(1) / p : Scalar(1) / (Scalar(1) - p));
        }
        break;
      }
    }
  }
}

}  // namespace agcn
