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

#include <functional>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace agcn;

namespace {

Matrix random_matrix(std::mt19937_64& gen, std::size_t r, std::size_t c, double lo = -1,
                     double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (auto& x : m.data()) x = u(gen);
  return m;
}

using Builder = std::function<Var(Tape&, const std::vector<Var>&)>;

/// Scalar loss sum(op(inputs) ⊙ R) for a fixed random R.
double recorded_loss(const Builder& op, const std::vector<Matrix>& inputs, const Matrix* weights,
                     Tape& tape, std::vector<Var>& vars, Var& loss) {
  vars.clear();
  for (const auto& m : inputs) vars.push_back(tape.parameter(m));
  Var out = op(tape, vars);
  Var weighted = weights ? tape.hadamard(out, tape.constant(*weights)) : out;
  loss = tape.sum(weighted);
  return tape.value(loss)(0, 0);
}

/// Largest relative error between tape gradients and central differences.
double primitive_error(const Builder& op, std::vector<Matrix> inputs, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Tape probe;
  std::vector<Var> pv;
  for (const auto& m : inputs) pv.push_back(probe.parameter(m));
  const Matrix& out = probe.value(op(probe, pv));
  const Matrix weights = random_matrix(gen, out.rows(), out.cols());

  Tape tape;
  std::vector<Var> vars;
  Var loss;
  recorded_loss(op, inputs, &weights, tape, vars, loss);
  tape.backward(loss);

  double worst = 0;
  const double eps = 1e-6;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Matrix analytic = tape.grad(vars[k]);
    for (std::size_t e = 0; e < inputs[k].size(); ++e) {
      auto eval = [&](double delta) {
        auto shifted = inputs;
        shifted[k].data()[e] += delta;
        Tape t;
        std::vector<Var> v;
        Var l;
        return recorded_loss(op, shifted, &weights, t, v, l);
      };
      const double numeric = (eval(eps) - eval(-eps)) / (2 * eps);
      const double a = analytic.data()[e];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-3});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("identity times B is B") {
  std::mt19937_64 gen(1);
  auto b = random_matrix(gen, 2, 3);
  CHECK(matmul(Matrix::identity(2), b) == b);
}

TEST_CASE("one-hot row selects a row") {
  std::mt19937_64 gen(2);
  auto w = random_matrix(gen, 5, 3);
  OneHotRows e{5, {{3}}};
  auto r = matmul(e, w);
  for (std::size_t c = 0; c < 3; ++c) CHECK(r(0, c) == w(3, c));
  CHECK(matmul(e.dense(), w) == r);
}

TEST_CASE("matmul matches the triple loop") {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 50; ++t) {
    auto a = random_matrix(gen, 3, 4), b = random_matrix(gen, 4, 2);
    auto got = matmul(a, b), want = oracle::naive_matmul(a, b);
    for (std::size_t e = 0; e < got.size(); ++e)
      CHECK(std::abs(got.data()[e] - want.data()[e]) < 1e-12);
  }
  CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeMismatch);
}

TEST_CASE("one-hot product matches the dense product") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 30; ++t) {
    OneHotRows a{7, {{0, 4}, {}, {6}, {1, 2, 3}}};
    auto w = random_matrix(gen, 7, 3);
    auto got = matmul(a, w), want = oracle::naive_matmul(a.dense(), w);
    for (std::size_t e = 0; e < got.size(); ++e)
      CHECK(std::abs(got.data()[e] - want.data()[e]) < 1e-12);
  }
}

TEST_CASE("elementwise product") {
  std::mt19937_64 gen(5);
  auto a = random_matrix(gen, 2, 3), b = random_matrix(gen, 2, 3);
  CHECK(elementwise_mul(a, Matrix(2, 3, 1.0)) == a);
  CHECK(elementwise_mul(a, Matrix(2, 3, 0.0)) == Matrix(2, 3, 0.0));
  auto p = elementwise_mul(a, b);
  for (std::size_t e = 0; e < p.size(); ++e) CHECK(p.data()[e] == a.data()[e] * b.data()[e]);
  CHECK_THROWS_AS(elementwise_mul(a, Matrix(3, 2)), ShapeMismatch);
}

TEST_CASE("matrix finiteness checks") {
  Matrix m(1, 2);
  CHECK(m.all_finite());
  m(0, 1) = std::numeric_limits<Scalar>::quiet_NaN();
  CHECK_FALSE(m.all_finite());
  CHECK_THROWS_AS(m.require_finite("m"), NumericalError);
  CHECK_THROWS_AS(Matrix(2, 2, std::vector<Scalar>(3)), ShapeMismatch);
}

TEST_CASE("gradient of x squared at 3 is 6") {
  Tape t;
  Var x = t.parameter(Matrix(1, 1, 3.0));
  Var y = t.hadamard(x, x);
  t.backward(y);
  CHECK(t.grad(x)(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("gradient of sum(e_k W) is the row indicator") {
  std::mt19937_64 gen(6);
  Tape t;
  Var w = t.parameter(random_matrix(gen, 4, 3));
  auto onehot = std::make_shared<OneHotRows>(OneHotRows{4, {{2}}});
  Var loss = t.sum(t.matmul(onehot, w));
  t.backward(loss);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(t.grad(w)(r, c) == (r == 2 ? 1.0 : 0.0));
}

TEST_CASE("unused parameters receive zero gradient") {
  Tape t;
  Var used = t.parameter(Matrix(1, 1, 2.0));
  Var unused = t.parameter(Matrix(2, 2, 1.0));
  t.backward(t.sum(used));
  CHECK(t.grad(unused) == Matrix(2, 2, 0.0));
}

TEST_CASE("backward needs a scalar loss on this tape") {
  Tape t, other;
  Var x = t.parameter(Matrix(2, 2, 1.0));
  CHECK_THROWS_AS(t.backward(x), IncompleteTape);
  CHECK_THROWS_AS(t.backward(Var{}), IncompleteTape);
  Var y = other.parameter(Matrix(1, 1, 1.0));
  (void)y;
  CHECK_THROWS_AS(t.backward(Var{5}), IncompleteTape);
}

TEST_CASE("every primitive matches central differences") {
  struct Case {
    const char* name;
    Builder op;
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    double lo = -1, hi = 1;
  };
  auto onehot = std::make_shared<OneHotRows>(OneHotRows{5, {{0, 3}, {}, {4}, {1, 2}}});
  std::vector<Case> cases{
      {"matmul", [](Tape& t, const auto& v) { return t.matmul(v[0], v[1]); }, {{3, 4}, {4, 2}}},
      {"onehot", [&](Tape& t, const auto& v) { return t.matmul(onehot, v[0]); }, {{5, 3}}},
      {"hadamard", [](Tape& t, const auto& v) { return t.hadamard(v[0], v[1]); }, {{3, 2}, {3, 2}}},
      {"add", [](Tape& t, const auto& v) { return t.add(v[0], v[1]); }, {{2, 3}, {2, 3}}},
      {"add_row", [](Tape& t, const auto& v) { return t.add_row(v[0], v[1]); }, {{3, 2}, {1, 2}}},
      {"scale", [](Tape& t, const auto& v) { return t.scale(v[0], Scalar(-1.7)); }, {{2, 2}}},
      {"scale_rows",
       [](Tape& t, const auto& v) { return t.scale_rows(v[0], {0.5, 2.0, -1.0}); },
       {{3, 2}}},
      {"gather", [](Tape& t, const auto& v) { return t.gather_rows(v[0], {2, 0, 2, 1}); }, {{3, 2}}},
      {"scatter",
       [](Tape& t, const auto& v) { return t.scatter_add_rows(v[0], {1, 1, 0, 3}, 4); },
       {{4, 2}}},
      {"concat",
       [](Tape& t, const auto& v) {
         Var parts[] = {v[0], v[1]};
         return t.concat_cols(parts);
       },
       {{2, 2}, {2, 3}}},
      {"flatten", [](Tape& t, const auto& v) { return t.flatten_rows(v[0], {1, 0}); }, {{3, 2}}},
      {"leaky", [](Tape& t, const auto& v) { return t.leaky_relu(v[0], Scalar(0.01)); }, {{3, 3}}},
      {"abs", [](Tape& t, const auto& v) { return t.abs(v[0]); }, {{3, 3}}},
      {"sigmoid", [](Tape& t, const auto& v) { return t.sigmoid(v[0]); }, {{2, 3}}, -4, 4},
      {"sum", [](Tape& t, const auto& v) { return t.sum(v[0]); }, {{2, 3}}},
      {"bce1", [](Tape& t, const auto& v) { return t.bce(t.sigmoid(v[0]), 1); }, {{1, 1}}, -3, 3},
      {"bce0", [](Tape& t, const auto& v) { return t.bce(t.sigmoid(v[0]), 0); }, {{1, 1}}, -3, 3},
  };
  for (const auto& c : cases) {
    double worst = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      std::mt19937_64 gen(trial * 7919 + 13);
      std::vector<Matrix> inputs;
      for (auto [r, cols] : c.shapes) inputs.push_back(random_matrix(gen, r, cols, c.lo, c.hi));
      worst = std::max(worst, primitive_error(c.op, inputs, trial));
    }
    INFO(c.name);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("replaying backward gives bit-identical gradients") {
  std::mt19937_64 gen(8);
  Tape t;
  Var a = t.parameter(random_matrix(gen, 3, 4));
  Var b = t.parameter(random_matrix(gen, 4, 2));
  Var loss = t.sum(t.leaky_relu(t.matmul(a, b), Scalar(0.01)));
  t.backward(loss);
  const Matrix ga = t.grad(a), gb = t.grad(b);
  t.backward(loss);
  CHECK(t.grad(a) == ga);
  CHECK(t.grad(b) == gb);
}

TEST_CASE("bce clamps saturated probabilities") {
  Tape t;
  Var p = t.constant(Matrix(1, 1, 1.0));
  Var l = t.bce(p, 0);
  CHECK(std::isfinite(t.value(l)(0, 0)));
  CHECK(t.value(l)(0, 0) == doctest::Approx(-std::log(1e-12)).epsilon(1e-3));
}
