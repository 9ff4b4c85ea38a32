// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "codesum/nn/autodiff.hpp"

using namespace codesum::nn;

namespace {

Matrix rand_matrix(Eigen::Index r, Eigen::Index c, unsigned seed) {
  std::srand(seed);
  return Matrix::Random(r, c);
}

// Central differences of a scalar function of the parameters, compared
// against the tape gradient of the same function.
void check_grad(std::vector<Parameter*> params, const std::function<Var(Tape&)>& f, double tol = 1e-7) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape tape;
    tape.backward(f(tape));
  }
  const double h = 1e-6;
  for (Parameter* p : params) {
    for (Eigen::Index k = 0; k < p->value.size(); ++k) {
      const double keep = p->value(k);
      p->value(k) = keep + h;
      Tape t1(false);
      const double up = f(t1).value()(0, 0);
      p->value(k) = keep - h;
      Tape t2(false);
      const double down = f(t2).value()(0, 0);
      p->value(k) = keep;
      const double numeric = (up - down) / (2 * h);
      EXPECT_NEAR(p->grad(k), numeric, tol * std::max(1.0, std::abs(numeric))) << p->name << "[" << k << "]";
    }
  }
}

Var total(Var a) {
  Tape& t = *a.tape();
  Var ones = t.constant(Matrix::Ones(1, a.rows()));
  Var row = matmul(ones, a);
  return matmul(row, t.constant(Matrix::Ones(a.cols(), 1)));
}

}  // namespace

TEST(Autodiff, ForwardValues) {
  Tape t;
  Var a = t.constant((Matrix(2, 2) << 1, 2, 3, 4).finished());
  Var b = t.constant((Matrix(2, 2) << 5, 6, 7, 8).finished());
  EXPECT_EQ(matmul(a, b).value(), (Matrix(2, 2) << 19, 22, 43, 50).finished());
  EXPECT_EQ(add(a, b).value(), (Matrix(2, 2) << 6, 8, 10, 12).finished());
  EXPECT_EQ(sub(b, a).value(), Matrix::Constant(2, 2, 4));
  EXPECT_EQ(mul(a, b).value(), (Matrix(2, 2) << 5, 12, 21, 32).finished());
  EXPECT_EQ(transpose(a).value(), (Matrix(2, 2) << 1, 3, 2, 4).finished());
  EXPECT_EQ(slice_rows(a, 1, 1).value(), (Matrix(1, 2) << 3, 4).finished());
  EXPECT_EQ(column(a, 1).value(), (Matrix(2, 1) << 2, 4).finished());
  EXPECT_NEAR(sigmoid(t.constant(Matrix::Zero(1, 1))).value()(0, 0), 0.5, 1e-15);
}

TEST(Autodiff, SoftmaxMaskedAndStable) {
  Tape t;
  Var a = t.constant((Matrix(1, 3) << 1000.0, 1000.0, 5.0).finished());
  const Matrix p = softmax(a, {true, true, false}).value();
  EXPECT_NEAR(p(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(p(0, 1), 0.5, 1e-12);
  EXPECT_EQ(p(0, 2), 0.0);
}

TEST(Autodiff, CrossEntropyValue) {
  Tape t;
  Var logits = t.constant((Matrix(3, 1) << 1.0, 2.0, 3.0).finished());
  const double lse = std::log(std::exp(1.0) + std::exp(2.0) + std::exp(3.0));
  EXPECT_NEAR(cross_entropy(logits, 0).value()(0, 0), lse - 1.0, 1e-12);
}

TEST(Autodiff, GradientsMatchFiniteDifferences) {
  Parameter w{"w", rand_matrix(3, 4, 1), {}};
  Parameter x{"x", rand_matrix(4, 2, 2), {}};
  Parameter b{"b", rand_matrix(3, 1, 3), {}};
  Parameter v{"v", rand_matrix(3, 1, 4), {}};
  check_grad({&w, &x, &b}, [&](Tape& t) {
    Var y = tanh(add_colwise(matmul(t.param(w), t.param(x)), t.param(b)));
    return total(mul(y, sigmoid(y)));
  });
  check_grad({&w, &v, &b}, [&](Tape& t) {
    Var y = affine(t.param(w), concat_rows({t.param(v), slice_rows(t.param(b), 0, 1)}), t.param(b));
    return cross_entropy(scale(one_minus(y), 1.5), 2);
  });
  check_grad({&x}, [&](Tape& t) {
    Var s = softmax(transpose(column(t.param(x), 0)), {true, false, true, true});
    return total(mul(s, s));
  });
  check_grad({&v, &b}, [&](Tape& t) {
    Var m = hstack(std::vector<Var>{t.param(v), t.param(b), sub(t.param(v), t.param(b))});
    Matrix keep = Matrix::Ones(3, 3);
    keep(1, 1) = 0.0;
    std::vector<Var> parts = {total(mask_mul(m, keep)), total(mul(m, m))};
    return sum(parts);
  });
}

TEST(Autodiff, EmbeddingGradientLandsOnRow) {
  Parameter table{"e", rand_matrix(5, 3, 9), {}};
  table.zero_grad();
  Tape t;
  Var e = t.embedding(table, 2);
  t.backward(total(scale(e, 2.0)));
  for (Eigen::Index r = 0; r < 5; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) EXPECT_EQ(table.grad(r, c), r == 2 ? 2.0 : 0.0);
  }
}

TEST(Autodiff, InferenceTapeLeavesGradientsAlone) {
  Parameter w{"w", rand_matrix(2, 2, 5), {}};
  w.zero_grad();
  Tape t(false);
  Var y = total(matmul(t.param(w), t.param(w)));
  EXPECT_FALSE(t.needs_grad(y.index()));
  EXPECT_TRUE(w.grad.isZero());
}
