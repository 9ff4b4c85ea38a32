// SPDX-License-Identifier: Apache-2.0
#include "codesum/nn/autodiff.hpp"

#include <cassert>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace codesum::nn {

namespace {

// acc += g * x^T, with a dedicated path for column vectors.
void add_outer(Matrix& acc, const Matrix& g, const Matrix& x) {
  if (g.cols() == 1) {
    acc.noalias() += g.col(0) * x.col(0).transpose();
  } else {
    acc.noalias() += g * x.transpose();
  }
}

}  // namespace

const Matrix& Var::value() const { return tape_->value(index_); }

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Tape::constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Tape::param(Parameter& p) {
  Node n;
  n.param = &p;
  n.needs_grad = grad_enabled_;
  return push(std::move(n));
}

Var Tape::embedding(Parameter& table, int row) {
  Node n;
  n.value = table.value.row(row).transpose();
  n.needs_grad = grad_enabled_;
  if (!grad_enabled_) return push(std::move(n));
  Parameter* tp = &table;
  n.backward = [tp, row](Tape& t, int self) {
    if (tp->grad.size() == 0) tp->zero_grad();
    tp->grad.row(row) += t.grad(self).transpose();
  };
  return push(std::move(n));
}

Var Tape::record(Matrix value, std::initializer_list<Var> inputs, BackwardFn backward) {
  return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()), std::move(backward));
}

Var Tape::record(Matrix value, std::span<const Var> inputs, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  for (const Var& v : inputs) {
    assert(v.tape() == this);
    n.needs_grad = n.needs_grad || needs_grad(v.index());
  }
  if (n.needs_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

Matrix& Tape::grad(int index) {
  Node& n = nodes_[static_cast<std::size_t>(index)];
  if (n.param) {
    if (n.param->grad.size() == 0) n.param->zero_grad();
    n.has_grad = true;
    return n.param->grad;
  }
  if (!n.has_grad) {
    n.grad.setZero(n.value.rows(), n.value.cols());
    n.has_grad = true;
  }
  return n.grad;
}

void Tape::backward(Var output, double seed) {
  if (output.rows() != 1 || output.cols() != 1) {
    throw std::invalid_argument("backward: output must be a scalar");
  }
  grad(output.index())(0, 0) += seed;
  for (int i = output.index(); i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.has_grad || !n.needs_grad || !n.backward) continue;
    n.backward(*this, i);
  }
}

// ---- ops -------------------------------------------------------------------

Var matmul(Var a, Var b) {
  Tape& t = *a.tape();
  const int ia = a.index(), ib = b.index();
  return t.record(a.value() * b.value(), {a, b}, [ia, ib](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.needs_grad(ia)) add_outer(t.grad(ia), g, t.value(ib));
    if (t.needs_grad(ib)) t.grad(ib).noalias() += t.value(ia).transpose() * g;
  });
}

Var affine(Var w, Var x, Var b) {
  Tape& t = *w.tape();
  const int iw = w.index(), ix = x.index(), ib = b.index();
  Matrix out = b.value();
  out.noalias() += w.value() * x.value();
  return t.record(std::move(out), {w, x, b}, [iw, ix, ib](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.needs_grad(iw)) add_outer(t.grad(iw), g, t.value(ix));
    if (t.needs_grad(ix)) t.grad(ix).noalias() += t.value(iw).transpose() * g;
    if (t.needs_grad(ib)) t.grad(ib) += g;
  });
}

Var add(Var a, Var b) {
  Tape& t = *a.tape();
  const int ia = a.index(), ib = b.index();
  return t.record(a.value() + b.value(), {a, b}, [ia, ib](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.needs_grad(ia)) t.grad(ia) += g;
    if (t.needs_grad(ib)) t.grad(ib) += g;
  });
}

Var sub(Var a, Var b) {
  Tape& t = *a.tape();
  const int ia = a.index(), ib = b.index();
  return t.record(a.value() - b.value(), {a, b}, [ia, ib](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.needs_grad(ia)) t.grad(ia) += g;
    if (t.needs_grad(ib)) t.grad(ib) -= g;
  });
}

Var mul(Var a, Var b) {
  Tape& t = *a.tape();
  const int ia = a.index(), ib = b.index();
  return t.record(a.value().cwiseProduct(b.value()), {a, b}, [ia, ib](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.needs_grad(ia)) t.grad(ia) += g.cwiseProduct(t.value(ib));
    if (t.needs_grad(ib)) t.grad(ib) += g.cwiseProduct(t.value(ia));
  });
}

Var scale(Var a, double s) {
  Tape& t = *a.tape();
  const int ia = a.index();
  return t.record(a.value() * s, {a}, [ia, s](Tape& t, int self) { t.grad(ia) += t.grad(self) * s; });
}

Var add_colwise(Var m, Var v) {
  Tape& t = *m.tape();
  const int im = m.index(), iv = v.index();
  Matrix out = m.value().colwise() + v.value().col(0);
  return t.record(std::move(out), {m, v}, [im, iv](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.needs_grad(im)) t.grad(im) += g;
    if (t.needs_grad(iv)) t.grad(iv) += g.rowwise().sum();
  });
}

Var sigmoid(Var a) {
  Tape& t = *a.tape();
  const int ia = a.index();
  Matrix y = a.value().unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
  return t.record(std::move(y), {a}, [ia](Tape& t, int self) {
    const Matrix& y = t.value(self);
    t.grad(ia) += t.grad(self).cwiseProduct(y.cwiseProduct((1.0 - y.array()).matrix()));
  });
}

Var tanh(Var a) {
  Tape& t = *a.tape();
  const int ia = a.index();
  Matrix y = a.value().array().tanh().matrix();
  return t.record(std::move(y), {a}, [ia](Tape& t, int self) {
    const Matrix& y = t.value(self);
    t.grad(ia) += t.grad(self).cwiseProduct((1.0 - y.array().square()).matrix());
  });
}

Var one_minus(Var a) {
  Tape& t = *a.tape();
  const int ia = a.index();
  Matrix y = (1.0 - a.value().array()).matrix();
  return t.record(std::move(y), {a}, [ia](Tape& t, int self) { t.grad(ia) -= t.grad(self); });
}

Var concat_rows(std::initializer_list<Var> parts) {
  return concat_rows(std::span<const Var>(parts.begin(), parts.size()));
}

Var concat_rows(std::span<const Var> parts) {
  Tape& t = *parts.front().tape();
  Eigen::Index rows = 0;
  const Eigen::Index cols = parts.front().cols();
  for (const Var& p : parts) rows += p.rows();
  Matrix out(rows, cols);
  std::vector<int> ids;
  std::vector<Eigen::Index> offsets;
  Eigen::Index r = 0;
  for (const Var& p : parts) {
    out.middleRows(r, p.rows()) = p.value();
    ids.push_back(p.index());
    offsets.push_back(r);
    r += p.rows();
  }
  return t.record(std::move(out), parts, [ids, offsets](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!t.needs_grad(ids[k])) continue;
      Matrix& gi = t.grad(ids[k]);
      gi += g.middleRows(offsets[k], gi.rows());
    }
  });
}

Var hstack(std::span<const Var> columns) {
  Tape& t = *columns.front().tape();
  const Eigen::Index rows = columns.front().rows();
  Matrix out(rows, static_cast<Eigen::Index>(columns.size()));
  std::vector<int> ids;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = columns[j].value().col(0);
    ids.push_back(columns[j].index());
  }
  return t.record(std::move(out), columns, [ids](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (t.needs_grad(ids[j])) t.grad(ids[j]) += g.col(static_cast<Eigen::Index>(j));
    }
  });
}

Var slice_rows(Var a, Eigen::Index start, Eigen::Index count) {
  Tape& t = *a.tape();
  const int ia = a.index();
  return t.record(a.value().middleRows(start, count), {a}, [ia, start, count](Tape& t, int self) {
    t.grad(ia).middleRows(start, count) += t.grad(self);
  });
}

Var transpose(Var a) {
  Tape& t = *a.tape();
  const int ia = a.index();
  return t.record(a.value().transpose(), {a},
                  [ia](Tape& t, int self) { t.grad(ia) += t.grad(self).transpose(); });
}

Var column(Var a, Eigen::Index j) {
  Tape& t = *a.tape();
  const int ia = a.index();
  return t.record(a.value().col(j), {a}, [ia, j](Tape& t, int self) {
    t.grad(ia).col(j) += t.grad(self).col(0);
  });
}

Var softmax(Var a) { return softmax(a, std::vector<bool>(static_cast<std::size_t>(a.value().size()), true)); }

Var softmax(Var a, const std::vector<bool>& mask) {
  Tape& t = *a.tape();
  const int ia = a.index();
  const Matrix& x = a.value();
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  double mx = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (mask[static_cast<std::size_t>(k)]) mx = std::max(mx, x(k));
  }
  double z = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (!mask[static_cast<std::size_t>(k)]) continue;
    y(k) = std::exp(x(k) - mx);
    z += y(k);
  }
  if (z > 0.0) y /= z;
  return t.record(std::move(y), {a}, [ia](Tape& t, int self) {
    const Matrix& y = t.value(self);
    const Matrix& g = t.grad(self);
    const double dot = y.cwiseProduct(g).sum();
    t.grad(ia) += y.cwiseProduct((g.array() - dot).matrix());
  });
}

Var cross_entropy(Var logits, int target) {
  Tape& t = *logits.tape();
  const int il = logits.index();
  const Matrix& x = logits.value();
  const double mx = x.maxCoeff();
  const double lse = mx + std::log((x.array() - mx).exp().sum());
  Matrix out(1, 1);
  out(0, 0) = lse - x(target, 0);
  return t.record(std::move(out), {logits}, [il, target, lse](Tape& t, int self) {
    const double g = t.grad(self)(0, 0);
    Matrix p = (t.value(il).array() - lse).exp().matrix();
    p(target, 0) -= 1.0;
    t.grad(il) += g * p;
  });
}

Var mask_mul(Var a, Matrix mask) {
  Tape& t = *a.tape();
  const int ia = a.index();
  Matrix y = a.value().cwiseProduct(mask);
  return t.record(std::move(y), {a}, [ia, mask = std::move(mask)](Tape& t, int self) {
    t.grad(ia) += t.grad(self).cwiseProduct(mask);
  });
}

Var sum(std::span<const Var> scalars) {
  Tape& t = *scalars.front().tape();
  Matrix out = Matrix::Zero(1, 1);
  std::vector<int> ids;
  for (const Var& s : scalars) {
    out(0, 0) += s.value()(0, 0);
    ids.push_back(s.index());
  }
  return t.record(std::move(out), scalars, [ids](Tape& t, int self) {
    const double g = t.grad(self)(0, 0);
    for (int i : ids) {
      if (t.needs_grad(i)) t.grad(i)(0, 0) += g;
    }
  });
}

}  // namespace codesum::nn
