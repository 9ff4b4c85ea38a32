// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace codesum::nn {

using Matrix = Eigen::MatrixXd;

/// A trainable tensor. Gradients accumulate into `grad` during backward.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

class Tape;

/// Handle to a value recorded on a Tape.
class Var {
 public:
  Var() = default;
  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  Tape* tape() const { return tape_; }
  int index() const { return index_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int index) : tape_(tape), index_(index) {}
  Tape* tape_ = nullptr;
  int index_ = -1;
};

/// Reverse-mode automatic differentiation tape.
///
/// Every op appends a node holding its forward value and a closure that
/// pushes the node's gradient to its inputs. backward() walks the nodes in
/// reverse creation order, which is a valid topological order. Parameter
/// leaves route their gradient straight into Parameter::grad.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, int)>;

  /// With grad_enabled false, parameters are recorded as constants and no
  /// backward closures are kept (inference mode).
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) { nodes_.reserve(4096); }

  bool grad_enabled() const { return grad_enabled_; }

  Var constant(Matrix value);
  Var param(Parameter& p);
  /// Column vector copy of row `row` of an embedding table.
  Var embedding(Parameter& table, int row);

  /// Records a derived node. `inputs` decide whether the node needs a gradient.
  Var record(Matrix value, std::initializer_list<Var> inputs, BackwardFn backward);
  Var record(Matrix value, std::span<const Var> inputs, BackwardFn backward);

  const Matrix& value(int index) const {
    const Node& n = nodes_[static_cast<std::size_t>(index)];
    return n.param ? n.param->value : n.value;
  }
  /// Gradient accumulator of a node (lazily zero-initialized).
  Matrix& grad(int index);
  bool needs_grad(int index) const { return nodes_[static_cast<std::size_t>(index)].needs_grad; }

  /// Seeds d(output)/d(output) = seed (output must be 1x1) and back-propagates.
  void backward(Var output, double seed = 1.0);

  void clear() { nodes_.clear(); }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Parameter* param = nullptr;
    bool needs_grad = false;
    bool has_grad = false;
    BackwardFn backward;
  };
  Var push(Node node);

  std::vector<Node> nodes_;
  bool grad_enabled_ = true;
};

// ---- ops -------------------------------------------------------------------
// Shapes follow Eigen conventions; column vectors are n x 1.

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // element-wise
Var scale(Var a, double s);
/// m + v broadcast over columns (v is rows x 1).
Var add_colwise(Var m, Var v);
Var sigmoid(Var a);
Var tanh(Var a);
Var one_minus(Var a);
/// Vertical concatenation of column vectors / matrices with equal cols.
Var concat_rows(std::span<const Var> parts);
Var concat_rows(std::initializer_list<Var> parts);
/// Horizontal concatenation of column vectors into a matrix.
Var hstack(std::span<const Var> columns);
Var slice_rows(Var a, Eigen::Index start, Eigen::Index count);
Var transpose(Var a);
Var column(Var a, Eigen::Index j);
/// W x + b.
Var affine(Var w, Var x, Var b);
/// Softmax of a row or column vector restricted to entries with mask true;
/// masked entries get probability 0.
Var softmax(Var a, const std::vector<bool>& mask);
Var softmax(Var a);
/// -log softmax(logits)[target] for a column of logits.
Var cross_entropy(Var logits, int target);
/// Element-wise multiply by a fixed mask (dropout).
Var mask_mul(Var a, Matrix mask);
Var sum(std::span<const Var> scalars);

}  // namespace codesum::nn
