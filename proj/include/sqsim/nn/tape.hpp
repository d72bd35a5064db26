#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "sqsim/error.hpp"

namespace sqsim::nn {

template <class Scalar>
class Tape;

// Handle to one node of a tape. Cheap to copy; ops are free functions over
// handles so expressions read like plain math.
template <class Scalar>
struct Var {
  Tape<Scalar>* tape = nullptr;
  int id = -1;

  bool valid() const { return tape != nullptr && id >= 0; }
};

// Wengert list for reverse-mode differentiation. Nodes are appended in
// evaluation order, which is a topological order by construction; backward
// walks the list once in reverse. One tape serves one forward/backward pass
// and is not shared across threads.
template <class Scalar>
class Tape {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using BackwardFn = std::function<void(Tape&, int self)>;

  Var<Scalar> leaf(Mat value) { return append(std::move(value), nullptr); }

  Var<Scalar> append(Mat value, BackwardFn back) {
    nodes_.push_back(Node{std::move(value), Mat(), std::move(back)});
    return Var<Scalar>{this, static_cast<int>(nodes_.size()) - 1};
  }

  const Mat& value(Var<Scalar> v) const { return value_at(v.id); }
  const Mat& value_at(int id) const { return nodes_[id].value; }

  // Gradient of the last backward() w.r.t. node `v`; zeros if the node does
  // not influence the loss.
  Mat grad(Var<Scalar> v) const {
    const Node& n = nodes_[v.id];
    if (n.grad.size() == 0) return Mat::Zero(n.value.rows(), n.value.cols());
    return n.grad;
  }

  const Mat& grad_at(int id) const { return nodes_[id].grad; }

  bool has_grad(int id) const { return nodes_[id].grad.size() != 0; }

  // Adds `delta` into the gradient slot of node `id`.
  template <class Expr>
  void accum(int id, const Expr& delta) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0)
      n.grad = delta;
    else
      n.grad += delta;
  }

  void backward(Var<Scalar> loss) {
    if (!loss.valid() || loss.tape != this)
      throw_runtime("backward: loss is not a node of this tape");
    const Mat& lv = value_at(loss.id);
    if (lv.rows() != 1 || lv.cols() != 1)
      throw_runtime("backward: loss must be a scalar");
    if (!std::isfinite(static_cast<double>(lv(0, 0))))
      throw_runtime("backward: non-finite loss value");
    for (auto& n : nodes_) n.grad.resize(0, 0);
    nodes_[loss.id].grad = Mat::Ones(1, 1);
    for (int id = loss.id; id >= 0; --id) {
      Node& n = nodes_[id];
      if (n.grad.size() == 0 || !n.back) continue;
      n.back(*this, id);
    }
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Mat value;
    Mat grad;
    BackwardFn back;
  };
  std::vector<Node> nodes_;
};

template <class Scalar>
inline void check_same_tape(Var<Scalar> a, Var<Scalar> b) {
  if (a.tape == nullptr || a.tape != b.tape)
    throw_runtime("operands belong to different tapes");
}

}  // namespace sqsim::nn
