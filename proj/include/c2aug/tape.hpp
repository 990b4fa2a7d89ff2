#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "c2aug/tensor.hpp"

namespace c2aug {

using NodeId = int;

// Reverse-mode tape. Nodes are appended in forward (topological) order; each
// op records the parent ids and a closure that pushes the node's gradient
// into its parents' accumulation buffers. Constants are never differentiated
// through, which is how gradient stopping (teacher branch, memory bank) is
// expressed.
//
// Single-owner: one tape per training step, not shared across threads.
class Tape {
 public:
  using BackFn = std::function<void(Tape&, NodeId)>;

  NodeId constant(Tensor v) { return push(std::move(v), {}, nullptr, false); }
  NodeId leaf(Tensor v) { return push(std::move(v), {}, nullptr, true); }

  NodeId emplace(Tensor value, std::vector<NodeId> parents, BackFn back) {
    bool needs = false;
    for (NodeId p : parents) needs = needs || nodes_[static_cast<std::size_t>(p)].needs_grad;
    return push(std::move(value), std::move(parents), needs ? std::move(back) : nullptr,
                needs);
  }

  const Tensor& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  bool needs_grad(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }
  const std::vector<NodeId>& parents(NodeId id) const {
    return nodes_[static_cast<std::size_t>(id)].parents;
  }
  std::size_t size() const { return nodes_.size(); }

  // Runs backprop from a finite scalar loss. Gradients of nodes the loss does
  // not reach stay zero.
  void backward(NodeId loss) {
    const Tensor& lv = value(loss);
    if (lv.size() != 1) throw Error("backward: loss must be a scalar");
    if (!std::isfinite(lv[0])) throw Error("backward: non-finite loss");
    grads_.assign(nodes_.size(), Tensor{});
    ran_backward_ = true;
    grad_buffer(loss) = Tensor::scalar(1.0);
    for (NodeId id = static_cast<NodeId>(nodes_.size()) - 1; id >= 0; --id) {
      Node& n = nodes_[static_cast<std::size_t>(id)];
      if (!n.needs_grad || !n.back) continue;
      if (grads_[static_cast<std::size_t>(id)].empty()) continue;  // not on the loss path
      n.back(*this, id);
    }
  }

  // Gradient accumulation buffer, allocated as zeros on first touch.
  Tensor& grad_buffer(NodeId id) {
    Tensor& g = grads_[static_cast<std::size_t>(id)];
    if (g.empty()) g = Tensor::zeros_like(value(id));
    return g;
  }

  // Gradient after backward(); zeros for untouched nodes.
  Tensor grad(NodeId id) const {
    if (!ran_backward_) throw Error("grad: backward has not run");
    const Tensor& g = grads_[static_cast<std::size_t>(id)];
    if (g.empty()) return Tensor::zeros_like(value(id));
    return g;
  }

 private:
  struct Node {
    Tensor value;
    std::vector<NodeId> parents;
    BackFn back;
    bool needs_grad = false;
  };

  NodeId push(Tensor v, std::vector<NodeId> parents, BackFn back, bool needs) {
    nodes_.push_back(Node{std::move(v), std::move(parents), std::move(back), needs});
    if (ran_backward_) grads_.emplace_back();
    return static_cast<NodeId>(nodes_.size()) - 1;
  }

  std::vector<Node> nodes_;
  std::vector<Tensor> grads_;
  bool ran_backward_ = false;
};

}  // namespace c2aug
