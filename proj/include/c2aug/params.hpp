#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "c2aug/tape.hpp"

namespace c2aug {

// Ordered collection of named parameter tensors. Order is insertion order and
// is part of the checkpoint format, so keep registration deterministic.
class ParamStore {
 public:
  Tensor& add(const std::string& name, Tensor t) {
    if (index_.count(name)) throw Error("duplicate parameter: " + name);
    index_[name] = items_.size();
    items_.emplace_back(name, std::move(t));
    return items_.back().second;
  }

  bool has(const std::string& name) const { return index_.count(name) != 0; }

  Tensor& at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("unknown parameter: " + name);
    return items_[it->second].second;
  }
  const Tensor& at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("unknown parameter: " + name);
    return items_[it->second].second;
  }

  std::size_t size() const { return items_.size(); }
  auto begin() { return items_.begin(); }
  auto end() { return items_.end(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<std::pair<std::string, Tensor>> items_;
  std::map<std::string, std::size_t> index_;
};

// Node ids of a ParamStore inserted into one tape. Leaf bindings receive
// gradients; constant bindings are gradient-stopped.
struct Binding {
  std::map<std::string, NodeId> ids;

  NodeId at(const std::string& name) const {
    auto it = ids.find(name);
    if (it == ids.end()) throw Error("unbound parameter: " + name);
    return it->second;
  }
};

inline Binding bind(Tape& t, const ParamStore& store, bool as_leaf) {
  Binding b;
  for (const auto& [name, tensor] : store)
    b.ids[name] = as_leaf ? t.leaf(tensor) : t.constant(tensor);
  return b;
}

// Plain SGD: p -= lr * grad, reading gradients from the tape binding.
inline void sgd_step(Tape& t, const Binding& b, ParamStore& store, double lr) {
  for (auto& [name, tensor] : store) {
    const Tensor g = t.grad(b.at(name));
    for (std::size_t i = 0; i < tensor.size(); ++i) tensor[i] -= lr * g[i];
  }
}

}  // namespace c2aug
