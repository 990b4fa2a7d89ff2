#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "c2aug/error.hpp"

namespace c2aug {

// Dense row-major tensor of doubles, rank 1 or 2 in practice.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::initializer_list<std::size_t> s, std::vector<double> d)
      : shape(s), data(std::move(d)) {
    check_shape();
  }

  static Tensor zeros(std::initializer_list<std::size_t> s) {
    Tensor t;
    t.shape.assign(s);
    t.data.assign(t.count(), 0.0);
    return t;
  }
  static Tensor zeros_like(const Tensor& o) {
    Tensor t;
    t.shape = o.shape;
    t.data.assign(o.data.size(), 0.0);
    return t;
  }
  static Tensor vec(std::vector<double> d) {
    Tensor t;
    t.shape = {d.size()};
    t.data = std::move(d);
    return t;
  }
  static Tensor scalar(double v) {
    Tensor t;
    t.shape = {1};
    t.data = {v};
    return t;
  }

  std::size_t count() const {
    std::size_t c = 1;
    for (std::size_t e : shape) c *= e;
    return c;
  }
  std::size_t size() const { return data.size(); }
  std::size_t ndim() const { return shape.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return ndim() >= 2 ? shape[1] : 1; }
  bool empty() const { return data.empty(); }

  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols() + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols() + j]; }
  double* row_ptr(std::size_t i) { return data.data() + i * cols(); }
  const double* row_ptr(std::size_t i) const { return data.data() + i * cols(); }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  void check_shape() const {
    if (count() != data.size()) throw Error("tensor shape/data length mismatch");
  }
};

}  // namespace c2aug
