#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "edd/common.hpp"

namespace edd {

// Dense row-major float64 array with an explicit shape. Layers interpret the
// shape as {batch, channels, length}, {batch, time, features} or {batch,
// features} depending on position in the network.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    data.assign(numel(shape), 0.0);
  }

  static std::size_t numel(const std::vector<int>& s) {
    std::size_t n = 1;
    for (int d : s) n *= static_cast<std::size_t>(d);
    return n;
  }
  std::size_t size() const { return data.size(); }

  int dim(int i) const { return shape[static_cast<std::size_t>(i)]; }
  int rank() const { return static_cast<int>(shape.size()); }

  // Reinterprets the buffer with a new shape of equal element count.
  Tensor reshaped(std::vector<int> s) const {
    if (numel(s) != data.size())
      throw DataError("tensor reshape: element count mismatch");
    Tensor t;
    t.shape = std::move(s);
    t.data = data;
    return t;
  }

  double& at3(int i, int j, int k) {
    return data[(std::size_t(i) * std::size_t(dim(1)) + std::size_t(j)) *
                    std::size_t(dim(2)) +
                std::size_t(k)];
  }
  double at3(int i, int j, int k) const {
    return data[(std::size_t(i) * std::size_t(dim(1)) + std::size_t(j)) *
                    std::size_t(dim(2)) +
                std::size_t(k)];
  }
  double& at2(int i, int j) {
    return data[std::size_t(i) * std::size_t(dim(1)) + std::size_t(j)];
  }
  double at2(int i, int j) const {
    return data[std::size_t(i) * std::size_t(dim(1)) + std::size_t(j)];
  }
};

}  // namespace edd
