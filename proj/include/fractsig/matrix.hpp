#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace fractsig {

// Dense row-major real matrix. Doubles as the pixel container: a GrayImage
// is a Matrix whose values live in [0,1] (validated at the I/O boundary).
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // row-major, size rows*cols

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {}

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }

  double min_value() const { return *std::min_element(data.begin(), data.end()); }
  double max_value() const { return *std::max_element(data.begin(), data.end()); }
};

// Grayscale image with intensities in [0,1]; width = cols, height = rows.
using GrayImage = Matrix;

// Signed residual matrix together with the component count that produced it.
struct ResidualImage {
  Matrix data;
  int removed_components = 0;
};

}  // namespace fractsig
