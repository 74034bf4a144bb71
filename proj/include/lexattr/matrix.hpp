#ifndef LEXATTR_MATRIX_HPP_
#define LEXATTR_MATRIX_HPP_

#include <cstddef>
#include <vector>

namespace lexattr {

// Dense row-major matrix of doubles. Shapes here are tiny (tens by tens),
// plain loops everywhere keep the arithmetic order fixed and reproducible.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  bool same_shape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }

  void fill(double v) { data.assign(data.size(), v); }

  bool operator==(const Matrix& other) const = default;
};

}  // namespace lexattr

#endif  // LEXATTR_MATRIX_HPP_
