#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace effhmm {

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Dense rank-3 tensor indexed (i, h, k); used for the per-state
// observation-to-observation table and for the xi posteriors.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t d0, std::size_t d1, std::size_t d2, double fill = 0.0)
      : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, fill) {}

  std::size_t dim0() const { return d0_; }
  std::size_t dim1() const { return d1_; }
  std::size_t dim2() const { return d2_; }

  double& operator()(std::size_t i, std::size_t h, std::size_t k) {
    return data_[(i * d1_ + h) * d2_ + k];
  }
  double operator()(std::size_t i, std::size_t h, std::size_t k) const {
    return data_[(i * d1_ + h) * d2_ + k];
  }

  // The innermost vector for fixed (i, h).
  std::span<double> row(std::size_t i, std::size_t h) {
    return {data_.data() + (i * d1_ + h) * d2_, d2_};
  }
  std::span<const double> row(std::size_t i, std::size_t h) const {
    return {data_.data() + (i * d1_ + h) * d2_, d2_};
  }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t d0_ = 0;
  std::size_t d1_ = 0;
  std::size_t d2_ = 0;
  std::vector<double> data_;
};

}  // namespace effhmm
