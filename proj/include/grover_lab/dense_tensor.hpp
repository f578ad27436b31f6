#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "grover_lab/error.hpp"

namespace grover_lab {

using Complex = std::complex<double>;

/// Default cap on the number of entries of any matrix a diagram may
/// evaluate to (rows * cols).
inline constexpr std::size_t kDefaultMaxEntries = std::size_t{1} << 24;

/// Multiplies two sizes, saturating at SIZE_MAX instead of wrapping.
inline std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

/// A complex matrix in row-major order: rows is the product of the output
/// dimensions, cols the product of the input dimensions.
class DenseTensor {
 public:
  DenseTensor() : rows_(1), cols_(1), entries_{Complex{1.0, 0.0}} {}

  DenseTensor(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(checked_size(rows, cols)) {}

  DenseTensor(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != checked_size(rows, cols))
      throw Error(ErrorCode::dimension_mismatch,
                  "tensor entry count " + std::to_string(entries_.size()) +
                      " does not match " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  }

  static DenseTensor identity(std::size_t n) {
    DenseTensor t(n, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
    return t;
  }

  static DenseTensor scalar(Complex value) {
    return DenseTensor(1, 1, {value});
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Complex>& entries() const noexcept { return entries_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  static std::size_t checked_size(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0)
      throw Error(ErrorCode::dimension_mismatch, "tensor dimensions must be positive");
    return saturating_mul(rows, cols);
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> entries_;
};

/// Matrix product a * b.
inline DenseTensor matmul(const DenseTensor& a, const DenseTensor& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorCode::dimension_mismatch,
                "matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  DenseTensor out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

/// Kronecker product; the left factor indexes the most significant digit.
inline DenseTensor kron(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex v = a(ar, ac);
      if (v == Complex{}) continue;
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = v * b(br, bc);
    }
  return out;
}

/// Conjugate transpose.
inline DenseTensor adjoint(const DenseTensor& a) {
  DenseTensor out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

inline DenseTensor scaled(const DenseTensor& a, Complex factor) {
  std::vector<Complex> e = a.entries();
  for (auto& v : e) v *= factor;
  return DenseTensor(a.rows(), a.cols(), std::move(e));
}

inline DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::dimension_mismatch, "sum of differently shaped tensors");
  std::vector<Complex> e = a.entries();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.entries()[i];
  return DenseTensor(a.rows(), a.cols(), std::move(e));
}

/// Largest entrywise modulus of a - b. Shapes must agree.
inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::dimension_mismatch,
                "cannot compare " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " with " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  return worst;
}

inline bool approx_equal(const DenseTensor& a, const DenseTensor& b, double tol = 1e-10) {
  return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

}  // namespace grover_lab
