#pragma once

#include <complex>
#include <vector>

#include "errors.hpp"

namespace chanest {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Everything in this project is at most
/// pilot-block sized (8x8-ish), so the kernels below stay deliberately
/// small: a triple-loop product and Gauss-Jordan elimination cover all of it.
class CMatrix {
 public:
  CMatrix() = default;

  /// Zero-filled rows x cols matrix.
  CMatrix(int rows, int cols);

  /// Takes ownership of row-major data; rejects size mismatches and
  /// non-finite entries.
  CMatrix(int rows, int cols, std::vector<Complex> data);

  static CMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& operator()(int i, int j) { return data_[index(i, j)]; }
  const Complex& operator()(int i, int j) const { return data_[index(i, j)]; }

  const std::vector<Complex>& data() const { return data_; }

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex scalar);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(Complex scalar, CMatrix a) { return a *= scalar; }

  /// Exact element-wise equality; used by determinism checks.
  bool operator==(const CMatrix& other) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> data_;
};

/// Standard complex matrix product; throws ShapeError on inner-dim mismatch.
CMatrix matmul(const CMatrix& a, const CMatrix& b);

/// Conjugate transpose.
CMatrix hermitian(const CMatrix& a);

/// Inverse by Gauss-Jordan elimination with partial pivoting. Throws
/// ShapeError if not square, SingularMatrixError if a pivot magnitude
/// falls below 1e-12.
CMatrix inverse(const CMatrix& a);

/// Sum of squared magnitudes of all entries (squared Frobenius norm).
double frob_norm_sq(const CMatrix& a);

}  // namespace chanest
