#include "cmatrix.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace chanest {

namespace {

constexpr double kSingularPivot = 1e-12;

void check_positive_dims(int rows, int cols) {
  if (rows <= 0 || cols <= 0) {
    throw ShapeError("CMatrix dimensions must be positive, got " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void check_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

}  // namespace

CMatrix::CMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  check_positive_dims(rows, cols);
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
               Complex{0.0, 0.0});
}

CMatrix::CMatrix(int rows, int cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  check_positive_dims(rows, cols);
  if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw ShapeError("CMatrix data length " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  for (const Complex& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error("CMatrix rejects non-finite entries");
    }
  }
}

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Complex{1.0, 0.0};
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  check_same_shape(*this, other, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  check_same_shape(*this, other, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex scalar) {
  for (Complex& z : data_) z *= scalar;
  return *this;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()));
  }
  CMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      Complex acc{0.0, 0.0};
      for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

CMatrix hermitian(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

CMatrix inverse(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("inverse: matrix is " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + ", expected square");
  }
  const int n = a.rows();
  CMatrix work = a;
  CMatrix out = CMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot_row = col;
    double pivot_mag = std::abs(work(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double mag = std::abs(work(r, col));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = r;
      }
    }
    if (pivot_mag < kSingularPivot) {
      throw SingularMatrixError("inverse: pivot magnitude " +
                                std::to_string(pivot_mag) + " in column " +
                                std::to_string(col));
    }
    if (pivot_row != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work(col, j), work(pivot_row, j));
        std::swap(out(col, j), out(pivot_row, j));
      }
    }
    const Complex pivot = work(col, col);
    for (int j = 0; j < n; ++j) {
      work(col, j) /= pivot;
      out(col, j) /= pivot;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex factor = work(r, col);
      if (factor == Complex{0.0, 0.0}) continue;
      for (int j = 0; j < n; ++j) {
        work(r, j) -= factor * work(col, j);
        out(r, j) -= factor * out(col, j);
      }
    }
  }
  return out;
}

double frob_norm_sq(const CMatrix& a) {
  double acc = 0.0;
  for (const Complex& z : a.data()) acc += std::norm(z);
  return acc;
}

}  // namespace chanest
