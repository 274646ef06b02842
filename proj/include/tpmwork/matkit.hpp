// Dense complex linear algebra for small Hermitian problems: cyclic Jacobi
// eigendecomposition, spectral exponentials, unitarity checks, norms.
// Everything here is sized for desk-scale dimensions (d <= 8 or so);
// determinism is valued over asymptotic speed.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpmwork::matkit {

using Complex = std::complex<double>;

// Base class for every numeric-validation failure in the library, so callers
// can map the whole family onto one error-handling path.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitianError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ShapeMismatchError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_ && rows_ > 0; }
  bool same_shape(const ComplexMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// Row-major dense real matrix; holds probability and work tables.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Eigenvalues ascending; eigenvector k is column k of `eigenvectors`.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
};

// Relative Hermiticity tolerance: ||a - a^dagger||_F <= kHermitianTol * max(1, ||a||_F).
inline constexpr double kHermitianTol = 1e-10;
// Consecutive eigenvalues closer than this belong to one degenerate cluster.
inline constexpr double kDegenerateGap = 1e-9;

double hermiticity_defect(const ComplexMatrix& a);

// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Sweeps rotate every
// (p, q) pair in index order until the off-diagonal Frobenius mass falls below
// 1e-14 relative to ||a||_F; at most 100 sweeps, else NoConvergenceError.
// Within a degenerate cluster the vectors are re-orthonormalized in index
// order, and every vector's phase is fixed so its largest-magnitude component
// is real positive, which makes the output reproducible.
Spectrum eigh(const ComplexMatrix& a);

// V diag(exp(scale * lambda)) V^dagger for Hermitian input.
ComplexMatrix expm_hermitian(const ComplexMatrix& a, double scale);

// True iff u is square and ||u^dagger u - I||_F <= tol. Non-square is false.
bool is_unitary(const ComplexMatrix& u, double tol);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace tpmwork::matkit
