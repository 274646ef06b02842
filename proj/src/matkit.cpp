#include "tpmwork/matkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tpmwork::matkit {

namespace {

constexpr double kOffDiagRelTol = 1e-14;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

void require_hermitian(const ComplexMatrix& a, const char* who) {
  if (!a.square()) {
    throw NotHermitianError(std::string(who) + ": matrix is not square");
  }
  const double defect = hermiticity_defect(a);
  if (defect > kHermitianTol * std::max(1.0, a.frobenius_norm())) {
    throw NotHermitianError(std::string(who) + ": matrix is not Hermitian within tolerance");
  }
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0, 0.0);
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = Complex(values[i], 0.0);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      m(j, i) = std::conj((*this)(i, j));
    }
  }
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t(0.0, 0.0);
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const Complex& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeMismatchError("matrix product: inner dimensions do not match");
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) throw ShapeMismatchError("matrix sum: shapes differ");
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  }
  return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) throw ShapeMismatchError("matrix difference: shapes differ");
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  }
  return c;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  }
  return c;
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (!a.square()) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      sum += std::norm(a(i, j) - std::conj(a(j, i)));
    }
  }
  return std::sqrt(sum);
}

Spectrum eigh(const ComplexMatrix& input) {
  require_hermitian(input, "eigh");
  const std::size_t n = input.rows();

  ComplexMatrix a = input;
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double input_norm = input.frobenius_norm();

  if (input_norm > 0.0) {
    const double threshold = kOffDiagRelTol * input_norm;
    int sweeps = 0;
    while (off_diagonal_norm(a) > threshold) {
      if (++sweeps > kMaxSweeps) {
        throw NoConvergenceError("eigh: Jacobi sweeps exceeded the iteration cap");
      }
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const Complex apq = a(p, q);
          const double r = std::abs(apq);
          if (r == 0.0) continue;
          // Phase factor reduces the (p,q) block to a real symmetric one;
          // the real rotation then annihilates it (Golub & Van Loan 8.4).
          const Complex alpha = apq / r;
          const double app = a(p, p).real();
          const double aqq = a(q, q).real();
          const double tau = (aqq - app) / (2.0 * r);
          const double t =
              (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;

          // Column update with J = [[c*alpha, s*alpha], [-s, c]] on (p,q).
          for (std::size_t k = 0; k < n; ++k) {
            const Complex akp = a(k, p);
            const Complex akq = a(k, q);
            a(k, p) = c * alpha * akp - s * akq;
            a(k, q) = s * alpha * akp + c * akq;
          }
          // Row update with J^dagger.
          for (std::size_t k = 0; k < n; ++k) {
            const Complex apk = a(p, k);
            const Complex aqk = a(q, k);
            a(p, k) = c * std::conj(alpha) * apk - s * aqk;
            a(q, k) = s * std::conj(alpha) * apk + c * aqk;
          }
          a(p, q) = Complex(0.0, 0.0);
          a(q, p) = Complex(0.0, 0.0);
          a(p, p) = Complex(a(p, p).real(), 0.0);
          a(q, q) = Complex(a(q, q).real(), 0.0);
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = v(k, p);
            const Complex vkq = v(k, q);
            v(k, p) = c * alpha * vkp - s * vkq;
            v(k, q) = s * alpha * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) raw[i] = a(i, i).real();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&raw](std::size_t x, std::size_t y) { return raw[x] < raw[y]; });

  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    spec.eigenvalues[j] = raw[order[j]];
    for (std::size_t i = 0; i < n; ++i) spec.eigenvectors(i, j) = v(i, order[j]);
  }

  // Re-orthonormalize inside each degenerate cluster in index order.
  ComplexMatrix& w = spec.eigenvectors;
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && spec.eigenvalues[end] - spec.eigenvalues[end - 1] < kDegenerateGap) ++end;
    for (std::size_t j = begin; j < end; ++j) {
      for (std::size_t k = begin; k < j; ++k) {
        Complex overlap(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) overlap += std::conj(w(i, k)) * w(i, j);
        for (std::size_t i = 0; i < n; ++i) w(i, j) -= overlap * w(i, k);
      }
      double norm2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(w(i, j));
      const double inv = 1.0 / std::sqrt(norm2);
      for (std::size_t i = 0; i < n; ++i) w(i, j) *= inv;
    }
    begin = end;
  }

  // Canonical phase: largest-magnitude component real positive.
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(w(i, j));
      if (mag > best) {
        best = mag;
        imax = i;
      }
    }
    if (best > 0.0) {
      const Complex phase = std::conj(w(imax, j)) / best;
      for (std::size_t i = 0; i < n; ++i) w(i, j) *= phase;
    }
  }

  // Postcondition check: orthonormal basis, exact reconstruction.
  const ComplexMatrix gram = w.adjoint() * w;
  if (frobenius_distance(gram, ComplexMatrix::identity(n)) > 1e-10) {
    throw NoConvergenceError("eigh: eigenvector basis failed the orthonormality check");
  }
  ComplexMatrix scaled = w;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= spec.eigenvalues[j];
  }
  const ComplexMatrix rebuilt = scaled * w.adjoint();
  if (frobenius_distance(rebuilt, input) > 1e-10 * std::max(1.0, input_norm)) {
    throw NoConvergenceError("eigh: reconstruction check failed");
  }
  return spec;
}

ComplexMatrix expm_hermitian(const ComplexMatrix& a, double scale) {
  const Spectrum spec = eigh(a);
  const std::size_t n = a.rows();
  ComplexMatrix scaled = spec.eigenvectors;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::exp(scale * spec.eigenvalues[j]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= w;
  }
  return scaled * spec.eigenvectors.adjoint();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (!u.square()) return false;
  const ComplexMatrix gram = u.adjoint() * u;
  return frobenius_distance(gram, ComplexMatrix::identity(u.rows())) <= tol;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) {
    throw ShapeMismatchError("frobenius_distance: shapes differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) sum += std::norm(a(i, j) - b(i, j));
  }
  return std::sqrt(sum);
}

}  // namespace tpmwork::matkit
