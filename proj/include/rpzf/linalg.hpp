#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rpzf/errors.hpp"

namespace rpzf {

// Dense row-major matrix of doubles.  Everything here is desk-scale
// (hundreds of rows on the analysis paths), so plain loops suffice.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
    if (rows < 0 || cols < 0) throw DomainError("matrix: negative dimension");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)]; }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)];
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw DomainError("matrix: dimension mismatch in product");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int k = 0; k < cols_; ++k) {
        double a = (*this)(i, k);
        if (a == 0.0) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    }
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix: dimension mismatch in difference");
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
  }

  // Submatrix with rows [r0, r1) and columns [c0, c1).
  Matrix block(int r0, int c0, int r1, int c1) const {
    if (r0 < 0 || c0 < 0 || r1 > rows_ || c1 > cols_ || r0 > r1 || c0 > c1)
      throw DomainError("matrix: block out of range");
    Matrix b(r1 - r0, c1 - c0);
    for (int i = r0; i < r1; ++i)
      for (int j = c0; j < c1; ++j) b(i - r0, j - c0) = (*this)(i, j);
    return b;
  }

  double row_sum(int i) const {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j);
    return s;
  }

  // Max absolute row sum.
  double inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols_; ++j) s += std::fabs((*this)(i, j));
      best = std::max(best, s);
    }
    return best;
  }

  double max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::fabs(v));
    return best;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// LU factorization with partial pivoting (Doolittle).  Throws NumericalError
// on a singular pivot.
class LuDecomposition {
 public:
  explicit LuDecomposition(Matrix a) : lu_(std::move(a)), perm_(static_cast<std::size_t>(lu_.rows())) {
    if (lu_.rows() != lu_.cols()) throw DomainError("lu: matrix must be square");
    int n = lu_.rows();
    for (int i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < n; ++k) {
      int piv = k;
      double best = std::fabs(lu_(k, k));
      for (int i = k + 1; i < n; ++i) {
        double v = std::fabs(lu_(i, k));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best == 0.0) throw NumericalError("lu: singular matrix (zero pivot at column " + std::to_string(k) + ")");
      if (piv != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(piv)]);
      }
      for (int i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        double f = lu_(i, k);
        if (f == 0.0) continue;
        for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    int n = lu_.rows();
    if (static_cast<int>(b.size()) != n) throw DomainError("lu: right-hand side size mismatch");
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])];
    for (int i = 1; i < n; ++i) {
      double s = x[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j) s -= lu_(i, j) * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[static_cast<std::size_t>(j)];
      x[static_cast<std::size_t>(i)] = s / lu_(i, i);
    }
    return x;
  }

  Matrix solve(const Matrix& b) const {
    int n = lu_.rows();
    if (b.rows() != n) throw DomainError("lu: right-hand side size mismatch");
    Matrix x(n, b.cols());
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int j = 0; j < b.cols(); ++j) {
      for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = b(i, j);
      auto sol = solve(col);
      for (int i = 0; i < n; ++i) x(i, j) = sol[static_cast<std::size_t>(i)];
    }
    return x;
  }

 private:
  Matrix lu_;
  std::vector<int> perm_;
};

// Deterministic full-precision formatting (round-trips a double exactly).
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Row-major CSV, one matrix row per line, full precision.
inline std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace rpzf
