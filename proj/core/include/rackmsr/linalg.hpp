#pragma once

#include <vector>

#include "rackmsr/ffield.hpp"

namespace rackmsr {

/// Dense row-major matrix over one field context.
class Matrix {
 public:
  Matrix(int rows, int cols, const FieldCtxPtr& ctx);
  static Matrix identity(int n, const FieldCtxPtr& ctx);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldCtxPtr& ctx() const { return ctx_; }

  FieldElement& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const FieldElement& at(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * cols_ + c];
  }

  Matrix operator*(const Matrix& o) const;
  std::vector<FieldElement> apply(const std::vector<FieldElement>& x) const;

 private:
  int rows_, cols_;
  FieldCtxPtr ctx_;
  std::vector<FieldElement> a_;
};

/// Solves A x = b by Gaussian elimination with first-nonzero pivoting.
/// A may be square or have more rows than columns; the system must be
/// consistent with a unique solution.  Throws std::domain_error when the
/// matrix is singular (no unique solution) or the system is inconsistent.
std::vector<FieldElement> solve(const Matrix& A, const std::vector<FieldElement>& b);

int rank(const Matrix& A);

Matrix inverse(const Matrix& A);

/// Solves sum_t x_t points_t^w = rhs_w for w = 0..n-1.  The points must be
/// pairwise distinct (throws std::invalid_argument otherwise).
std::vector<FieldElement> vandermonde_solve(const std::vector<FieldElement>& points,
                                            const std::vector<FieldElement>& rhs);

}  // namespace rackmsr
