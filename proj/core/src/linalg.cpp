#include "rackmsr/linalg.hpp"

#include <stdexcept>

namespace rackmsr {

Matrix::Matrix(int rows, int cols, const FieldCtxPtr& ctx)
    : rows_(rows), cols_(cols), ctx_(ctx) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  if (!ctx) throw std::invalid_argument("null field context");
  a_.assign(static_cast<std::size_t>(rows) * cols, ctx->zero());
}

Matrix Matrix::identity(int n, const FieldCtxPtr& ctx) {
  Matrix m(n, n, ctx);
  for (int i = 0; i < n; ++i) m.at(i, i) = ctx->one();
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
  Matrix r(rows_, o.cols_, ctx_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const FieldElement& v = at(i, k);
      if (v.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) r.at(i, j) += v * o.at(k, j);
    }
  }
  return r;
}

std::vector<FieldElement> Matrix::apply(const std::vector<FieldElement>& x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw std::invalid_argument("vector length mismatch");
  std::vector<FieldElement> y(static_cast<std::size_t>(rows_), ctx_->zero());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) y[static_cast<std::size_t>(i)] += at(i, j) * x[static_cast<std::size_t>(j)];
  return y;
}

namespace {

// forward elimination on the augmented system; returns pivot count
int eliminate(Matrix& M, std::vector<FieldElement>* y) {
  int row = 0;
  for (int col = 0; col < M.cols() && row < M.rows(); ++col) {
    int piv = -1;
    for (int i = row; i < M.rows(); ++i) {
      if (!M.at(i, col).is_zero()) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != row) {
      for (int j = 0; j < M.cols(); ++j) std::swap(M.at(piv, j), M.at(row, j));
      if (y) std::swap((*y)[static_cast<std::size_t>(piv)], (*y)[static_cast<std::size_t>(row)]);
    }
    const FieldElement inv_p = inverse(M.at(row, col));
    for (int j = col; j < M.cols(); ++j) M.at(row, j) = M.at(row, j) * inv_p;
    if (y) (*y)[static_cast<std::size_t>(row)] = (*y)[static_cast<std::size_t>(row)] * inv_p;
    for (int i = row + 1; i < M.rows(); ++i) {
      const FieldElement f = M.at(i, col);
      if (f.is_zero()) continue;
      for (int j = col; j < M.cols(); ++j) M.at(i, j) -= f * M.at(row, j);
      if (y) (*y)[static_cast<std::size_t>(i)] -= f * (*y)[static_cast<std::size_t>(row)];
    }
    ++row;
  }
  return row;
}

}  // namespace

std::vector<FieldElement> solve(const Matrix& A, const std::vector<FieldElement>& b) {
  if (static_cast<int>(b.size()) != A.rows())
    throw std::invalid_argument("right-hand side length mismatch");
  if (A.rows() < A.cols()) throw std::domain_error("underdetermined system");
  Matrix M = A;
  std::vector<FieldElement> y = b;
  const int pivots = eliminate(M, &y);
  if (pivots < A.cols()) throw std::domain_error("singular matrix");
  for (int i = pivots; i < A.rows(); ++i) {
    if (!y[static_cast<std::size_t>(i)].is_zero())
      throw std::domain_error("inconsistent system");
  }
  // rows 0..cols-1 are now unit upper triangular in their pivot columns;
  // since pivots == cols, pivot of row i is column i
  std::vector<FieldElement> x(static_cast<std::size_t>(A.cols()), A.ctx()->zero());
  for (int i = A.cols() - 1; i >= 0; --i) {
    FieldElement v = y[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < A.cols(); ++j) v -= M.at(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = v;
  }
  return x;
}

int rank(const Matrix& A) {
  Matrix M = A;
  return eliminate(M, nullptr);
}

Matrix inverse(const Matrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const int n = A.rows();
  Matrix inv(n, n, A.ctx());
  for (int c = 0; c < n; ++c) {
    std::vector<FieldElement> e(static_cast<std::size_t>(n), A.ctx()->zero());
    e[static_cast<std::size_t>(c)] = A.ctx()->one();
    std::vector<FieldElement> x = solve(A, e);
    for (int r = 0; r < n; ++r) inv.at(r, c) = x[static_cast<std::size_t>(r)];
  }
  return inv;
}

std::vector<FieldElement> vandermonde_solve(const std::vector<FieldElement>& points,
                                            const std::vector<FieldElement>& rhs) {
  const int n = static_cast<int>(points.size());
  if (static_cast<int>(rhs.size()) != n)
    throw std::invalid_argument("points/rhs length mismatch");
  if (n == 0) return {};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (points[static_cast<std::size_t>(i)] == points[static_cast<std::size_t>(j)])
        throw std::invalid_argument("repeated evaluation point");
  const FieldCtxPtr& ctx = points[0].ctx();
  Matrix V(n, n, ctx);
  for (int t = 0; t < n; ++t) {
    FieldElement acc = ctx->one();
    for (int w = 0; w < n; ++w) {
      V.at(w, t) = acc;
      acc = acc * points[static_cast<std::size_t>(t)];
    }
  }
  return solve(V, rhs);
}

}  // namespace rackmsr
