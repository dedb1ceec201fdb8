#pragma once

#include <vector>

#include "tractor/rational.hpp"

namespace tractor {

// Dense exact matrix. Sizes here stay small (defining reps and module actions,
// dimension <= ~40); the large cochain operators live in kernels.hpp as sparse
// matrices instead.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(size_t(rows) * cols, Rational(0)) {}

  static RatMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int r, int c) { return data_[size_t(r) * cols_ + c]; }
  const Rational& at(int r, int c) const { return data_[size_t(r) * cols_ + c]; }

  bool operator==(const RatMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
  bool operator!=(const RatMatrix& o) const { return !(*this == o); }

  bool is_zero() const;
  RatMatrix transpose() const;

  RatMatrix operator+(const RatMatrix& o) const;
  RatMatrix operator-(const RatMatrix& o) const;
  RatMatrix operator*(const RatMatrix& o) const;
  RatMatrix scaled(const Rational& c) const;

  RatVec apply(const RatVec& v) const;
  Rational trace() const;

 private:
  int rows_, cols_;
  std::vector<Rational> data_;
};

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b);

// In-place reduced row echelon form; returns pivot columns in order.
std::vector<int> rref(RatMatrix& m);

int dense_rank(RatMatrix m);

// Null space basis, one column vector per free column.
std::vector<RatVec> dense_kernel(RatMatrix m);

// Solves A x = b exactly. Returns false if inconsistent; on success x has one
// solution (free variables set to zero).
bool dense_solve(RatMatrix a, RatVec b, RatVec& x);

// Precomputed RREF of A for repeated solves against many right-hand sides.
class DenseSolver {
 public:
  explicit DenseSolver(const RatMatrix& a);
  // Returns false if A x = b is inconsistent.
  bool solve(const RatVec& b, RatVec& x) const;
  int rank() const { return int(pivots_.size()); }

 private:
  RatMatrix aug_;  // RREF of A with an identity block tracking row operations
  std::vector<int> pivots_;
  int n_;  // columns of A
  int m_;  // rows of A
};

}  // namespace tractor
