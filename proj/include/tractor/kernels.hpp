#pragma once

#include <cstdint>
#include <vector>

#include "tractor/ratmat.hpp"
#include "tractor/rational.hpp"

namespace tractor {

// Every kernel below has a plain serial reference path and an OpenMP path.
// Pivot selection and result assembly are serial in both; only independent
// row/column work is distributed, so the two paths must agree exactly
// (tested entry-for-entry in test_kernels).
enum class ExecMode { serial, parallel };

struct SparseEntry {
  int col;
  Rational val;
};
using SparseRow = std::vector<SparseEntry>;  // sorted by col, no zeros

struct SparseMat {
  int rows = 0;
  int cols = 0;
  std::vector<SparseRow> row;

  SparseMat() = default;
  SparseMat(int r, int c) : rows(r), cols(c), row(r) {}

  // Accumulates; finalize() sorts, merges duplicates and drops zeros.
  void add_entry(int r, int c, const Rational& v);
  void finalize();

  size_t nnz() const;
  bool is_zero() const;
  SparseMat transpose() const;
  RatMatrix to_dense() const;
  static SparseMat from_dense(const RatMatrix& m);

  // A stacked above B (same column count).
  static SparseMat vstack(const SparseMat& a, const SparseMat& b);
};

struct Echelon {
  int rank = 0;
  std::vector<int> pivot_cols;     // ascending
  std::vector<SparseRow> rows;     // rows[i] leads at pivot_cols[i], lead value 1
};

Echelon eliminate(const SparseMat& a, ExecMode mode);
int sparse_rank(const SparseMat& a, ExecMode mode);

// Nullspace basis; vectors normalized primitive, ordered by free column.
std::vector<RatVec> sparse_kernel(const SparseMat& a, ExecMode mode);
std::vector<RatVec> kernel_from_echelon(const Echelon& e, int cols, ExecMode mode);

// Basis of the column space (echelon rows of the transpose), primitive.
std::vector<RatVec> column_space_basis(const SparseMat& a, ExecMode mode);

SparseMat smul(const SparseMat& a, const SparseMat& b, ExecMode mode);
SparseMat sadd(const SparseMat& a, const SparseMat& b);
RatVec s_apply(const SparseMat& a, const RatVec& v);

// Plain extraction of the listed rows and columns (both ascending); entries
// outside the selection are dropped.
SparseMat submatrix(const SparseMat& a, const std::vector<int>& rows, const std::vector<int>& cols);

// Arithmetic mod a word-sized prime, for rank certificates: rank over F_p is
// a lower bound for rank over Q, so matching it against an exact kernel
// dimension pins the exact rank without a big exact elimination.
using PScalar = std::uint32_t;

struct PEntry {
  int col;
  PScalar val;
};
struct PSparseMat {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<PEntry>> row;
};

extern const PScalar kCertPrimes[3];

PScalar inv_mod(PScalar a, PScalar p);
// Fails (returns false) if a denominator vanishes mod p.
bool reduce_mod(const SparseMat& a, PScalar p, PSparseMat& out);
int p_rank(const PSparseMat& a, PScalar p, ExecMode mode);
PSparseMat p_mul(const PSparseMat& a, const PSparseMat& b, PScalar p, ExecMode mode);
PSparseMat p_add(const PSparseMat& a, const PSparseMat& b, PScalar p);
PSparseMat p_from_columns(const std::vector<RatVec>& cols, int dim, PScalar p, bool& ok);
PSparseMat p_hcat(const PSparseMat& a, const PSparseMat& b);

}  // namespace tractor
