#include "tractor/ratmat.hpp"

#include <cassert>
#include <stdexcept>

namespace tractor {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool RatMatrix::is_zero() const {
  for (const auto& q : data_)
    if (sgn(q) != 0) return false;
  return true;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

RatMatrix RatMatrix::operator+(const RatMatrix& o) const {
  assert(rows_ == o.rows_ && cols_ == o.cols_);
  RatMatrix r(rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
  return r;
}

RatMatrix RatMatrix::operator-(const RatMatrix& o) const {
  assert(rows_ == o.rows_ && cols_ == o.cols_);
  RatMatrix r(rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  assert(cols_ == o.rows_);
  RatMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = at(i, k);
      if (sgn(a) == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const Rational& b = o.at(k, j);
        if (sgn(b) != 0) r.at(i, j) += a * b;
      }
    }
  return r;
}

RatMatrix RatMatrix::scaled(const Rational& c) const {
  RatMatrix r(rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = c * data_[i];
  return r;
}

RatVec RatMatrix::apply(const RatVec& v) const {
  assert(int(v.size()) == cols_);
  RatVec r(rows_, Rational(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      const Rational& a = at(i, j);
      if (sgn(a) != 0 && sgn(v[j]) != 0) r[i] += a * v[j];
    }
  return r;
}

Rational RatMatrix::trace() const {
  assert(rows_ == cols_);
  Rational t(0);
  for (int i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

RatMatrix commutator(const RatMatrix& a, const RatMatrix& b) { return a * b - b * a; }

std::vector<int> rref(RatMatrix& m) {
  std::vector<int> pivots;
  int lead = 0;
  for (int c = 0; c < m.cols() && lead < m.rows(); ++c) {
    int piv = -1;
    for (int r = lead; r < m.rows(); ++r)
      if (sgn(m.at(r, c)) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != lead)
      for (int j = 0; j < m.cols(); ++j) swap(m.at(piv, j), m.at(lead, j));
    Rational inv = 1 / m.at(lead, c);
    for (int j = c; j < m.cols(); ++j) m.at(lead, j) *= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == lead || sgn(m.at(r, c)) == 0) continue;
      Rational f = m.at(r, c);
      for (int j = c; j < m.cols(); ++j) m.at(r, j) -= f * m.at(lead, j);
    }
    pivots.push_back(c);
    ++lead;
  }
  return pivots;
}

int dense_rank(RatMatrix m) { return int(rref(m).size()); }

std::vector<RatVec> dense_kernel(RatMatrix m) {
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVec v(m.cols(), Rational(0));
    v[f] = 1;
    for (size_t pi = 0; pi < pivots.size(); ++pi) v[pivots[pi]] = -m.at(int(pi), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool dense_solve(RatMatrix a, RatVec b, RatVec& x) {
  DenseSolver s(a);
  return s.solve(b, x);
}

DenseSolver::DenseSolver(const RatMatrix& a) : n_(a.cols()), m_(a.rows()) {
  aug_ = RatMatrix(m_, n_ + m_);
  for (int r = 0; r < m_; ++r) {
    for (int c = 0; c < n_; ++c) aug_.at(r, c) = a.at(r, c);
    aug_.at(r, n_ + r) = 1;
  }
  RatMatrix work = aug_;
  std::vector<int> piv = rref(work);
  aug_ = work;
  for (int c : piv)
    if (c < n_) pivots_.push_back(c);
}

bool DenseSolver::solve(const RatVec& b, RatVec& x) const {
  assert(int(b.size()) == m_);
  // Row-reduced b: the identity block of aug_ records the row operations.
  RatVec rb(m_, Rational(0));
  for (int r = 0; r < m_; ++r)
    for (int c = 0; c < m_; ++c) {
      const Rational& w = aug_.at(r, n_ + c);
      if (sgn(w) != 0 && sgn(b[c]) != 0) rb[r] += w * b[c];
    }
  x.assign(n_, Rational(0));
  int nr = int(pivots_.size());
  for (int r = 0; r < nr; ++r) x[pivots_[r]] = rb[r];
  // Rows beyond the pivot rows of the A-block must have zero reduced rhs,
  // unless the row still has A-entries (possible when rref pivoted in the
  // identity block); those rows impose genuine constraints checked below.
  for (int r = 0; r < m_; ++r) {
    Rational acc(0);
    for (int c = 0; c < n_; ++c) {
      const Rational& w = aug_.at(r, c);
      if (sgn(w) != 0 && sgn(x[c]) != 0) acc += w * x[c];
    }
    if (acc != rb[r]) return false;
  }
  return true;
}

}  // namespace tractor
