#include "tractor/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tractor {

void SparseMat::add_entry(int r, int c, const Rational& v) {
  assert(r >= 0 && r < rows && c >= 0 && c < cols);
  if (sgn(v) == 0) return;
  row[r].push_back({c, v});
}

void SparseMat::finalize() {
  for (auto& rw : row) {
    std::stable_sort(rw.begin(), rw.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
    SparseRow merged;
    merged.reserve(rw.size());
    for (auto& e : rw) {
      if (!merged.empty() && merged.back().col == e.col)
        merged.back().val += e.val;
      else
        merged.push_back(e);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const SparseEntry& e) { return sgn(e.val) == 0; }),
                 merged.end());
    rw = std::move(merged);
  }
}

size_t SparseMat::nnz() const {
  size_t n = 0;
  for (const auto& rw : row) n += rw.size();
  return n;
}

bool SparseMat::is_zero() const {
  for (const auto& rw : row)
    if (!rw.empty()) return false;
  return true;
}

SparseMat SparseMat::transpose() const {
  SparseMat t(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (const auto& e : row[r]) t.row[e.col].push_back({r, e.val});
  // Column order within each transposed row follows r, already ascending.
  return t;
}

RatMatrix SparseMat::to_dense() const {
  RatMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (const auto& e : row[r]) m.at(r, e.col) = e.val;
  return m;
}

SparseMat SparseMat::from_dense(const RatMatrix& m) {
  SparseMat s(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (sgn(m.at(r, c)) != 0) s.row[r].push_back({c, m.at(r, c)});
  return s;
}

SparseMat SparseMat::vstack(const SparseMat& a, const SparseMat& b) {
  assert(a.cols == b.cols);
  SparseMat s(a.rows + b.rows, a.cols);
  for (int r = 0; r < a.rows; ++r) s.row[r] = a.row[r];
  for (int r = 0; r < b.rows; ++r) s.row[a.rows + r] = b.row[r];
  return s;
}

namespace {

// r -= f * p, both sorted; p leads with value 1 at its first column.
SparseRow row_combine(const SparseRow& r, const Rational& f, const SparseRow& p) {
  SparseRow out;
  out.reserve(r.size() + p.size());
  size_t i = 0, j = 0;
  while (i < r.size() || j < p.size()) {
    if (j == p.size() || (i < r.size() && r[i].col < p[j].col)) {
      out.push_back(r[i]);
      ++i;
    } else if (i == r.size() || p[j].col < r[i].col) {
      out.push_back({p[j].col, -f * p[j].val});
      ++j;
    } else {
      Rational v = r[i].val - f * p[j].val;
      if (sgn(v) != 0) out.push_back({r[i].col, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

struct WorkRow {
  SparseRow data;
  int id;  // original row index, tie-break for pivot choice
};

}  // namespace

Echelon eliminate(const SparseMat& a, ExecMode mode) {
  std::vector<std::vector<WorkRow>> bucket(a.cols);
  for (int r = 0; r < a.rows; ++r) {
    if (a.row[r].empty()) continue;
    bucket[a.row[r].front().col].push_back({a.row[r], r});
  }
  Echelon ech;
  for (int c = 0; c < a.cols; ++c) {
    auto& b = bucket[c];
    if (b.empty()) continue;
    // Pivot policy (deterministic): fewest entries, then unit lead, then
    // original row order.
    size_t best = 0;
    for (size_t k = 1; k < b.size(); ++k) {
      const auto& cand = b[k];
      const auto& cur = b[best];
      auto unit = [](const WorkRow& w) {
        const Rational& v = w.data.front().val;
        return v == 1 || v == -1;
      };
      bool better = cand.data.size() < cur.data.size() ||
                    (cand.data.size() == cur.data.size() &&
                     ((unit(cand) && !unit(cur)) ||
                      (unit(cand) == unit(cur) && cand.id < cur.id)));
      if (better) best = k;
    }
    WorkRow piv = std::move(b[best]);
    b.erase(b.begin() + best);
    {
      Rational inv = 1 / piv.data.front().val;
      if (inv != 1)
        for (auto& e : piv.data) e.val *= inv;
    }
    std::vector<WorkRow> out(b.size());
    if (mode == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
      for (long k = 0; k < long(b.size()); ++k) {
        out[k].data = row_combine(b[k].data, b[k].data.front().val, piv.data);
        out[k].id = b[k].id;
      }
    } else {
      for (size_t k = 0; k < b.size(); ++k) {
        out[k].data = row_combine(b[k].data, b[k].data.front().val, piv.data);
        out[k].id = b[k].id;
      }
    }
    b.clear();
    b.shrink_to_fit();
    for (auto& w : out) {
      if (w.data.empty()) continue;
      bucket[w.data.front().col].push_back(std::move(w));
    }
    ech.pivot_cols.push_back(c);
    ech.rows.push_back(std::move(piv.data));
  }
  ech.rank = int(ech.pivot_cols.size());
  return ech;
}

int sparse_rank(const SparseMat& a, ExecMode mode) { return eliminate(a, mode).rank; }

std::vector<RatVec> kernel_from_echelon(const Echelon& e, int cols, ExecMode mode) {
  std::vector<bool> is_pivot(cols, false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  std::vector<RatVec> basis(free_cols.size());
  auto back_substitute = [&](int f, RatVec& x) {
    x.assign(cols, Rational(0));
    x[f] = 1;
    for (int pi = int(e.pivot_cols.size()) - 1; pi >= 0; --pi) {
      int c = e.pivot_cols[pi];
      if (c > f) continue;  // entries of row pi live at cols >= c > f, all x there are 0 unless set
      Rational acc(0);
      const SparseRow& rw = e.rows[pi];
      for (size_t t = 1; t < rw.size(); ++t) {
        if (sgn(x[rw[t].col]) != 0) acc += rw[t].val * x[rw[t].col];
      }
      x[c] = -acc;
    }
    make_primitive(x);
  };
  if (mode == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
    for (long i = 0; i < long(free_cols.size()); ++i) back_substitute(free_cols[i], basis[i]);
  } else {
    for (size_t i = 0; i < free_cols.size(); ++i) back_substitute(free_cols[i], basis[i]);
  }
  return basis;
}

std::vector<RatVec> sparse_kernel(const SparseMat& a, ExecMode mode) {
  Echelon e = eliminate(a, mode);
  return kernel_from_echelon(e, a.cols, mode);
}

std::vector<RatVec> column_space_basis(const SparseMat& a, ExecMode mode) {
  Echelon e = eliminate(a.transpose(), mode);
  std::vector<RatVec> basis(e.rows.size());
  for (size_t i = 0; i < e.rows.size(); ++i) {
    RatVec v(a.rows, Rational(0));
    for (const auto& entry : e.rows[i]) v[entry.col] = entry.val;
    make_primitive(v);
    basis[i] = std::move(v);
  }
  return basis;
}

SparseMat smul(const SparseMat& a, const SparseMat& b, ExecMode mode) {
  assert(a.cols == b.rows);
  SparseMat out(a.rows, b.cols);
  auto compute_row = [&](int i, RatVec& scratch, std::vector<int>& touched) {
    touched.clear();
    for (const auto& ea : a.row[i]) {
      for (const auto& eb : b.row[ea.col]) {
        if (sgn(scratch[eb.col]) == 0) touched.push_back(eb.col);
        scratch[eb.col] += ea.val * eb.val;
      }
    }
    std::sort(touched.begin(), touched.end());
    SparseRow r;
    r.reserve(touched.size());
    for (int c : touched) {
      if (sgn(scratch[c]) != 0) r.push_back({c, scratch[c]});
      scratch[c] = 0;
    }
    out.row[i] = std::move(r);
  };
  if (mode == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel
    {
      RatVec scratch(b.cols, Rational(0));
      std::vector<int> touched;
#pragma omp for schedule(dynamic, 16)
      for (int i = 0; i < a.rows; ++i) compute_row(i, scratch, touched);
    }
#else
    RatVec scratch(b.cols, Rational(0));
    std::vector<int> touched;
    for (int i = 0; i < a.rows; ++i) compute_row(i, scratch, touched);
#endif
  } else {
    RatVec scratch(b.cols, Rational(0));
    std::vector<int> touched;
    for (int i = 0; i < a.rows; ++i) compute_row(i, scratch, touched);
  }
  return out;
}

SparseMat sadd(const SparseMat& a, const SparseMat& b) {
  assert(a.rows == b.rows && a.cols == b.cols);
  SparseMat out(a.rows, a.cols);
  for (int i = 0; i < a.rows; ++i) {
    const SparseRow& x = a.row[i];
    const SparseRow& y = b.row[i];
    SparseRow r;
    r.reserve(x.size() + y.size());
    size_t p = 0, q = 0;
    while (p < x.size() || q < y.size()) {
      if (q == y.size() || (p < x.size() && x[p].col < y[q].col)) {
        r.push_back(x[p++]);
      } else if (p == x.size() || y[q].col < x[p].col) {
        r.push_back(y[q++]);
      } else {
        Rational v = x[p].val + y[q].val;
        if (sgn(v) != 0) r.push_back({x[p].col, std::move(v)});
        ++p;
        ++q;
      }
    }
    out.row[i] = std::move(r);
  }
  return out;
}

RatVec s_apply(const SparseMat& a, const RatVec& v) {
  assert(int(v.size()) == a.cols);
  RatVec out(a.rows, Rational(0));
  for (int i = 0; i < a.rows; ++i)
    for (const auto& e : a.row[i])
      if (sgn(v[e.col]) != 0) out[i] += e.val * v[e.col];
  return out;
}

const PScalar kCertPrimes[3] = {2147483647u, 2147483629u, 2147483587u};

PScalar inv_mod(PScalar a, PScalar p) {
  // Fermat: p prime, a not divisible by p.
  std::uint64_t base = a % p, result = 1;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return PScalar(result);
}

namespace {
PScalar mpz_mod_p(const mpz_class& z, PScalar p) {
  mpz_class r = z % p;
  if (r < 0) r += p;
  return PScalar(r.get_ui());
}
}  // namespace

bool reduce_mod(const SparseMat& a, PScalar p, PSparseMat& out) {
  out.rows = a.rows;
  out.cols = a.cols;
  out.row.assign(a.rows, {});
  for (int r = 0; r < a.rows; ++r) {
    out.row[r].reserve(a.row[r].size());
    for (const auto& e : a.row[r]) {
      PScalar den = mpz_mod_p(e.val.get_den(), p);
      if (den == 0) return false;
      PScalar num = mpz_mod_p(e.val.get_num(), p);
      PScalar v = PScalar(std::uint64_t(num) * inv_mod(den, p) % p);
      if (v != 0) out.row[r].push_back({e.col, v});
    }
  }
  return true;
}

namespace {
std::vector<PEntry> p_row_combine(const std::vector<PEntry>& r, PScalar f, const std::vector<PEntry>& piv, PScalar p) {
  // r - f*piv
  std::vector<PEntry> out;
  out.reserve(r.size() + piv.size());
  size_t i = 0, j = 0;
  while (i < r.size() || j < piv.size()) {
    if (j == piv.size() || (i < r.size() && r[i].col < piv[j].col)) {
      out.push_back(r[i++]);
    } else if (i == r.size() || piv[j].col < r[i].col) {
      PScalar v = PScalar(p - std::uint64_t(f) * piv[j].val % p);
      if (v == p) v = 0;
      if (v != 0) out.push_back({piv[j].col, v});
      ++j;
    } else {
      std::uint64_t sub = std::uint64_t(f) * piv[j].val % p;
      PScalar v = PScalar((r[i].val + p - sub) % p);
      if (v != 0) out.push_back({r[i].col, v});
      ++i;
      ++j;
    }
  }
  return out;
}
}  // namespace

int p_rank(const PSparseMat& a, PScalar p, ExecMode mode) {
  std::vector<std::vector<std::vector<PEntry>>> bucket(a.cols);
  for (int r = 0; r < a.rows; ++r) {
    if (a.row[r].empty()) continue;
    bucket[a.row[r].front().col].push_back(a.row[r]);
  }
  int rank = 0;
  for (int c = 0; c < a.cols; ++c) {
    auto& b = bucket[c];
    if (b.empty()) continue;
    size_t best = 0;
    for (size_t k = 1; k < b.size(); ++k)
      if (b[k].size() < b[best].size()) best = k;
    std::vector<PEntry> piv = std::move(b[best]);
    b.erase(b.begin() + best);
    PScalar inv = inv_mod(piv.front().val, p);
    if (inv != 1)
      for (auto& e : piv) e.val = PScalar(std::uint64_t(e.val) * inv % p);
    std::vector<std::vector<PEntry>> out(b.size());
    if (mode == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
      for (long k = 0; k < long(b.size()); ++k) out[k] = p_row_combine(b[k], b[k].front().val, piv, p);
    } else {
      for (size_t k = 0; k < b.size(); ++k) out[k] = p_row_combine(b[k], b[k].front().val, piv, p);
    }
    b.clear();
    b.shrink_to_fit();
    for (auto& w : out) {
      if (w.empty()) continue;
      bucket[w.front().col].push_back(std::move(w));
    }
    ++rank;
  }
  return rank;
}

PSparseMat p_mul(const PSparseMat& a, const PSparseMat& b, PScalar p, ExecMode mode) {
  assert(a.cols == b.rows);
  PSparseMat out;
  out.rows = a.rows;
  out.cols = b.cols;
  out.row.assign(a.rows, {});
  auto compute_row = [&](int i, std::vector<std::uint64_t>& scratch, std::vector<int>& touched) {
    touched.clear();
    for (const auto& ea : a.row[i]) {
      for (const auto& eb : b.row[ea.col]) {
        if (scratch[eb.col] == 0) touched.push_back(eb.col);
        scratch[eb.col] = (scratch[eb.col] + std::uint64_t(ea.val) * eb.val) % p;
        if (scratch[eb.col] == 0) scratch[eb.col] = p;  // keep col marked as touched
      }
    }
    std::sort(touched.begin(), touched.end());
    std::vector<PEntry> r;
    r.reserve(touched.size());
    for (int c : touched) {
      PScalar v = PScalar(scratch[c] % p);
      if (v != 0) r.push_back({c, v});
      scratch[c] = 0;
    }
    out.row[i] = std::move(r);
  };
  if (mode == ExecMode::parallel) {
#ifdef _OPENMP
#pragma omp parallel
    {
      std::vector<std::uint64_t> scratch(b.cols, 0);
      std::vector<int> touched;
#pragma omp for schedule(dynamic, 16)
      for (int i = 0; i < a.rows; ++i) compute_row(i, scratch, touched);
    }
#else
    std::vector<std::uint64_t> scratch(b.cols, 0);
    std::vector<int> touched;
    for (int i = 0; i < a.rows; ++i) compute_row(i, scratch, touched);
#endif
  } else {
    std::vector<std::uint64_t> scratch(b.cols, 0);
    std::vector<int> touched;
    for (int i = 0; i < a.rows; ++i) compute_row(i, scratch, touched);
  }
  return out;
}

PSparseMat p_add(const PSparseMat& a, const PSparseMat& b, PScalar p) {
  assert(a.rows == b.rows && a.cols == b.cols);
  PSparseMat out;
  out.rows = a.rows;
  out.cols = a.cols;
  out.row.assign(a.rows, {});
  for (int i = 0; i < a.rows; ++i) {
    const auto& x = a.row[i];
    const auto& y = b.row[i];
    std::vector<PEntry> r;
    r.reserve(x.size() + y.size());
    size_t s = 0, t = 0;
    while (s < x.size() || t < y.size()) {
      if (t == y.size() || (s < x.size() && x[s].col < y[t].col)) {
        r.push_back(x[s++]);
      } else if (s == x.size() || y[t].col < x[s].col) {
        r.push_back(y[t++]);
      } else {
        PScalar v = PScalar((std::uint64_t(x[s].val) + y[t].val) % p);
        if (v != 0) r.push_back({x[s].col, v});
        ++s;
        ++t;
      }
    }
    out.row[i] = std::move(r);
  }
  return out;
}

PSparseMat p_from_columns(const std::vector<RatVec>& cols, int dim, PScalar p, bool& ok) {
  PSparseMat out;
  out.rows = dim;
  out.cols = int(cols.size());
  out.row.assign(dim, {});
  ok = true;
  for (size_t c = 0; c < cols.size(); ++c) {
    assert(int(cols[c].size()) == dim);
    for (int r = 0; r < dim; ++r) {
      const Rational& q = cols[c][r];
      if (sgn(q) == 0) continue;
      PScalar den = mpz_mod_p(q.get_den(), p);
      if (den == 0) {
        ok = false;
        return out;
      }
      PScalar num = mpz_mod_p(q.get_num(), p);
      PScalar v = PScalar(std::uint64_t(num) * inv_mod(den, p) % p);
      if (v != 0) out.row[r].push_back({int(c), v});
    }
  }
  return out;
}

SparseMat submatrix(const SparseMat& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> colmap(a.cols, -1);
  for (size_t i = 0; i < cols.size(); ++i) colmap[cols[i]] = int(i);
  SparseMat out(int(rows.size()), int(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (const auto& e : a.row[rows[i]])
      if (colmap[e.col] >= 0) out.row[i].push_back({colmap[e.col], e.val});
  }
  return out;
}

PSparseMat p_hcat(const PSparseMat& a, const PSparseMat& b) {
  assert(a.rows == b.rows);
  PSparseMat out;
  out.rows = a.rows;
  out.cols = a.cols + b.cols;
  out.row.assign(a.rows, {});
  for (int r = 0; r < a.rows; ++r) {
    out.row[r] = a.row[r];
    for (const auto& e : b.row[r]) out.row[r].push_back({e.col + a.cols, e.val});
  }
  return out;
}

}  // namespace tractor
