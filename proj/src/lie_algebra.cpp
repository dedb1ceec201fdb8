#include "tractor/lie_algebra.hpp"

#include <cassert>
#include <stdexcept>

namespace tractor {

namespace {

RatVec vectorize(const RatMatrix& m) {
  RatVec v;
  v.reserve(size_t(m.rows()) * m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) v.push_back(m.at(r, c));
  return v;
}

// Derives structure constants, checks closure and the grading action of E,
// and computes the trace-dual basis of g_1 against g_{-1}.
void finish_construction(GradedLieAlgebra& alg) {
  const int dim = alg.dim();
  const int d = alg.defining_dim;
  for (auto& b : alg.basis) {
    if (b.rows() != d || b.cols() != d) throw std::invalid_argument("basis matrix has wrong shape");
    // Raw mpq storage may arrive non-canonical from callers; equality tests
    // downstream require canonical form.
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) b.at(r, c).canonicalize();
  }
  if (alg.grading_element_index < 0 || alg.grading_element_index >= dim)
    throw std::invalid_argument("grading element index out of range");
  for (int i = 1; i < dim; ++i)
    if (alg.grade[i] < alg.grade[i - 1]) throw std::invalid_argument("basis must be ordered by grade");
  if (alg.grade[alg.grading_element_index] != 0 ||
      (alg.grading_element_index + 1 < dim && alg.grade[alg.grading_element_index + 1] != 1))
    throw std::invalid_argument("grading element must close the g_0 block");

  RatMatrix bmat(d * d, dim);
  for (int j = 0; j < dim; ++j) {
    RatVec col = vectorize(alg.basis[j]);
    for (int r = 0; r < d * d; ++r) bmat.at(r, j) = col[r];
  }
  if (dense_rank(bmat) != dim) throw std::invalid_argument("basis matrices are linearly dependent");
  DenseSolver solver(bmat);

  alg.cijk.assign(dim, std::vector<std::vector<std::pair<int, Rational>>>(dim));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      RatMatrix br = commutator(alg.basis[i], alg.basis[j]);
      RatVec coeff;
      if (!solver.solve(vectorize(br), coeff))
        throw std::invalid_argument("bracket leaves the span of the basis");
      for (int k = 0; k < dim; ++k)
        if (sgn(coeff[k]) != 0) alg.cijk[i][j].push_back({k, coeff[k]});
    }
  }

  const int e = alg.grading_element_index;
  for (int j = 0; j < dim; ++j) {
    const auto& br = alg.cijk[e][j];
    bool ok;
    if (alg.grade[j] == 0)
      ok = br.empty();
    else
      ok = br.size() == 1 && br[0].first == j && br[0].second == alg.grade[j];
    if (!ok) throw std::invalid_argument("grading element eigenvalue check failed");
  }

  const int nm = alg.dim_minus();
  const int np = alg.dim_plus();
  if (nm != np) throw std::invalid_argument("g_{-1} and g_1 must have equal dimension");
  // P'_{cb} = tr(Z_c X_b); dual basis coefficients are rows of its inverse.
  RatMatrix pairing(np, nm);
  for (int c = 0; c < np; ++c)
    for (int b = 0; b < nm; ++b) pairing.at(c, b) = (alg.basis[alg.g1_offset() + c] * alg.basis[b]).trace();
  RatMatrix aug(np, 2 * np);
  for (int r = 0; r < np; ++r) {
    for (int c = 0; c < np; ++c) aug.at(r, c) = pairing.at(r, c);
    aug.at(r, np + r) = 1;
  }
  if (int(rref(aug).size()) != np) throw std::invalid_argument("g_1/g_{-1} trace pairing is degenerate");
  alg.dual_g1.assign(nm, RatVec(np, Rational(0)));
  // aug now holds [I | P'^{-1}]; W = P'^{-1} satisfies W P' = I, and
  // zeta_a = sum_c W_{ac} Z_c.
  for (int a = 0; a < nm; ++a)
    for (int c = 0; c < np; ++c) alg.dual_g1[a][c] = aug.at(a, np + c);
}

}  // namespace

int GradedLieAlgebra::dim_minus() const {
  int n = 0;
  for (int g : grade)
    if (g == -1) ++n;
  return n;
}

int GradedLieAlgebra::dim_zero() const {
  int n = 0;
  for (int g : grade)
    if (g == 0) ++n;
  return n;
}

int GradedLieAlgebra::dim_plus() const {
  int n = 0;
  for (int g : grade)
    if (g == 1) ++n;
  return n;
}

RatVec GradedLieAlgebra::bracket(const RatVec& x, const RatVec& y) const {
  assert(x.size() == basis.size() && y.size() == basis.size());
  RatVec out(basis.size(), Rational(0));
  for (size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (size_t j = 0; j < y.size(); ++j) {
      if (sgn(y[j]) == 0) continue;
      Rational f = x[i] * y[j];
      for (const auto& [k, c] : cijk[i][j]) out[k] += f * c;
    }
  }
  return out;
}

RatMatrix GradedLieAlgebra::trace_form() const {
  const int n = dim();
  RatMatrix t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      t.at(i, j) = (basis[i] * basis[j]).trace();
      t.at(j, i) = t.at(i, j);
    }
  return t;
}

GradedLieAlgebra build_conformal_algebra(int n) {
  if (n < 3) throw std::invalid_argument("conformal model needs n >= 3");
  GradedLieAlgebra alg;
  alg.kind = "conformal";
  alg.params = {n};
  const int d = n + 2;
  alg.defining_dim = d;
  auto mat = [&]() { return RatMatrix(d, d); };

  for (int i = 1; i <= n; ++i) {
    RatMatrix m = mat();
    m.at(i, 0) = 1;
    m.at(n + 1, i) = -1;
    alg.basis.push_back(m);
    alg.grade.push_back(-1);
  }
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      RatMatrix m = mat();
      m.at(a, b) = 1;
      m.at(b, a) = -1;
      alg.basis.push_back(m);
      alg.grade.push_back(0);
    }
  {
    RatMatrix m = mat();
    m.at(0, 0) = 1;
    m.at(n + 1, n + 1) = -1;
    alg.grading_element_index = int(alg.basis.size());
    alg.basis.push_back(m);
    alg.grade.push_back(0);
  }
  for (int j = 1; j <= n; ++j) {
    RatMatrix m = mat();
    m.at(0, j) = 1;
    m.at(j, n + 1) = -1;
    alg.basis.push_back(m);
    alg.grade.push_back(1);
  }
  finish_construction(alg);
  return alg;
}

GradedLieAlgebra build_projective_algebra(int n) {
  if (n < 2) throw std::invalid_argument("projective model needs n >= 2");
  GradedLieAlgebra alg;
  alg.kind = "projective";
  alg.params = {n};
  const int d = n + 1;
  alg.defining_dim = d;
  auto mat = [&]() { return RatMatrix(d, d); };
  auto unit = [&](int r, int c) {
    RatMatrix m = mat();
    m.at(r, c) = 1;
    return m;
  };

  for (int i = 1; i <= n; ++i) {
    alg.basis.push_back(unit(i, 0));
    alg.grade.push_back(-1);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      alg.basis.push_back(unit(i, j));
      alg.grade.push_back(0);
    }
  for (int l = 1; l <= n - 1; ++l) {
    RatMatrix m = mat();
    m.at(l, l) = 1;
    m.at(l + 1, l + 1) = -1;
    alg.basis.push_back(m);
    alg.grade.push_back(0);
  }
  {
    RatMatrix m = mat();
    m.at(0, 0) = rat(n, n + 1);
    for (int i = 1; i <= n; ++i) m.at(i, i) = rat(-1, n + 1);
    alg.grading_element_index = int(alg.basis.size());
    alg.basis.push_back(m);
    alg.grade.push_back(0);
  }
  for (int j = 1; j <= n; ++j) {
    alg.basis.push_back(unit(0, j));
    alg.grade.push_back(1);
  }
  finish_construction(alg);
  return alg;
}

GradedLieAlgebra build_grassmannian_algebra(int p, int q) {
  if (p < 2 || q < p) throw std::invalid_argument("grassmannian model needs 2 <= p <= q");
  GradedLieAlgebra alg;
  alg.kind = "grassmannian";
  alg.params = {p, q};
  const int d = p + q;
  alg.defining_dim = d;
  auto mat = [&]() { return RatMatrix(d, d); };
  auto unit = [&](int r, int c) {
    RatMatrix m = mat();
    m.at(r, c) = 1;
    return m;
  };

  for (int r = 0; r < q; ++r)
    for (int c = 0; c < p; ++c) {
      alg.basis.push_back(unit(p + r, c));
      alg.grade.push_back(-1);
    }
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      alg.basis.push_back(unit(i, j));
      alg.grade.push_back(0);
    }
  for (int l = 0; l + 1 < p; ++l) {
    RatMatrix m = mat();
    m.at(l, l) = 1;
    m.at(l + 1, l + 1) = -1;
    alg.basis.push_back(m);
    alg.grade.push_back(0);
  }
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      if (i == j) continue;
      alg.basis.push_back(unit(p + i, p + j));
      alg.grade.push_back(0);
    }
  for (int l = 0; l + 1 < q; ++l) {
    RatMatrix m = mat();
    m.at(p + l, p + l) = 1;
    m.at(p + l + 1, p + l + 1) = -1;
    alg.basis.push_back(m);
    alg.grade.push_back(0);
  }
  {
    RatMatrix m = mat();
    for (int i = 0; i < p; ++i) m.at(i, i) = rat(q, p + q);
    for (int i = 0; i < q; ++i) m.at(p + i, p + i) = rat(-p, p + q);
    alg.grading_element_index = int(alg.basis.size());
    alg.basis.push_back(m);
    alg.grade.push_back(0);
  }
  for (int r = 0; r < q; ++r)
    for (int c = 0; c < p; ++c) {
      alg.basis.push_back(unit(c, p + r));
      alg.grade.push_back(1);
    }
  finish_construction(alg);
  return alg;
}

GradedLieAlgebra build_custom_algebra(std::vector<RatMatrix> basis, std::vector<int> grade,
                                      int grading_element_index, std::string kind, std::vector<int> params) {
  GradedLieAlgebra alg;
  alg.kind = std::move(kind);
  alg.params = std::move(params);
  if (basis.empty()) throw std::invalid_argument("empty basis");
  alg.defining_dim = basis[0].rows();
  alg.basis = std::move(basis);
  alg.grade = std::move(grade);
  if (alg.grade.size() != alg.basis.size()) throw std::invalid_argument("grade list size mismatch");
  for (int g : alg.grade)
    if (g < -1 || g > 1) throw std::invalid_argument("grades must lie in {-1,0,1}");
  alg.grading_element_index = grading_element_index;
  finish_construction(alg);
  return alg;
}

void validate_algebra(const GradedLieAlgebra& alg) {
  const int dim = alg.dim();
  // Graded closure.
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      int gsum = alg.grade[i] + alg.grade[j];
      for (const auto& [k, c] : alg.cijk[i][j]) {
        (void)c;
        if (alg.grade[k] != gsum) throw std::runtime_error("bracket violates the grading");
      }
      if ((gsum < -1 || gsum > 1) && !alg.cijk[i][j].empty())
        throw std::runtime_error("bracket outside the |1|-graded range");
    }
  // Antisymmetry and Jacobi on coefficient level.
  auto bracket_sparse = [&](int i, int j) { return alg.cijk[i][j]; };
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      RatVec a(dim, Rational(0)), b(dim, Rational(0));
      for (const auto& [k, c] : bracket_sparse(i, j)) a[k] = c;
      for (const auto& [k, c] : bracket_sparse(j, i)) b[k] = c;
      for (int k = 0; k < dim; ++k)
        if (a[k] != -b[k]) throw std::runtime_error("bracket is not antisymmetric");
    }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k) {
        RatVec acc(dim, Rational(0));
        auto add_double = [&](int x, int y, int z) {
          // [b_x, [b_y, b_z]]
          for (const auto& [l, c1] : alg.cijk[y][z])
            for (const auto& [m, c2] : alg.cijk[x][l]) acc[m] += c1 * c2;
        };
        add_double(i, j, k);
        add_double(j, k, i);
        add_double(k, i, j);
        if (!vec_is_zero(acc)) throw std::runtime_error("Jacobi identity fails");
      }
  RatMatrix t = alg.trace_form();
  if (dense_rank(t) != dim) throw std::runtime_error("trace form is degenerate");
  // Associativity tr([x,y]z) = tr(x[y,z]) on basis triples.
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        Rational lhs(0), rhs(0);
        for (const auto& [l, c] : alg.cijk[i][j]) lhs += c * t.at(l, k);
        for (const auto& [l, c] : alg.cijk[j][k]) rhs += c * t.at(i, l);
        if (lhs != rhs) throw std::runtime_error("trace form is not associative");
      }
  // Duality normalization.
  for (int a = 0; a < alg.dim_minus(); ++a) {
    for (int b = 0; b < alg.dim_minus(); ++b) {
      Rational s(0);
      for (int c = 0; c < alg.dim_plus(); ++c) {
        if (sgn(alg.dual_g1[a][c]) == 0) continue;
        s += alg.dual_g1[a][c] * (alg.basis[alg.g1_offset() + c] * alg.basis[b]).trace();
      }
      if (s != Rational(a == b ? 1 : 0)) throw std::runtime_error("dual basis normalization broken");
    }
  }
}

namespace {

struct CRMat {
  RatMatrix re, im;
  CRMat(int r, int c) : re(r, c), im(r, c) {}
};

CRMat cmul(const CRMat& a, const CRMat& b) {
  CRMat out(a.re.rows(), b.re.cols());
  out.re = a.re * b.re - a.im * b.im;
  out.im = a.re * b.im + a.im * b.re;
  return out;
}

// Middle-block change of basis to weight vectors a_k = e_{2k-1} - i e_{2k},
// b_k = e_{2k-1} + i e_{2k} (plus the leftover e_n for odd n), in which the
// simple root vectors of so(n) have unit-entry block form.
void so_weight_basis(int n, CRMat& T, CRMat& Tinv) {
  const int m = n / 2;
  for (int k = 0; k < m; ++k) {
    T.re.at(2 * k, k) = 1;
    T.im.at(2 * k + 1, k) = -1;
    T.re.at(2 * k, m + k) = 1;
    T.im.at(2 * k + 1, m + k) = 1;
    Tinv.re.at(k, 2 * k) = Rational(1, 2);
    Tinv.im.at(k, 2 * k + 1) = Rational(1, 2);
    Tinv.re.at(m + k, 2 * k) = Rational(1, 2);
    Tinv.im.at(m + k, 2 * k + 1) = Rational(-1, 2);
  }
  if (n % 2 == 1) {
    T.re.at(n - 1, n - 1) = 1;
    Tinv.re.at(n - 1, n - 1) = 1;
  }
}

}  // namespace

std::vector<ComplexRatVec> raising_operators(const GradedLieAlgebra& alg) {
  const int dim = alg.dim();
  auto coeff_for_basis_index = [&](int idx) {
    ComplexRatVec v;
    v.re.assign(dim, Rational(0));
    v.im.assign(dim, Rational(0));
    v.re[idx] = 1;
    return v;
  };

  if (alg.kind == "projective") {
    const int n = alg.params[0];
    // Off-diagonal middle elements are ordered row-major starting at g0_offset.
    auto offdiag_index = [&](int i, int j) {
      int count = 0;
      for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
          if (a == b) continue;
          if (a == i && b == j) return alg.g0_offset() + count;
          ++count;
        }
      throw std::logic_error("offdiag index");
    };
    std::vector<ComplexRatVec> ops;
    for (int l = 1; l <= n - 1; ++l) ops.push_back(coeff_for_basis_index(offdiag_index(l, l + 1)));
    return ops;
  }

  if (alg.kind == "grassmannian") {
    const int p = alg.params[0];
    const int q = alg.params[1];
    auto offdiag_index = [&](int base, int blk, int i, int j) {
      int count = 0;
      for (int a = 0; a < blk; ++a)
        for (int b = 0; b < blk; ++b) {
          if (a == b) continue;
          if (a == i && b == j) return base + count;
          ++count;
        }
      throw std::logic_error("offdiag index");
    };
    std::vector<ComplexRatVec> ops;
    int base_p = alg.g0_offset();
    for (int l = 0; l + 1 < p; ++l) ops.push_back(coeff_for_basis_index(offdiag_index(base_p, p, l, l + 1)));
    int base_q = alg.g0_offset() + p * (p - 1) + (p - 1);
    for (int l = 0; l + 1 < q; ++l) ops.push_back(coeff_for_basis_index(offdiag_index(base_q, q, l, l + 1)));
    return ops;
  }

  if (alg.kind == "conformal") {
    const int n = alg.params[0];
    const int m = n / 2;
    CRMat T(n, n), Tinv(n, n);
    so_weight_basis(n, T, Tinv);

    auto middle_coeffs = [&](const CRMat& xw) {
      CRMat x = cmul(cmul(T, xw), Tinv);
      // x must be complex antisymmetric; its m_{ab} coefficient is x_{ab}.
      ComplexRatVec v;
      v.re.assign(dim, Rational(0));
      v.im.assign(dim, Rational(0));
      int idx = alg.g0_offset();
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          if (x.re.at(a, b) != -x.re.at(b, a) || x.im.at(a, b) != -x.im.at(b, a))
            throw std::logic_error("weight-basis conjugation left the orthogonal algebra");
          v.re[idx] = x.re.at(a, b);
          v.im[idx] = x.im.at(a, b);
          ++idx;
        }
      return v;
    };

    std::vector<ComplexRatVec> ops;
    for (int l = 0; l + 1 < m; ++l) {
      CRMat xw(n, n);
      xw.re.at(l, l + 1) = 1;
      xw.re.at(m + l + 1, m + l) = -1;
      ops.push_back(middle_coeffs(xw));
    }
    if (n % 2 == 0) {
      CRMat xw(n, n);
      xw.re.at(m - 2, m + m - 1) = 1;
      xw.re.at(m - 1, m + m - 2) = -1;
      ops.push_back(middle_coeffs(xw));
    } else {
      CRMat xw(n, n);
      xw.re.at(m - 1, n - 1) = 1;
      xw.re.at(n - 1, m + m - 1) = -2;
      ops.push_back(middle_coeffs(xw));
    }
    return ops;
  }

  throw std::invalid_argument("raising operators are only defined for the built-in families");
}

}  // namespace tractor
