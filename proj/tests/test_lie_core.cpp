#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <utility>
#include <vector>

#include "tractor/lie_algebra.hpp"
#include "tractor/representation.hpp"

using namespace tractor;

namespace {

// Index of m_{ab} (a < b, 1-based) in the conformal g_0 block.
int m_index(const GradedLieAlgebra& alg, int a, int b) {
  const int n = alg.params[0];
  int count = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      if (i == a && j == b) return alg.g0_offset() + count;
      ++count;
    }
  FAIL("bad m index");
  return -1;
}

RatVec coeff_g1(const GradedLieAlgebra& alg, const RatVec& w) {
  RatVec v(alg.dim(), Rational(0));
  for (size_t j = 0; j < w.size(); ++j) v[alg.g1_offset() + j] = w[j];
  return v;
}

RatVec coeff_gm1(const GradedLieAlgebra& alg, const RatVec& x) {
  RatVec v(alg.dim(), Rational(0));
  for (size_t j = 0; j < x.size(); ++j) v[j] = x[j];
  return v;
}

}  // namespace

TEST_CASE("family dimensions and full validation") {
  for (int n : {3, 4, 5}) {
    auto alg = build_conformal_algebra(n);
    validate_algebra(alg);
    CHECK(alg.dim() == (n + 2) * (n + 1) / 2);
    CHECK(alg.dim_minus() == n);
    CHECK(alg.dim_plus() == n);
    CHECK(alg.dim_zero() == n * (n - 1) / 2 + 1);
  }
  for (int n : {2, 3, 4}) {
    auto alg = build_projective_algebra(n);
    validate_algebra(alg);
    CHECK(alg.dim() == (n + 1) * (n + 1) - 1);
    CHECK(alg.dim_minus() == n);
    CHECK(alg.dim_plus() == n);
  }
  for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}}) {
    auto alg = build_grassmannian_algebra(p, q);
    validate_algebra(alg);
    CHECK(alg.dim() == (p + q) * (p + q) - 1);
    CHECK(alg.dim_minus() == p * q);
    CHECK(alg.dim_plus() == p * q);
  }
}

TEST_CASE("conformal bracket table") {
  const int n = 4;
  auto alg = build_conformal_algebra(n);
  const int e = alg.grading_element_index;

  for (int i = 1; i <= n; ++i) {
    // [E, X_i] = -X_i and [E, Z_i] = Z_i.
    auto bx = alg.bracket_basis(e, i - 1);
    REQUIRE(bx.size() == 1);
    CHECK(bx[0].first == i - 1);
    CHECK(bx[0].second == Rational(-1));
    auto bz = alg.bracket_basis(e, alg.g1_offset() + i - 1);
    REQUIRE(bz.size() == 1);
    CHECK(bz[0].first == alg.g1_offset() + i - 1);
    CHECK(bz[0].second == Rational(1));
  }

  // [Z_j, X_i] = delta_ij E - m_ij, with m_ij = -m_ji for i > j.
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i) {
      RatVec out(alg.dim(), Rational(0));
      for (const auto& [k, c] : alg.bracket_basis(alg.g1_offset() + j - 1, i - 1)) out[k] = c;
      RatVec want(alg.dim(), Rational(0));
      if (i == j) {
        want[e] = 1;
      } else if (i < j) {
        want[m_index(alg, i, j)] = -1;
      } else {
        want[m_index(alg, j, i)] = 1;
      }
      CHECK(out == want);
    }

  // [m_ab, X_c] = delta_bc X_a - delta_ac X_b.
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = 1; c <= n; ++c) {
        RatVec out(alg.dim(), Rational(0));
        for (const auto& [k, v] : alg.bracket_basis(m_index(alg, a, b), c - 1)) out[k] = v;
        RatVec want(alg.dim(), Rational(0));
        if (b == c) want[a - 1] += 1;
        if (a == c) want[b - 1] -= 1;
        CHECK(out == want);
      }

  // g_{-1} and g_1 are abelian.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CHECK(alg.bracket_basis(i, j).empty());
      CHECK(alg.bracket_basis(alg.g1_offset() + i, alg.g1_offset() + j).empty());
    }
}

TEST_CASE("trace pairing fixes the dual basis scale") {
  auto conf = build_conformal_algebra(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Rational tr = (conf.basis[conf.g1_offset() + j] * conf.basis[i]).trace();
      CHECK(tr == Rational(i == j ? 2 : 0));
      CHECK(conf.dual_g1[i][j] == (i == j ? Rational(1, 2) : Rational(0)));
    }
  auto proj = build_projective_algebra(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Rational tr = (proj.basis[proj.g1_offset() + j] * proj.basis[i]).trace();
      CHECK(tr == Rational(i == j ? 1 : 0));
      CHECK(proj.dual_g1[i][j] == Rational(i == j ? 1 : 0));
    }
  auto grass = build_grassmannian_algebra(2, 3);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(grass.dual_g1[i][j] == Rational(i == j ? 1 : 0));
}

TEST_CASE("iterated lowering identity") {
  const int n = 4;
  auto alg = build_conformal_algebra(n);
  RatVec w = {rat(2), rat(-1), rat(3), rat(1, 2)};
  RatVec v = {rat(1), rat(4), rat(0), rat(-2)};
  Rational wv = vec_dot(w, v);
  Rational ww = vec_dot(w, w);

  RatVec zw = coeff_g1(alg, w);
  RatVec xv = coeff_gm1(alg, v);
  RatVec got = alg.bracket(zw, alg.bracket(zw, xv));

  // [Z_w, [Z_w, X_v]] = -(w.v) Z_w + Z_{|w|^2 v - (v.w) w}
  RatVec expect_w(n);
  for (int j = 0; j < n; ++j) expect_w[j] = -wv * w[j] + ww * v[j] - wv * w[j];
  CHECK(got == coeff_g1(alg, expect_w));
}

TEST_CASE("custom rebuild matches the packaged construction") {
  auto ref = build_projective_algebra(3);
  auto custom = build_custom_algebra(ref.basis, ref.grade, ref.grading_element_index);
  validate_algebra(custom);
  CHECK(custom.kind == "custom");
  REQUIRE(custom.dim() == ref.dim());
  for (int i = 0; i < ref.dim(); ++i)
    for (int j = 0; j < ref.dim(); ++j) {
      RatVec a(ref.dim(), Rational(0)), b(ref.dim(), Rational(0));
      for (const auto& [k, c] : ref.bracket_basis(i, j)) a[k] = c;
      for (const auto& [k, c] : custom.bracket_basis(i, j)) b[k] = c;
      CHECK(a == b);
    }
  CHECK_THROWS(raising_operators(custom));
}

TEST_CASE("raising operator counts and g_0 support") {
  auto check_ops = [](const GradedLieAlgebra& alg, int expect_count, bool allow_complex) {
    auto ops = raising_operators(alg);
    CHECK(int(ops.size()) == expect_count);
    for (const auto& op : ops) {
      bool nonzero = false;
      for (int i = 0; i < alg.dim(); ++i) {
        bool hit = sgn(op.re[i]) != 0 || sgn(op.im[i]) != 0;
        if (!hit) continue;
        nonzero = true;
        CHECK(alg.grade[i] == 0);
        CHECK(i != alg.grading_element_index);
        if (!allow_complex) CHECK(sgn(op.im[i]) == 0);
      }
      CHECK(nonzero);
    }
  };
  check_ops(build_conformal_algebra(3), 1, true);
  check_ops(build_conformal_algebra(4), 2, true);
  check_ops(build_conformal_algebra(5), 2, true);
  check_ops(build_projective_algebra(2), 1, false);
  check_ops(build_projective_algebra(4), 3, false);
  check_ops(build_grassmannian_algebra(2, 3), 3, false);
  check_ops(build_grassmannian_algebra(3, 3), 4, false);
}

TEST_CASE("raising operators act nilpotently in the adjoint") {
  for (auto alg : {build_conformal_algebra(4), build_conformal_algebra(5)}) {
    auto rep = adjoint_rep(alg);
    for (const auto& op : raising_operators(alg)) {
      RatMatrix re(alg.dim(), alg.dim()), im(alg.dim(), alg.dim());
      for (int i = 0; i < alg.dim(); ++i) {
        if (sgn(op.re[i]) != 0) re = re + rep.action[i].scaled(op.re[i]);
        if (sgn(op.im[i]) != 0) im = im + rep.action[i].scaled(op.im[i]);
      }
      // Square (re + i im) three times: a root vector kills every ad-string.
      RatMatrix r = re, m = im;
      for (int s = 0; s < 3; ++s) {
        RatMatrix r2 = r * r - m * m;
        RatMatrix m2 = r * m + m * r;
        r = r2;
        m = m2;
      }
      CHECK(r.is_zero());
      CHECK(m.is_zero());
    }
  }
}

TEST_CASE("standard module slot actions") {
  const int n = 4;
  auto alg = build_conformal_algebra(n);
  auto rep = standard_rep(alg);
  validate_representation(rep);

  // Module vector laid out as (rho, mu_1..mu_n, sigma) in the defining basis.
  Rational sigma = rat(3), rho = rat(-2);
  RatVec mu = {rat(1), rat(0), rat(5), rat(-1)};
  RatVec u(n + 2, Rational(0));
  u[0] = rho;
  for (int i = 0; i < n; ++i) u[1 + i] = mu[i];
  u[n + 1] = sigma;

  RatVec v = {rat(2), rat(1), rat(-3), rat(0)};
  RatVec xu = rep.act_elem(coeff_gm1(alg, v), u);
  CHECK(xu[0] == Rational(0));
  for (int i = 0; i < n; ++i) CHECK(xu[1 + i] == v[i] * rho);
  CHECK(xu[n + 1] == -vec_dot(v, mu));

  RatVec w = {rat(0), rat(4), rat(1), rat(-2)};
  RatVec zu = rep.act_elem(coeff_g1(alg, w), u);
  CHECK(zu[0] == vec_dot(w, mu));
  for (int i = 0; i < n; ++i) CHECK(zu[1 + i] == -sigma * w[i]);
  CHECK(zu[n + 1] == Rational(0));

  auto grades = rep.distinct_grades_sorted();
  REQUIRE(grades.size() == 3);
  CHECK(grades[0] == Rational(-1));
  CHECK(grades[1] == Rational(0));
  CHECK(grades[2] == Rational(1));
  CHECK(rep.indices_of_module_grade(Rational(-1)) == std::vector<int>{n + 1});
  CHECK(rep.indices_of_module_grade(Rational(0)).size() == size_t(n));
  CHECK(rep.indices_of_module_grade(Rational(1)) == std::vector<int>{0});
}

TEST_CASE("representation battery across families") {
  std::vector<GradedLieAlgebra> algs;
  algs.push_back(build_conformal_algebra(3));
  algs.push_back(build_projective_algebra(2));
  algs.push_back(build_projective_algebra(3));
  algs.push_back(build_grassmannian_algebra(2, 2));
  for (const auto& alg : algs) {
    validate_representation(adjoint_rep(alg));
    auto tan = tangent_rep(alg);
    validate_representation(tan);
    CHECK(tan.completely_reducible);
    for (int i = 0; i < alg.dim(); ++i)
      if (alg.grade[i] == 1) CHECK(tan.action[i].is_zero());
    auto dens = density_rep(alg, rat(2));
    validate_representation(dens);
    CHECK(dens.action[alg.grading_element_index].at(0, 0) == Rational(-2));
    validate_representation(density_rep(alg, rat(-3, 2)));
  }
  validate_representation(standard_rep(build_projective_algebra(3)));
  validate_representation(standard_rep(build_grassmannian_algebra(2, 3)));
}
