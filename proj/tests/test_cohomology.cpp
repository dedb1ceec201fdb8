#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <utility>
#include <vector>

#include "tractor/cohomology.hpp"

using namespace tractor;

namespace {

using AlgebraBuilder = GradedLieAlgebra (*)();

const std::vector<AlgebraBuilder> kSmallSweep = {
    +[] { return build_conformal_algebra(3); }, +[] { return build_conformal_algebra(4); },
    +[] { return build_projective_algebra(2); }, +[] { return build_projective_algebra(3); },
    +[] { return build_grassmannian_algebra(2, 2); }};

bool entries_preserve_homogeneity(const LinearMap& m) {
  for (int r = 0; r < m.matrix.rows; ++r)
    for (const auto& e : m.matrix.row[r])
      if (m.codomain.homogeneity_of(r) != m.domain.homogeneity_of(e.col)) return false;
  return true;
}

}  // namespace

TEST_CASE("complex axioms on the small sweep") {
  for (auto* builder : kSmallSweep) {
    auto alg = builder();
    auto adj = adjoint_rep(alg);
    auto std_rep = standard_rep(alg);
    const int n = alg.dim_minus();
    for (const Representation* rep : {&adj, &std_rep}) {
      for (int k = 0; k <= 3 && k <= n; ++k) {
        if (k + 1 <= n) {
          auto d1 = coboundary(alg, *rep, k);
          auto d2 = coboundary(alg, *rep, k + 1);
          CHECK(smul(d2.matrix, d1.matrix, ExecMode::serial).is_zero());
        }
        if (k >= 2) {
          auto s1 = codifferential(alg, *rep, k);
          auto s2 = codifferential(alg, *rep, k - 1);
          CHECK(smul(s2.matrix, s1.matrix, ExecMode::serial).is_zero());
          auto b1 = boundary(alg, *rep, k);
          auto b2 = boundary(alg, *rep, k - 1);
          CHECK(smul(b2.matrix, b1.matrix, ExecMode::serial).is_zero());
        }
      }
    }
  }
}

TEST_CASE("degree zero differential and kernel") {
  auto alg = build_conformal_algebra(4);
  auto rep = adjoint_rep(alg);
  auto d0 = coboundary(alg, rep, 0);
  CHECK(d0.domain.dim() == alg.dim());
  CHECK(d0.codomain.dim() == 4 * alg.dim());

  // Column v, row (X_t, m'): entry = action of X_t.
  for (int t = 0; t < 4; ++t)
    for (int m = 0; m < alg.dim(); ++m) {
      RatVec unit(alg.dim(), Rational(0));
      unit[m] = 1;
      RatVec want = rep.act(t, unit);
      for (int mr = 0; mr < alg.dim(); ++mr)
        CHECK(d0.matrix.to_dense().at(d0.codomain.index(t, mr), m) == want[mr]);
    }

  auto ker = sparse_kernel(d0.matrix, ExecMode::serial);
  CHECK(int(ker.size()) == 4);
  for (const auto& v : ker)
    for (int i = 0; i < alg.dim(); ++i)
      if (alg.grade[i] != -1) CHECK(sgn(v[i]) == 0);
}

TEST_CASE("cochain space dimensions and homogeneity tags") {
  auto alg = build_conformal_algebra(3);
  auto rep = adjoint_rep(alg);
  auto space = cochain_space(alg, rep, 2);
  CHECK(space.dim() == 30);
  auto homs = space.homogeneities();
  REQUIRE(homs.size() == 3);
  CHECK(homs[0] == Rational(1));
  CHECK(homs[2] == Rational(3));
  int total = 0;
  for (const auto& h : homs) total += int(space.indices_of_homogeneity(h).size());
  CHECK(total == space.dim());

  CHECK(entries_preserve_homogeneity(coboundary(alg, rep, 1)));
  CHECK(entries_preserve_homogeneity(codifferential(alg, rep, 2)));
  CHECK(entries_preserve_homogeneity(laplacian(alg, rep, 1)));
}

TEST_CASE("boundary in degree one realizes the module action") {
  auto alg = build_conformal_algebra(3);
  auto rep = standard_rep(alg);
  auto b1 = boundary(alg, rep, 1);
  CHECK(b1.domain.dim() == 3 * 5);
  CHECK(b1.codomain.dim() == 5);
  for (int a = 0; a < 3; ++a)
    for (int m = 0; m < 5; ++m) {
      RatVec unit(5, Rational(0));
      unit[m] = 1;
      RatVec want = rep.act(alg.g1_offset() + a, unit);
      for (int mr = 0; mr < 5; ++mr) CHECK(b1.matrix.to_dense().at(mr, b1.domain.index(a, m)) == want[mr]);
    }
  // im delta_1 = g_1 . V has codimension 1 (the sigma line survives in H_0).
  CHECK(sparse_rank(b1.matrix, ExecMode::serial) == 4);
}

TEST_CASE("codifferential degree bounds") {
  auto alg = build_conformal_algebra(3);
  auto rep = adjoint_rep(alg);
  CHECK_THROWS(codifferential(alg, rep, 0));
  CHECK_THROWS(codifferential(alg, rep, 4));
  CHECK_THROWS(coboundary(alg, rep, -1));
  CHECK_THROWS(coboundary(alg, rep, 4));
  CHECK_THROWS(coboundary(alg, density_rep(alg, rat(1)), 0));
}

TEST_CASE("hodge decomposition invariants on the small sweep") {
  for (auto* builder : kSmallSweep) {
    auto alg = builder();
    auto adj = adjoint_rep(alg);
    auto std_rep = standard_rep(alg);
    const int n = alg.dim_minus();
    for (const Representation* rep : {&adj, &std_rep}) {
      for (int k = 0; k <= 3 && k <= n; ++k) {
        auto report = hodge_decomposition(alg, *rep, k, ExecMode::serial);
        CHECK(report.dim_im_dstar + report.dim_ker_box + report.dim_im_d == report.dim_C);
        CHECK(report.dim_H == report.dim_ker_box);

        int rank_dk = sparse_rank(coboundary(alg, *rep, k).matrix, ExecMode::serial);
        int rank_dkm1 =
            k >= 1 ? sparse_rank(coboundary(alg, *rep, k - 1).matrix, ExecMode::serial) : 0;
        int dim_ker_dk = report.dim_C - rank_dk;
        CHECK(report.dim_ker_box == dim_ker_dk - rank_dkm1);

        auto dk = coboundary(alg, *rep, k);
        for (const auto& hv : report.harmonic) {
          CHECK(vec_is_zero(s_apply(dk.matrix, hv.coords)));
          if (k >= 1) {
            auto ds = codifferential(alg, *rep, k);
            CHECK(vec_is_zero(s_apply(ds.matrix, hv.coords)));
          }
        }
        for (const auto& blk : report.blocks) {
          CHECK(blk.box_kernel_stable);
          CHECK(blk.box_injective_on_im_dstar);
          CHECK(blk.sum_is_direct);
        }

        auto par = hodge_decomposition(alg, *rep, k, ExecMode::parallel);
        CHECK(par.dim_im_dstar == report.dim_im_dstar);
        CHECK(par.dim_ker_box == report.dim_ker_box);
        CHECK(par.dim_im_d == report.dim_im_d);
        REQUIRE(par.harmonic.size() == report.harmonic.size());
        for (size_t i = 0; i < par.harmonic.size(); ++i)
          CHECK(par.harmonic[i].coords == report.harmonic[i].coords);
      }
    }
  }
}

TEST_CASE("laplacian matches its factor definition") {
  auto alg = build_projective_algebra(3);
  auto rep = adjoint_rep(alg);
  for (int k : {0, 1, 2}) {
    auto box = laplacian(alg, rep, k);
    SparseMat want(box.domain.dim(), box.domain.dim());
    if (k >= 1)
      want = sadd(want, smul(coboundary(alg, rep, k - 1).matrix, codifferential(alg, rep, k).matrix,
                             ExecMode::serial));
    if (k < alg.dim_minus())
      want = sadd(want, smul(codifferential(alg, rep, k + 1).matrix, coboundary(alg, rep, k).matrix,
                             ExecMode::serial));
    CHECK(box.matrix.to_dense() == want.to_dense());
  }
}

TEST_CASE("conformal adjoint cohomology homogeneity profile") {
  for (int n : {3, 4}) {
    auto alg = build_conformal_algebra(n);
    auto rep = adjoint_rep(alg);
    auto h1 = hodge_decomposition(alg, rep, 1, ExecMode::serial);
    for (const auto& [hom, d] : h1.homogeneity_histogram()) {
      (void)d;
      CHECK(hom <= Rational(0));
    }
    auto h2 = hodge_decomposition(alg, rep, 2, ExecMode::serial);
    auto hist = h2.homogeneity_histogram();
    REQUIRE(hist.size() == 1);
    CHECK(hist[0].first == Rational(n == 3 ? 3 : 2));
    CHECK(hist[0].second > 0);
  }
}

TEST_CASE("projective adjoint first cohomology has a positive part") {
  for (int n : {2, 3}) {
    auto alg = build_projective_algebra(n);
    auto rep = adjoint_rep(alg);
    auto h1 = hodge_decomposition(alg, rep, 1, ExecMode::serial);
    bool positive = false;
    for (const auto& [hom, d] : h1.homogeneity_histogram()) {
      (void)d;
      if (hom > Rational(0)) positive = true;
    }
    CHECK(positive);
  }
}

TEST_CASE("irreducible component counts") {
  {
    auto alg = build_conformal_algebra(4);
    auto rep = standard_rep(alg);
    auto harm = harmonic_basis(alg, rep, 0, ExecMode::serial);
    REQUIRE(harm.size() == 1);
    CHECK(count_irreducibles(alg, rep, 0, harm, ExecMode::serial) == 1);
  }
  {
    auto alg = build_conformal_algebra(4);
    auto rep = adjoint_rep(alg);
    auto harm = harmonic_basis(alg, rep, 0, ExecMode::serial);
    REQUIRE(harm.size() == 4);
    CHECK(count_irreducibles(alg, rep, 0, harm, ExecMode::serial) == 1);
    auto h2 = harmonic_basis(alg, rep, 2, ExecMode::serial);
    CHECK(count_irreducibles(alg, rep, 2, h2, ExecMode::serial) == 2);
  }
  {
    auto alg = build_conformal_algebra(3);
    auto rep = adjoint_rep(alg);
    auto h2 = harmonic_basis(alg, rep, 2, ExecMode::serial);
    CHECK(count_irreducibles(alg, rep, 2, h2, ExecMode::serial) == 1);
  }
  {
    auto alg = build_grassmannian_algebra(2, 2);
    auto rep = adjoint_rep(alg);
    auto h0 = harmonic_basis(alg, rep, 0, ExecMode::serial);
    CHECK(count_irreducibles(alg, rep, 0, h0, ExecMode::serial) == 1);
  }
}

TEST_CASE("operators commute with the g_0 action") {
  auto alg = build_conformal_algebra(3);
  auto rep = adjoint_rep(alg);
  auto d1 = coboundary(alg, rep, 1);
  auto s2 = codifferential(alg, rep, 2);
  auto box1 = laplacian(alg, rep, 1);
  for (int i = 0; i < alg.dim(); ++i) {
    if (alg.grade[i] != 0) continue;
    RatVec coeff(alg.dim(), Rational(0));
    coeff[i] = 1;
    SparseMat m1 = g0_cochain_action(alg, rep, 1, coeff);
    SparseMat m2 = g0_cochain_action(alg, rep, 2, coeff);
    CHECK(smul(d1.matrix, m1, ExecMode::serial).to_dense() ==
          smul(m2, d1.matrix, ExecMode::serial).to_dense());
    CHECK(smul(s2.matrix, m2, ExecMode::serial).to_dense() ==
          smul(m1, s2.matrix, ExecMode::serial).to_dense());
    CHECK(smul(box1.matrix, m1, ExecMode::serial).to_dense() ==
          smul(m1, box1.matrix, ExecMode::serial).to_dense());
  }
}

TEST_CASE("grassmannian (3,3) second cohomology") {
  auto alg = build_grassmannian_algebra(3, 3);
  auto rep = adjoint_rep(alg);
  auto h2 = hodge_decomposition(alg, rep, 2, ExecMode::serial);
  auto hist = h2.homogeneity_histogram();
  REQUIRE(hist.size() == 1);
  CHECK(hist[0].first == Rational(1));
  CHECK(count_irreducibles(alg, rep, 2, h2.harmonic, ExecMode::serial) == 2);
}
