#include "tractor/cohomology.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace tractor {

namespace {

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    if (k == 0) break;
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

CochainSpace make_space(const GradedLieAlgebra& alg, const Representation& rep, int degree,
                        bool chains) {
  if (rep.alg != &alg) throw std::invalid_argument("representation belongs to a different algebra");
  const int n = chains ? alg.dim_plus() : alg.dim_minus();
  if (degree < -1 || degree > n + 1) throw std::invalid_argument("cochain degree out of range");
  CochainSpace s;
  s.alg = &alg;
  s.rep = &rep;
  s.degree = degree;
  s.chains = chains;
  s.subsets = k_subsets(n, degree);
  return s;
}

std::map<std::vector<int>, int> subset_lookup(const CochainSpace& s) {
  std::map<std::vector<int>, int> m;
  for (size_t i = 0; i < s.subsets.size(); ++i) m[s.subsets[i]] = int(i);
  return m;
}

}  // namespace

std::vector<Rational> CochainSpace::homogeneities() const {
  std::vector<Rational> h;
  for (const Rational& g : rep->module_grade) h.push_back(Rational(degree) + g);
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  if (subsets.empty()) h.clear();
  return h;
}

std::vector<int> CochainSpace::indices_of_homogeneity(const Rational& h) const {
  std::vector<int> idx;
  for (int i = 0; i < dim(); ++i)
    if (homogeneity_of(i) == h) idx.push_back(i);
  return idx;
}

CochainSpace cochain_space(const GradedLieAlgebra& alg, const Representation& rep, int degree) {
  return make_space(alg, rep, degree, false);
}

CochainSpace chain_space(const GradedLieAlgebra& alg, const Representation& rep, int degree) {
  return make_space(alg, rep, degree, true);
}

LinearMap coboundary(const GradedLieAlgebra& alg, const Representation& rep, int k) {
  if (rep.p_only)
    throw std::invalid_argument("coboundary needs the g_{-1} action; the module is parabolic-only");
  const int n = alg.dim_minus();
  if (k < 0 || k > n) throw std::invalid_argument("coboundary degree out of range");
  LinearMap map;
  map.domain = cochain_space(alg, rep, k);
  map.codomain = cochain_space(alg, rep, k + 1);
  map.matrix = SparseMat(map.codomain.dim(), map.domain.dim());
  auto lookup = subset_lookup(map.codomain);
  const int md = rep.module_dim;

  for (size_t si = 0; si < map.domain.subsets.size(); ++si) {
    const auto& s = map.domain.subsets[si];
    for (int t = 0; t < n; ++t) {
      if (std::binary_search(s.begin(), s.end(), t)) continue;
      std::vector<int> bigger = s;
      bigger.insert(std::upper_bound(bigger.begin(), bigger.end(), t), t);
      int pos = int(std::lower_bound(bigger.begin(), bigger.end(), t) - bigger.begin());
      int sign = (pos % 2 == 0) ? 1 : -1;
      int ti = lookup.at(bigger);
      const RatMatrix& act = rep.action[t];
      for (int mr = 0; mr < md; ++mr)
        for (int mc = 0; mc < md; ++mc) {
          const Rational& a = act.at(mr, mc);
          if (sgn(a) == 0) continue;
          map.matrix.add_entry(map.codomain.index(ti, mr), map.domain.index(int(si), mc),
                               sign > 0 ? a : Rational(-a));
        }
    }
  }
  map.matrix.finalize();
  return map;
}

LinearMap boundary(const GradedLieAlgebra& alg, const Representation& rep, int k) {
  const int n = alg.dim_plus();
  if (k < 0 || k > n) throw std::invalid_argument("boundary degree out of range");
  LinearMap map;
  map.domain = chain_space(alg, rep, k);
  map.codomain = chain_space(alg, rep, k - 1);
  map.matrix = SparseMat(map.codomain.dim(), map.domain.dim());
  auto lookup = subset_lookup(map.codomain);
  const int md = rep.module_dim;

  for (size_t si = 0; si < map.domain.subsets.size(); ++si) {
    const auto& s = map.domain.subsets[si];
    for (size_t pos = 0; pos < s.size(); ++pos) {
      std::vector<int> smaller = s;
      smaller.erase(smaller.begin() + pos);
      int sign = (pos % 2 == 0) ? 1 : -1;
      int ti = lookup.at(smaller);
      const RatMatrix& act = rep.action[alg.g1_offset() + s[pos]];
      for (int mr = 0; mr < md; ++mr)
        for (int mc = 0; mc < md; ++mc) {
          const Rational& a = act.at(mr, mc);
          if (sgn(a) == 0) continue;
          map.matrix.add_entry(map.codomain.index(ti, mr), map.domain.index(int(si), mc),
                               sign > 0 ? a : Rational(-a));
        }
    }
  }
  map.matrix.finalize();
  return map;
}

LinearMap codifferential(const GradedLieAlgebra& alg, const Representation& rep, int k) {
  const int n = alg.dim_minus();
  if (k < 1 || k > n) throw std::invalid_argument("codifferential degree out of range");
  LinearMap map;
  map.domain = cochain_space(alg, rep, k);
  map.codomain = cochain_space(alg, rep, k - 1);
  map.matrix = SparseMat(map.codomain.dim(), map.domain.dim());
  auto lookup = subset_lookup(map.codomain);
  const int md = rep.module_dim;

  // zeta_a action matrices from the trace-dual basis of g_1.
  std::vector<RatMatrix> zeta(n, RatMatrix(md, md));
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < alg.dim_plus(); ++c)
      if (sgn(alg.dual_g1[a][c]) != 0)
        zeta[a] = zeta[a] + rep.action[alg.g1_offset() + c].scaled(alg.dual_g1[a][c]);

  for (size_t si = 0; si < map.domain.subsets.size(); ++si) {
    const auto& s = map.domain.subsets[si];
    for (size_t pos = 0; pos < s.size(); ++pos) {
      std::vector<int> smaller = s;
      smaller.erase(smaller.begin() + pos);
      int sign = (pos % 2 == 0) ? 1 : -1;
      int ti = lookup.at(smaller);
      const RatMatrix& act = zeta[s[pos]];
      for (int mr = 0; mr < md; ++mr)
        for (int mc = 0; mc < md; ++mc) {
          const Rational& a = act.at(mr, mc);
          if (sgn(a) == 0) continue;
          map.matrix.add_entry(map.codomain.index(ti, mr), map.domain.index(int(si), mc),
                               sign > 0 ? a : Rational(-a));
        }
    }
  }
  map.matrix.finalize();
  return map;
}

LinearMap laplacian(const GradedLieAlgebra& alg, const Representation& rep, int k) {
  const int n = alg.dim_minus();
  if (k < 0 || k > n) throw std::invalid_argument("laplacian degree out of range");
  LinearMap map;
  map.domain = cochain_space(alg, rep, k);
  map.codomain = map.domain;
  SparseMat acc(map.domain.dim(), map.domain.dim());
  if (k >= 1) {
    LinearMap down = codifferential(alg, rep, k);
    LinearMap up = coboundary(alg, rep, k - 1);
    acc = sadd(acc, smul(up.matrix, down.matrix, ExecMode::serial));
  }
  if (k < n) {
    LinearMap up = coboundary(alg, rep, k);
    LinearMap down = codifferential(alg, rep, k + 1);
    acc = sadd(acc, smul(down.matrix, up.matrix, ExecMode::serial));
  }
  map.matrix = std::move(acc);
  return map;
}

SparseMat g0_cochain_action(const GradedLieAlgebra& alg, const Representation& rep, int degree,
                            const RatVec& g0_coeffs) {
  CochainSpace space = cochain_space(alg, rep, degree);
  const int n = alg.dim_minus();
  const int md = rep.module_dim;
  for (int i = 0; i < alg.dim(); ++i)
    if (sgn(g0_coeffs[i]) != 0 && alg.grade[i] != 0)
      throw std::invalid_argument("cochain action element must lie in g_0");

  // Module part and the adjoint matrix on g_{-1}.
  RatMatrix mv(md, md);
  RatMatrix ad(n, n);
  for (int i = 0; i < alg.dim(); ++i) {
    if (sgn(g0_coeffs[i]) == 0) continue;
    mv = mv + rep.action[i].scaled(g0_coeffs[i]);
    for (int c = 0; c < n; ++c)
      for (const auto& [b, v] : alg.cijk[i][c])
        if (alg.grade[b] == -1) ad.at(b, c) += g0_coeffs[i] * v;
  }

  SparseMat out(space.dim(), space.dim());
  auto lookup = subset_lookup(space);
  for (size_t si = 0; si < space.subsets.size(); ++si) {
    const auto& s = space.subsets[si];
    for (int mr = 0; mr < md; ++mr)
      for (int mc = 0; mc < md; ++mc)
        if (sgn(mv.at(mr, mc)) != 0)
          out.add_entry(space.index(int(si), mr), space.index(int(si), mc), mv.at(mr, mc));
    // Coadjoint part: W . e_a* = -sum_c ad(W)_{ac} e_c*.
    for (size_t pos = 0; pos < s.size(); ++pos) {
      int a = s[pos];
      for (int c = 0; c < n; ++c) {
        const Rational& coef = ad.at(a, c);
        if (sgn(coef) == 0) continue;
        if (c == a) {
          for (int m = 0; m < md; ++m)
            out.add_entry(space.index(int(si), m), space.index(int(si), m), Rational(-coef));
          continue;
        }
        if (std::binary_search(s.begin(), s.end(), c)) continue;
        std::vector<int> reduced = s;
        reduced.erase(reduced.begin() + pos);
        int j = int(std::lower_bound(reduced.begin(), reduced.end(), c) - reduced.begin());
        std::vector<int> swapped = reduced;
        swapped.insert(swapped.begin() + j, c);
        int sign = ((int(pos) + j) % 2 == 0) ? 1 : -1;
        int ti = lookup.at(swapped);
        Rational val = Rational(-coef);
        if (sign < 0) val = -val;
        for (int m = 0; m < md; ++m)
          out.add_entry(space.index(ti, m), space.index(int(si), m), val);
      }
    }
  }
  out.finalize();
  return out;
}

namespace {

SparseMat from_columns(const std::vector<RatVec>& cols, int rows) {
  SparseMat m(rows, int(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (int r = 0; r < rows; ++r)
      if (sgn(cols[j][r]) != 0) m.add_entry(r, int(j), cols[j][r]);
  m.finalize();
  return m;
}

// Tries each certificate prime in turn; on success fills the three
// certificate flags and returns true. A prime is rejected if any reduction
// fails or any rank falls short (which an unlucky prime can cause).
bool try_certificates(const SparseMat& box, const SparseMat& b1, const SparseMat& kmat,
                      const SparseMat& b2, int expected_rank, ExecMode mode, HodgeBlock& blk) {
  const int dim = box.rows;
  for (PScalar p : kCertPrimes) {
    PSparseMat boxp, b1p, kp, b2p;
    if (!reduce_mod(box, p, boxp) || !reduce_mod(b1, p, b1p) || !reduce_mod(kmat, p, kp) ||
        !reduce_mod(b2, p, b2p))
      continue;
    if (p_rank(boxp, p, mode) != expected_rank) continue;
    if (p_rank(p_mul(boxp, boxp, p, mode), p, mode) != expected_rank) continue;
    if (b1.cols > 0 && p_rank(p_mul(boxp, b1p, p, mode), p, mode) != b1.cols) continue;
    if (p_rank(p_hcat(p_hcat(b1p, kp), b2p), p, mode) != dim) continue;
    blk.certified = true;
    blk.prime = p;
    blk.box_kernel_stable = true;
    blk.box_injective_on_im_dstar = true;
    blk.sum_is_direct = true;
    return true;
  }
  return false;
}

}  // namespace

std::vector<std::pair<Rational, int>> HodgeReport::homogeneity_histogram() const {
  std::vector<std::pair<Rational, int>> h;
  for (const auto& b : blocks)
    if (b.dim_ker_box > 0) h.push_back({b.homogeneity, b.dim_ker_box});
  return h;
}

HodgeReport hodge_decomposition(const GradedLieAlgebra& alg, const Representation& rep, int k,
                                ExecMode mode) {
  const int n = alg.dim_minus();
  if (k < 0 || k > n) throw std::invalid_argument("hodge degree out of range");

  HodgeReport rep_out;
  rep_out.degree = k;
  CochainSpace space = cochain_space(alg, rep, k);
  rep_out.dim_C = space.dim();

  LinearMap d_k = coboundary(alg, rep, k);  // may have empty codomain at k = n
  LinearMap dstar_k = k >= 1 ? codifferential(alg, rep, k)
                             : LinearMap{space, cochain_space(alg, rep, -1), SparseMat(0, space.dim())};
  LinearMap d_km1 = k >= 1 ? coboundary(alg, rep, k - 1)
                           : LinearMap{cochain_space(alg, rep, -1), space, SparseMat(space.dim(), 0)};
  LinearMap dstar_kp1 = k < n ? codifferential(alg, rep, k + 1)
                              : LinearMap{cochain_space(alg, rep, n + 1), space, SparseMat(space.dim(), 0)};

  // Sanity guard: the extracted homogeneity blocks must jointly account for
  // every entry of each operator, otherwise a map failed to preserve the
  // E-weight and the block bookkeeping would silently drop entries.
  size_t seen_dk = 0, seen_dstar = 0, seen_dkm1 = 0, seen_dstar_kp1 = 0;

  for (const Rational& h : space.homogeneities()) {
    std::vector<int> cols = space.indices_of_homogeneity(h);
    std::vector<int> rows_up = d_k.codomain.indices_of_homogeneity(h);
    std::vector<int> rows_down = dstar_k.codomain.indices_of_homogeneity(h);
    std::vector<int> cols_down = d_km1.domain.indices_of_homogeneity(h);
    std::vector<int> cols_up = dstar_kp1.domain.indices_of_homogeneity(h);

    SparseMat dk_h = submatrix(d_k.matrix, rows_up, cols);
    SparseMat dstar_h = submatrix(dstar_k.matrix, rows_down, cols);
    SparseMat dkm1_h = submatrix(d_km1.matrix, cols, cols_down);
    SparseMat dstar_kp1_h = submatrix(dstar_kp1.matrix, cols, cols_up);
    seen_dk += dk_h.nnz();
    seen_dstar += dstar_h.nnz();
    seen_dkm1 += dkm1_h.nnz();
    seen_dstar_kp1 += dstar_kp1_h.nnz();

    HodgeBlock blk;
    blk.homogeneity = h;
    blk.block_dim = int(cols.size());

    std::vector<RatVec> kernel = sparse_kernel(SparseMat::vstack(dk_h, dstar_h), mode);
    blk.dim_ker_box = int(kernel.size());
    std::vector<RatVec> im_dstar = column_space_basis(dstar_kp1_h, mode);
    std::vector<RatVec> im_d = column_space_basis(dkm1_h, mode);
    blk.dim_im_dstar = int(im_dstar.size());
    blk.dim_im_d = int(im_d.size());

    if (blk.dim_im_dstar + blk.dim_ker_box + blk.dim_im_d != blk.block_dim)
      throw std::logic_error("hodge decomposition dimensions do not sum within a homogeneity block");

    SparseMat box_h = sadd(smul(dkm1_h, dstar_h, mode), smul(dstar_kp1_h, dk_h, mode));
    SparseMat b1 = from_columns(im_dstar, blk.block_dim);
    SparseMat km = from_columns(kernel, blk.block_dim);
    SparseMat b2 = from_columns(im_d, blk.block_dim);
    int expected_rank = blk.block_dim - blk.dim_ker_box;

    if (!try_certificates(box_h, b1, km, b2, expected_rank, mode, blk)) {
      // Exact fallback; a genuine violation of ker box = ker d n ker d* or of
      // the direct sum is reported as a hard failure.
      if (sparse_rank(box_h, mode) != expected_rank)
        throw std::logic_error("ker box exceeds ker d n ker d*: Hodge identification fails");
      if (sparse_rank(smul(box_h, box_h, mode), mode) != expected_rank)
        throw std::logic_error("box has a nilpotent part at eigenvalue zero");
      if (b1.cols > 0 && sparse_rank(smul(box_h, b1, mode), mode) != b1.cols)
        throw std::logic_error("box is not injective on im d*");
      std::vector<RatVec> joined = im_dstar;
      joined.insert(joined.end(), kernel.begin(), kernel.end());
      joined.insert(joined.end(), im_d.begin(), im_d.end());
      if (sparse_rank(from_columns(joined, blk.block_dim), mode) != blk.block_dim)
        throw std::logic_error("hodge components are not independent");
      blk.certified = false;
      blk.prime = 0;
      blk.box_kernel_stable = true;
      blk.box_injective_on_im_dstar = true;
      blk.sum_is_direct = true;
    }

    for (const auto& v : kernel) {
      HarmonicVector hv;
      hv.coords.assign(space.dim(), Rational(0));
      for (size_t i = 0; i < cols.size(); ++i) hv.coords[cols[i]] = v[i];
      hv.homogeneity = h;
      rep_out.harmonic.push_back(std::move(hv));
    }

    rep_out.dim_im_dstar += blk.dim_im_dstar;
    rep_out.dim_ker_box += blk.dim_ker_box;
    rep_out.dim_im_d += blk.dim_im_d;
    rep_out.blocks.push_back(std::move(blk));
  }

  if (seen_dk != d_k.matrix.nnz() || seen_dstar != dstar_k.matrix.nnz() ||
      seen_dkm1 != d_km1.matrix.nnz() || seen_dstar_kp1 != dstar_kp1.matrix.nnz())
    throw std::logic_error("an operator entry escaped its homogeneity block");
  if (rep_out.dim_im_dstar + rep_out.dim_ker_box + rep_out.dim_im_d != rep_out.dim_C)
    throw std::logic_error("hodge decomposition dimensions do not sum");
  rep_out.dim_H = rep_out.dim_ker_box;
  return rep_out;
}

std::vector<HarmonicVector> harmonic_basis(const GradedLieAlgebra& alg, const Representation& rep,
                                           int k, ExecMode mode) {
  return hodge_decomposition(alg, rep, k, mode).harmonic;
}

int count_irreducibles(const GradedLieAlgebra& alg, const Representation& rep, int k,
                       const std::vector<HarmonicVector>& harmonic, ExecMode mode) {
  if (harmonic.empty()) return 0;
  auto ops = raising_operators(alg);
  const int d = int(harmonic.size());
  const int dim_c = int(harmonic[0].coords.size());

  SparseMat stacked(0, 2 * d);
  for (const auto& op : ops) {
    SparseMat re = g0_cochain_action(alg, rep, k, op.re);
    SparseMat im = g0_cochain_action(alg, rep, k, op.im);
    std::vector<RatVec> u(d), w(d);
    for (int j = 0; j < d; ++j) {
      u[j] = s_apply(re, harmonic[j].coords);
      w[j] = s_apply(im, harmonic[j].coords);
    }
    // Complex columns u + i w against unknowns a + i b: realified block
    // [[U, -W], [W, U]].
    SparseMat blockm(2 * dim_c, 2 * d);
    for (int j = 0; j < d; ++j)
      for (int r = 0; r < dim_c; ++r) {
        if (sgn(u[j][r]) != 0) {
          blockm.add_entry(r, j, u[j][r]);
          blockm.add_entry(dim_c + r, d + j, u[j][r]);
        }
        if (sgn(w[j][r]) != 0) {
          blockm.add_entry(r, d + j, Rational(-w[j][r]));
          blockm.add_entry(dim_c + r, j, w[j][r]);
        }
      }
    blockm.finalize();
    stacked = SparseMat::vstack(stacked, blockm);
  }
  int real_nullity = 2 * d - sparse_rank(stacked, mode);
  if (real_nullity % 2 != 0) throw std::logic_error("realified joint kernel has odd dimension");
  return real_nullity / 2;
}

}  // namespace tractor
