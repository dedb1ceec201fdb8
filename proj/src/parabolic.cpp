#include "tractor/parabolic.hpp"

#include <stdexcept>

namespace tractor {

namespace {

RatVec embed_block(int dim, int offset, const RatVec& block) {
  RatVec full(dim, Rational(0));
  for (size_t i = 0; i < block.size(); ++i) full[offset + int(i)] = block[i];
  return full;
}

RatVec extract_block(const RatVec& full, int offset, int len) {
  RatVec block(len, Rational(0));
  for (int i = 0; i < len; ++i) block[i] = full[offset + i];
  return block;
}

void require_size(const RatVec& v, int len, const char* what) {
  if (int(v.size()) != len) throw std::invalid_argument(std::string(what) + ": wrong length");
}

void require_support_outside_zero(const RatVec& full, int offset, int len, const char* what) {
  for (size_t i = 0; i < full.size(); ++i) {
    bool inside = int(i) >= offset && int(i) < offset + len;
    if (!inside && !rat_is_zero(full[i]))
      throw std::invalid_argument(std::string(what) + ": support outside the expected grade");
  }
}

int pair_count(int n) { return n * (n - 1) / 2; }

int pair_index(int n, int a, int b) {
  // Lexicographic position of {a, b} with a < b among the 2-subsets of n.
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

// Value of a two-cochain (adjoint coordinate layout) on (X_c, X_d) with
// antisymmetric extension.
RatVec two_cochain_value(const GradedLieAlgebra& alg, const RatVec& coords, int c, int d) {
  const int dim = alg.dim();
  const int n = alg.dim_minus();
  if (c == d) return RatVec(dim, Rational(0));
  bool flip = c > d;
  if (flip) std::swap(c, d);
  RatVec v = extract_block(coords, pair_index(n, c, d) * dim, dim);
  if (flip)
    for (auto& x : v) x = -x;
  return v;
}

}  // namespace

RatVec triple_to_full(const GradedLieAlgebra& alg, const AdjointTractorTriple& s) {
  require_size(s.xi, alg.dim_minus(), "xi");
  require_size(s.s0, alg.dim_zero(), "s0");
  require_size(s.s1, alg.dim_plus(), "s1");
  RatVec full(alg.dim(), Rational(0));
  for (int i = 0; i < alg.dim_minus(); ++i) full[i] = s.xi[i];
  for (int i = 0; i < alg.dim_zero(); ++i) full[alg.g0_offset() + i] = s.s0[i];
  for (int i = 0; i < alg.dim_plus(); ++i) full[alg.g1_offset() + i] = s.s1[i];
  return full;
}

AdjointTractorTriple triple_from_full(const GradedLieAlgebra& alg, const RatVec& full) {
  require_size(full, alg.dim(), "adjoint element");
  AdjointTractorTriple s;
  s.xi = extract_block(full, 0, alg.dim_minus());
  s.s0 = extract_block(full, alg.g0_offset(), alg.dim_zero());
  s.s1 = extract_block(full, alg.g1_offset(), alg.dim_plus());
  return s;
}

SplitModuleVector split_module_vector(const Representation& rep, const RatVec& full) {
  require_size(full, rep.module_dim, "module vector");
  SplitModuleVector out;
  out.rep = &rep;
  for (const Rational& g : rep.distinct_grades_sorted()) {
    out.grades.push_back(g);
    RatVec comp;
    for (int idx : rep.indices_of_module_grade(g)) comp.push_back(full[idx]);
    out.components.push_back(std::move(comp));
  }
  return out;
}

RatVec merge_components(const SplitModuleVector& v) {
  validate_split(v);
  RatVec full(v.rep->module_dim, Rational(0));
  for (size_t gi = 0; gi < v.grades.size(); ++gi) {
    auto idx = v.rep->indices_of_module_grade(v.grades[gi]);
    for (size_t i = 0; i < idx.size(); ++i) full[idx[i]] = v.components[gi][i];
  }
  return full;
}

void validate_split(const SplitModuleVector& v) {
  if (v.rep == nullptr) throw std::invalid_argument("split vector has no representation");
  auto grades = v.rep->distinct_grades_sorted();
  if (v.grades != grades) throw std::invalid_argument("split vector grades do not match the module");
  if (v.components.size() != v.grades.size())
    throw std::invalid_argument("split vector component count mismatch");
  int total = 0;
  for (size_t gi = 0; gi < v.grades.size(); ++gi) {
    size_t want = v.rep->indices_of_module_grade(v.grades[gi]).size();
    if (v.components[gi].size() != want)
      throw std::invalid_argument("split vector component has wrong length");
    total += int(want);
  }
  if (total != v.rep->module_dim) throw std::invalid_argument("split vector misses module indices");
}

RhoCochain rho_from_matrix(const GradedLieAlgebra& alg, const RatMatrix& pairing) {
  const int n = alg.dim_minus();
  if (pairing.rows() != n || pairing.cols() != alg.dim_plus())
    throw std::invalid_argument("pairing matrix has wrong shape");
  RhoCochain rho;
  rho.coords.assign(size_t(n) * alg.dim(), Rational(0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < alg.dim_plus(); ++b)
      rho.coords[size_t(a) * alg.dim() + alg.g1_offset() + b] = pairing.at(a, b);
  return rho;
}

RatMatrix rho_to_matrix(const GradedLieAlgebra& alg, const RhoCochain& rho) {
  const int n = alg.dim_minus();
  require_size(rho.coords, n * alg.dim(), "Rho cochain");
  RatMatrix pairing(n, alg.dim_plus());
  for (int a = 0; a < n; ++a) {
    RatVec value = extract_block(rho.coords, a * alg.dim(), alg.dim());
    require_support_outside_zero(value, alg.g1_offset(), alg.dim_plus(), "Rho value");
    for (int b = 0; b < alg.dim_plus(); ++b) pairing.at(a, b) = value[alg.g1_offset() + b];
  }
  return pairing;
}

RatVec rho_apply(const GradedLieAlgebra& alg, const RhoCochain& rho, const RatVec& xi) {
  require_size(xi, alg.dim_minus(), "xi");
  RatMatrix pairing = rho_to_matrix(alg, rho);
  RatVec out(alg.dim_plus(), Rational(0));
  for (int b = 0; b < alg.dim_plus(); ++b)
    for (int a = 0; a < alg.dim_minus(); ++a) out[b] += xi[a] * pairing.at(a, b);
  return out;
}

RatVec deform_curvature_lowest(const GradedLieAlgebra& alg, const RatVec& phi) {
  const int n = alg.dim_minus();
  const int dim = alg.dim();
  require_size(phi, n * dim, "phi");

  Rational value_grade = rat(2);  // sentinel: no nonzero value seen yet
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < dim; ++m) {
      if (rat_is_zero(phi[size_t(a) * dim + m])) continue;
      const Rational& g = alg.grade[m];
      if (g != Rational(0) && g != Rational(1))
        throw std::invalid_argument("phi must take values in g_0 or g_1");
      if (value_grade == rat(2)) value_grade = g;
      if (g != value_grade) throw std::invalid_argument("phi is not homogeneous");
    }

  RatVec out(size_t(pair_count(n)) * dim, Rational(0));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      RatVec xa(dim, Rational(0)), xb(dim, Rational(0));
      xa[a] = 1;
      xb[b] = 1;
      RatVec phi_a = extract_block(phi, a * dim, dim);
      RatVec phi_b = extract_block(phi, b * dim, dim);
      RatVec value = alg.bracket(xa, phi_b);
      RatVec other = alg.bracket(xb, phi_a);
      for (int m = 0; m < dim; ++m) value[m] -= other[m];
      for (int m = 0; m < dim; ++m) out[size_t(pair_index(n, a, b)) * dim + m] = value[m];
    }
  return out;
}

RhoCochain normalize_rho(const GradedLieAlgebra& alg, const RatVec& curvature) {
  const int n = alg.dim_minus();
  const int dim = alg.dim();
  require_size(curvature, pair_count(n) * dim, "curvature");
  for (int p = 0; p < pair_count(n); ++p) {
    RatVec value = extract_block(curvature, p * dim, dim);
    require_support_outside_zero(value, alg.g0_offset(), alg.dim_zero(), "curvature value");
  }

  Representation adj = adjoint_rep(alg);
  auto dstar2 = codifferential(alg, adj, 2);
  auto box1 = laplacian(alg, adj, 1);

  RatVec rhs = s_apply(dstar2.matrix, curvature);
  for (auto& x : rhs) x = -x;

  std::vector<RatVec> basis = column_space_basis(dstar2.matrix, ExecMode::serial);
  const int c1_dim = box1.domain.dim();
  RatMatrix system(c1_dim, int(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) {
    RatVec col = s_apply(box1.matrix, basis[j]);
    for (int r = 0; r < c1_dim; ++r) system.at(r, int(j)) = col[r];
  }
  RatVec x;
  if (!dense_solve(system, rhs, x))
    throw std::invalid_argument("curvature cannot be normalized: -d*R is outside box(im d*)");

  RhoCochain rho;
  rho.coords.assign(size_t(c1_dim), Rational(0));
  for (size_t j = 0; j < basis.size(); ++j)
    for (int r = 0; r < c1_dim; ++r) rho.coords[r] += x[int(j)] * basis[j][r];

  auto d1 = coboundary(alg, adj, 1);
  RatVec corrected = s_apply(d1.matrix, rho.coords);
  for (size_t i = 0; i < corrected.size(); ++i) corrected[i] += curvature[i];
  if (!vec_is_zero(s_apply(dstar2.matrix, corrected)))
    throw std::logic_error("normalized curvature failed the co-closure check");
  return rho;
}

RatMatrix codifferential_as_trace(const GradedLieAlgebra& alg, const RatVec& curvature) {
  if (alg.kind != "conformal")
    throw std::invalid_argument("trace form of d* is implemented for the conformal algebra only");
  const int n = alg.dim_minus();
  const int dim = alg.dim();
  require_size(curvature, pair_count(n) * dim, "curvature");

  RatMatrix out(n, n);
  for (int a = 0; a < n; ++a) {
    RatVec total(dim, Rational(0));
    for (int c = 0; c < n; ++c) {
      RatVec value = two_cochain_value(alg, curvature, c, a);
      RatVec zeta(dim, Rational(0));
      for (int e = 0; e < alg.dim_plus(); ++e) zeta[alg.g1_offset() + e] = alg.dual_g1[c][e];
      RatVec term = alg.bracket(zeta, value);
      for (int m = 0; m < dim; ++m) total[m] += term[m];
    }
    require_support_outside_zero(total, alg.g1_offset(), alg.dim_plus(), "trace value");
    for (int b = 0; b < n; ++b) out.at(a, b) = total[alg.g1_offset() + b];
  }
  return out;
}

SplitModuleVector recalibrate_components(const Representation& rep, const RatVec& upsilon,
                                         const SplitModuleVector& v) {
  validate_split(v);
  if (v.rep != &rep) throw std::invalid_argument("split vector belongs to a different representation");
  const GradedLieAlgebra& alg = *rep.alg;
  require_size(upsilon, alg.dim_plus(), "Upsilon");

  RatVec ups_full = embed_block(alg.dim(), alg.g1_offset(), upsilon);
  RatVec acc = merge_components(v);
  RatVec term = acc;
  const int levels = int(rep.distinct_grades_sorted().size());
  for (int i = 1; i < levels; ++i) {
    term = rep.act_elem(ups_full, term);
    Rational scale = rat(-1, i);
    for (auto& x : term) x *= scale;
    if (vec_is_zero(term)) break;
    for (size_t r = 0; r < acc.size(); ++r) acc[r] += term[r];
  }
  return split_module_vector(rep, acc);
}

RatVec weyl_connection_shift(const Representation& rep, const RatVec& upsilon, const RatVec& xi,
                             const RatVec& v) {
  if (!rep.completely_reducible)
    throw std::invalid_argument("connection shift formula requires a completely reducible representation");
  const GradedLieAlgebra& alg = *rep.alg;
  require_size(upsilon, alg.dim_plus(), "Upsilon");
  require_size(xi, alg.dim_minus(), "xi");
  require_size(v, rep.module_dim, "module vector");

  RatVec ups_full = embed_block(alg.dim(), alg.g1_offset(), upsilon);
  RatVec xi_full = embed_block(alg.dim(), 0, xi);
  RatVec w = alg.bracket(ups_full, xi_full);
  RatVec out = rep.act_elem(w, v);
  for (auto& x : out) x = -x;
  return out;
}

RatVec rho_shift(const GradedLieAlgebra& alg, const RatVec& upsilon, const RatVec& xi,
                 const RatVec& nabla_upsilon_val, const RhoCochain& rho) {
  require_size(upsilon, alg.dim_plus(), "Upsilon");
  require_size(xi, alg.dim_minus(), "xi");
  require_size(nabla_upsilon_val, alg.dim_plus(), "nabla Upsilon");

  RatVec out(alg.dim_plus(), Rational(0));
  if (!rho.coords.empty()) out = rho_apply(alg, rho, xi);
  for (int b = 0; b < alg.dim_plus(); ++b) out[b] += nabla_upsilon_val[b];

  RatVec ups_full = embed_block(alg.dim(), alg.g1_offset(), upsilon);
  RatVec xi_full = embed_block(alg.dim(), 0, xi);
  RatVec dbl = alg.bracket(ups_full, alg.bracket(ups_full, xi_full));
  require_support_outside_zero(dbl, alg.g1_offset(), alg.dim_plus(), "(ad Upsilon)^2 xi");
  for (int b = 0; b < alg.dim_plus(); ++b) out[b] += rat(1, 2) * dbl[alg.g1_offset() + b];
  return out;
}

SplitModuleVector fundamental_derivative_components(const Representation& rep,
                                                    const AdjointTractorTriple& s,
                                                    const SplitModuleVector& v,
                                                    const SplitModuleVector& nabla_v,
                                                    const RatVec& rho_of_xi) {
  validate_split(v);
  validate_split(nabla_v);
  if (v.rep != &rep || nabla_v.rep != &rep)
    throw std::invalid_argument("split vectors belong to a different representation");
  const GradedLieAlgebra& alg = *rep.alg;
  require_size(rho_of_xi, alg.dim_plus(), "Rho(xi)");

  RatVec v_full = merge_components(v);
  RatVec out = merge_components(nabla_v);

  RatVec s0_full = embed_block(alg.dim(), alg.g0_offset(), s.s0);
  RatVec grade1(alg.dim_plus(), Rational(0));
  require_size(s.s1, alg.dim_plus(), "s1");
  for (int b = 0; b < alg.dim_plus(); ++b) grade1[b] = rho_of_xi[b] - s.s1[b];
  RatVec grade1_full = embed_block(alg.dim(), alg.g1_offset(), grade1);

  RatVec t0 = rep.act_elem(s0_full, v_full);
  RatVec t1 = rep.act_elem(grade1_full, v_full);
  for (size_t i = 0; i < out.size(); ++i) out[i] += t1[i] - t0[i];
  return split_module_vector(rep, out);
}

SplitModuleVector tractor_derivative_components(const Representation& rep, const RatVec& xi,
                                                const SplitModuleVector& v,
                                                const SplitModuleVector& nabla_v,
                                                const RatVec& rho_of_xi) {
  if (rep.p_only)
    throw std::invalid_argument("tractor derivative requires g_{-1} action matrices");
  validate_split(v);
  validate_split(nabla_v);
  if (v.rep != &rep || nabla_v.rep != &rep)
    throw std::invalid_argument("split vectors belong to a different representation");
  const GradedLieAlgebra& alg = *rep.alg;
  require_size(xi, alg.dim_minus(), "xi");
  require_size(rho_of_xi, alg.dim_plus(), "Rho(xi)");

  RatVec v_full = merge_components(v);
  RatVec out = merge_components(nabla_v);
  RatVec rho_full = embed_block(alg.dim(), alg.g1_offset(), rho_of_xi);
  RatVec xi_full = embed_block(alg.dim(), 0, xi);
  RatVec t_rho = rep.act_elem(rho_full, v_full);
  RatVec t_xi = rep.act_elem(xi_full, v_full);
  for (size_t i = 0; i < out.size(); ++i) out[i] += t_rho[i] + t_xi[i];
  return split_module_vector(rep, out);
}

RatVec bullet_action(const Representation& rep, const RatVec& adjoint_elem, const RatVec& v) {
  const GradedLieAlgebra& alg = *rep.alg;
  require_size(adjoint_elem, alg.dim(), "adjoint element");
  require_size(v, rep.module_dim, "module vector");
  if (rep.p_only)
    for (int i = 0; i < alg.dim_minus(); ++i)
      if (!rat_is_zero(adjoint_elem[i]))
        throw std::invalid_argument("representation has no g_{-1} action");
  return rep.act_elem(adjoint_elem, v);
}

RatVec algebraic_bracket(const GradedLieAlgebra& alg, const RatVec& s1, const RatVec& s2) {
  require_size(s1, alg.dim(), "s1");
  require_size(s2, alg.dim(), "s2");
  return alg.bracket(s1, s2);
}

}  // namespace tractor
