#include "tractor/representation.hpp"

#include <algorithm>
#include <stdexcept>

namespace tractor {

RatVec Representation::act_elem(const RatVec& coeffs, const RatVec& v) const {
  RatVec out(module_dim, Rational(0));
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (sgn(coeffs[i]) == 0) continue;
    RatVec w = action[i].apply(v);
    for (int r = 0; r < module_dim; ++r) out[r] += coeffs[i] * w[r];
  }
  return out;
}

std::vector<Rational> Representation::distinct_grades_sorted() const {
  std::vector<Rational> g = module_grade;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::vector<int> Representation::indices_of_module_grade(const Rational& g) const {
  std::vector<int> idx;
  for (int i = 0; i < module_dim; ++i)
    if (module_grade[i] == g) idx.push_back(i);
  return idx;
}

Representation adjoint_rep(const GradedLieAlgebra& alg) {
  Representation rep;
  rep.alg = &alg;
  rep.label = "adjoint";
  rep.module_dim = alg.dim();
  rep.action.assign(alg.dim(), RatMatrix(alg.dim(), alg.dim()));
  for (int i = 0; i < alg.dim(); ++i)
    for (int j = 0; j < alg.dim(); ++j)
      for (const auto& [k, c] : alg.cijk[i][j]) rep.action[i].at(k, j) = c;
  rep.module_grade.reserve(alg.dim());
  for (int g : alg.grade) rep.module_grade.push_back(Rational(g));
  return rep;
}

Representation standard_rep(const GradedLieAlgebra& alg) {
  Representation rep;
  rep.alg = &alg;
  rep.label = "standard";
  const int d = alg.defining_dim;
  rep.module_dim = d;
  rep.action = alg.basis;
  const RatMatrix& e = alg.basis[alg.grading_element_index];
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (r != c && sgn(e.at(r, c)) != 0)
        throw std::invalid_argument("standard module needs a diagonal grading action");
  rep.module_grade.reserve(d);
  for (int r = 0; r < d; ++r) rep.module_grade.push_back(e.at(r, r));
  return rep;
}

Representation density_rep(const GradedLieAlgebra& alg, const Rational& w) {
  Representation rep;
  rep.alg = &alg;
  rep.label = "density(" + rat_to_string(w) + ")";
  rep.module_dim = 1;
  rep.action.assign(alg.dim(), RatMatrix(1, 1));
  rep.action[alg.grading_element_index].at(0, 0) = -w;
  rep.module_grade = {-w};
  rep.p_only = true;
  rep.completely_reducible = true;
  rep.density_weight = w;
  return rep;
}

Representation tangent_rep(const GradedLieAlgebra& alg) {
  Representation rep;
  rep.alg = &alg;
  rep.label = "tangent";
  const int nm = alg.dim_minus();
  rep.module_dim = nm;
  rep.action.assign(alg.dim(), RatMatrix(nm, nm));
  for (int i = 0; i < alg.dim(); ++i) {
    if (alg.grade[i] != 0) continue;
    for (int j = 0; j < nm; ++j)
      for (const auto& [k, c] : alg.cijk[i][j])
        if (alg.grade[k] == -1) rep.action[i].at(k, j) = c;
  }
  rep.module_grade.assign(nm, Rational(-1));
  rep.p_only = true;
  rep.completely_reducible = true;
  return rep;
}

void validate_representation(const Representation& rep) {
  const GradedLieAlgebra& alg = *rep.alg;
  const int dim = alg.dim();
  const int md = rep.module_dim;
  if (int(rep.action.size()) != dim) throw std::runtime_error("one action matrix per basis element required");
  for (const auto& m : rep.action)
    if (m.rows() != md || m.cols() != md) throw std::runtime_error("action matrix has wrong shape");
  if (int(rep.module_grade.size()) != md) throw std::runtime_error("module grade list has wrong size");

  const RatMatrix& e = rep.action[alg.grading_element_index];
  for (int r = 0; r < md; ++r)
    for (int c = 0; c < md; ++c) {
      if (r == c) {
        if (e.at(r, c) != rep.module_grade[r]) throw std::runtime_error("grading eigenvalues disagree");
      } else if (sgn(e.at(r, c)) != 0) {
        throw std::runtime_error("grading action is not diagonal");
      }
    }

  for (int i = 0; i < dim; ++i) {
    if (rep.p_only && alg.grade[i] < 0) continue;
    for (int r = 0; r < md; ++r)
      for (int c = 0; c < md; ++c)
        if (sgn(rep.action[i].at(r, c)) != 0 &&
            rep.module_grade[r] != rep.module_grade[c] + Rational(alg.grade[i]))
          throw std::runtime_error("action matrix breaks the grade shift");
    if (rep.completely_reducible && alg.grade[i] == 1 && !rep.action[i].is_zero())
      throw std::runtime_error("g_1 must act trivially on a completely reducible module");
  }

  for (int i = 0; i < dim; ++i) {
    if (rep.p_only && alg.grade[i] < 0) continue;
    for (int j = 0; j < dim; ++j) {
      if (rep.p_only && alg.grade[j] < 0) continue;
      RatMatrix lhs = rep.action[i] * rep.action[j] - rep.action[j] * rep.action[i];
      RatMatrix rhs(md, md);
      for (const auto& [k, c] : alg.cijk[i][j]) rhs = rhs + rep.action[k].scaled(c);
      if (!(lhs == rhs)) throw std::runtime_error("homomorphism law fails");
    }
  }
}

}  // namespace tractor
