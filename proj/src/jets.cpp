#include "tractor/jets.hpp"

#include <cmath>

namespace tractor {

Jet3 jet_pow(const Jet3& u, double a) {
  if (u.v <= 0.0) throw std::domain_error("jet power of a nonpositive base");
  double p = std::pow(u.v, a);
  double c1 = a * p / u.v;
  double c2 = a * (a - 1.0) * p / (u.v * u.v);
  double c3 = a * (a - 1.0) * (a - 2.0) * p / (u.v * u.v * u.v);
  return jet_compose(u, p, c1, c2, c3);
}

Jet3 eval_monomials(int n, const std::vector<Monomial>& terms, const VecD& x) {
  Jet3 out(n, 0.0);
  for (const auto& term : terms) {
    if (int(term.exps.size()) != n) throw std::invalid_argument("monomial arity mismatch");
    Jet3 prod = jet_constant<3>(n, term.coef);
    for (int i = 0; i < n; ++i)
      for (int e = 0; e < term.exps[i]; ++e) prod = prod * jet_coordinate<3>(n, i, x[i]);
    out = out + prod;
  }
  return out;
}

std::vector<Monomial> monomials_padded(
    int n, const std::vector<std::pair<double, std::vector<int>>>& raw) {
  std::vector<Monomial> out;
  out.reserve(raw.size());
  for (const auto& [coef, exps] : raw) {
    Monomial m{coef, std::vector<int>(n, 0)};
    for (std::size_t i = 0; i < exps.size() && i < std::size_t(n); ++i) m.exps[i] = exps[i];
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace tractor
