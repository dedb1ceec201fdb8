#pragma once

#include <stdexcept>
#include <vector>

namespace tractor {

using VecD = std::vector<double>;

// Truncated Taylor expansion of a scalar function of n variables at a point,
// carrying exact partial derivatives up to Order. Higher tensors use full
// (symmetrized) storage; n stays small throughout.
template <int Order>
struct Jet {
  static_assert(Order >= 1 && Order <= 3);
  int n = 0;
  double v = 0.0;
  std::vector<double> d1;  // n
  std::vector<double> d2;  // n*n, symmetric (Order >= 2)
  std::vector<double> d3;  // n*n*n, symmetric (Order >= 3)

  Jet() = default;
  explicit Jet(int vars, double value = 0.0) : n(vars), v(value), d1(vars, 0.0) {
    if constexpr (Order >= 2) d2.assign(size_t(vars) * vars, 0.0);
    if constexpr (Order >= 3) d3.assign(size_t(vars) * vars * vars, 0.0);
  }

  double g1(int i) const { return d1[i]; }
  double g2(int i, int j) const { return d2[size_t(i) * n + j]; }
  double g3(int i, int j, int k) const { return d3[(size_t(i) * n + j) * n + k]; }
  double& r1(int i) { return d1[i]; }
  double& r2(int i, int j) { return d2[size_t(i) * n + j]; }
  double& r3(int i, int j, int k) { return d3[(size_t(i) * n + j) * n + k]; }
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;
using Jet3 = Jet<3>;

template <int Order>
Jet<Order> jet_constant(int n, double c) {
  return Jet<Order>(n, c);
}

template <int Order>
Jet<Order> jet_coordinate(int n, int i, double value) {
  Jet<Order> j(n, value);
  j.r1(i) = 1.0;
  return j;
}

template <int Order>
Jet<Order> operator+(const Jet<Order>& a, const Jet<Order>& b) {
  Jet<Order> out = a;
  out.v += b.v;
  for (size_t i = 0; i < out.d1.size(); ++i) out.d1[i] += b.d1[i];
  if constexpr (Order >= 2)
    for (size_t i = 0; i < out.d2.size(); ++i) out.d2[i] += b.d2[i];
  if constexpr (Order >= 3)
    for (size_t i = 0; i < out.d3.size(); ++i) out.d3[i] += b.d3[i];
  return out;
}

template <int Order>
Jet<Order> operator-(const Jet<Order>& a, const Jet<Order>& b) {
  Jet<Order> out = a;
  out.v -= b.v;
  for (size_t i = 0; i < out.d1.size(); ++i) out.d1[i] -= b.d1[i];
  if constexpr (Order >= 2)
    for (size_t i = 0; i < out.d2.size(); ++i) out.d2[i] -= b.d2[i];
  if constexpr (Order >= 3)
    for (size_t i = 0; i < out.d3.size(); ++i) out.d3[i] -= b.d3[i];
  return out;
}

template <int Order>
Jet<Order> operator-(const Jet<Order>& a) {
  Jet<Order> out = a;
  out.v = -out.v;
  for (auto& x : out.d1) x = -x;
  if constexpr (Order >= 2)
    for (auto& x : out.d2) x = -x;
  if constexpr (Order >= 3)
    for (auto& x : out.d3) x = -x;
  return out;
}

template <int Order>
Jet<Order> operator*(const Jet<Order>& a, double s) {
  Jet<Order> out = a;
  out.v *= s;
  for (auto& x : out.d1) x *= s;
  if constexpr (Order >= 2)
    for (auto& x : out.d2) x *= s;
  if constexpr (Order >= 3)
    for (auto& x : out.d3) x *= s;
  return out;
}

template <int Order>
Jet<Order> operator*(double s, const Jet<Order>& a) {
  return a * s;
}

template <int Order>
Jet<Order> operator+(const Jet<Order>& a, double s) {
  Jet<Order> out = a;
  out.v += s;
  return out;
}

template <int Order>
Jet<Order> operator*(const Jet<Order>& a, const Jet<Order>& b) {
  const int n = a.n;
  Jet<Order> out(n, a.v * b.v);
  for (int i = 0; i < n; ++i) out.r1(i) = a.g1(i) * b.v + a.v * b.g1(i);
  if constexpr (Order >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.r2(i, j) = a.g2(i, j) * b.v + a.g1(i) * b.g1(j) + a.g1(j) * b.g1(i) + a.v * b.g2(i, j);
  if constexpr (Order >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out.r3(i, j, k) = a.g3(i, j, k) * b.v + a.g2(i, j) * b.g1(k) + a.g2(i, k) * b.g1(j) +
                            a.g2(j, k) * b.g1(i) + a.g1(i) * b.g2(j, k) + a.g1(j) * b.g2(i, k) +
                            a.g1(k) * b.g2(i, j) + a.v * b.g3(i, j, k);
  return out;
}

// f(u) for a scalar function with derivatives c0..c3 at u.v.
template <int Order>
Jet<Order> jet_compose(const Jet<Order>& u, double c0, double c1, double c2, double c3) {
  const int n = u.n;
  Jet<Order> out(n, c0);
  for (int i = 0; i < n; ++i) out.r1(i) = c1 * u.g1(i);
  if constexpr (Order >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.r2(i, j) = c1 * u.g2(i, j) + c2 * u.g1(i) * u.g1(j);
  if constexpr (Order >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out.r3(i, j, k) = c1 * u.g3(i, j, k) +
                            c2 * (u.g1(i) * u.g2(j, k) + u.g1(j) * u.g2(i, k) +
                                  u.g1(k) * u.g2(i, j)) +
                            c3 * u.g1(i) * u.g1(j) * u.g1(k);
  return out;
}

template <int Order>
Jet<Order> jet_reciprocal(const Jet<Order>& u) {
  if (u.v == 0.0) throw std::domain_error("jet reciprocal at zero");
  double inv = 1.0 / u.v;
  return jet_compose(u, inv, -inv * inv, 2.0 * inv * inv * inv, -6.0 * inv * inv * inv * inv);
}

Jet3 jet_pow(const Jet3& u, double a);

template <int Order>
Jet<Order - 1> jet_derivative(const Jet<Order>& u, int k) {
  static_assert(Order >= 2);
  Jet<Order - 1> out(u.n, u.g1(k));
  for (int i = 0; i < u.n; ++i) out.r1(i) = u.g2(k, i);
  if constexpr (Order - 1 >= 2)
    for (int i = 0; i < u.n; ++i)
      for (int j = 0; j < u.n; ++j) out.r2(i, j) = u.g3(k, i, j);
  return out;
}

template <int To, int From>
Jet<To> jet_truncate(const Jet<From>& u) {
  static_assert(To <= From);
  Jet<To> out(u.n, u.v);
  out.d1 = u.d1;
  if constexpr (To >= 2) out.d2 = u.d2;
  if constexpr (To >= 3) out.d3 = u.d3;
  return out;
}

// Polynomial term c * prod_i x_i^{exps[i]}.
struct Monomial {
  double coef;
  std::vector<int> exps;
};

Jet3 eval_monomials(int n, const std::vector<Monomial>& terms, const VecD& x);

// Exponent lists padded with zeros to n variables.
std::vector<Monomial> monomials_padded(
    int n, const std::vector<std::pair<double, std::vector<int>>>& raw);

}  // namespace tractor
