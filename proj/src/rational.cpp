#include "tractor/rational.hpp"

#include <cassert>
#include <stdexcept>

namespace tractor {

bool rat_is_zero(const Rational& q) { return sgn(q) == 0; }

int rat_sign(const Rational& q) { return sgn(q); }

std::string rat_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rat_from_string(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

double rat_to_double(const Rational& q) { return q.get_d(); }

void make_primitive(RatVec& v) {
  mpz_class den(1);
  for (const auto& q : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
  mpz_class g(0);
  for (const auto& q : v) {
    mpz_class num = q.get_num() * (den / q.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  if (g == 0) return;
  int lead = 0;
  for (const auto& q : v) {
    if (sgn(q) != 0) {
      lead = sgn(q);
      break;
    }
  }
  Rational scale(den, lead < 0 ? -g : g);
  scale.canonicalize();
  for (auto& q : v) q *= scale;
}

bool vec_is_zero(const RatVec& v) {
  for (const auto& q : v)
    if (sgn(q) != 0) return false;
  return true;
}

RatVec vec_add(const RatVec& a, const RatVec& b) {
  assert(a.size() == b.size());
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVec vec_sub(const RatVec& a, const RatVec& b) {
  assert(a.size() == b.size());
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVec vec_scale(const Rational& c, const RatVec& a) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

Rational vec_dot(const RatVec& a, const RatVec& b) {
  assert(a.size() == b.size());
  Rational s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace tractor
