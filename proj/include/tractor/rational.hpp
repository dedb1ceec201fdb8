#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace tractor {

// Exact rational scalar. mpq_class keeps values canonical (reduced fraction,
// positive denominator) as long as they are produced through its arithmetic
// operators; raw mpq_t manipulation must call canonicalize() itself.
using Rational = mpq_class;
using RatVec = std::vector<Rational>;

inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

bool rat_is_zero(const Rational& q);
int rat_sign(const Rational& q);

// Serialized form used everywhere in JSON output: "p" or "p/q", q > 0.
std::string rat_to_string(const Rational& q);
Rational rat_from_string(const std::string& s);

double rat_to_double(const Rational& q);

// v *= common denominator, then / gcd of numerators; first nonzero > 0.
// No-op on the zero vector. Used to freeze kernel vectors in fixtures.
void make_primitive(RatVec& v);

bool vec_is_zero(const RatVec& v);
RatVec vec_add(const RatVec& a, const RatVec& b);
RatVec vec_sub(const RatVec& a, const RatVec& b);
RatVec vec_scale(const Rational& c, const RatVec& a);
Rational vec_dot(const RatVec& a, const RatVec& b);

}  // namespace tractor
