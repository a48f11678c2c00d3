#pragma once

#include <cmath>
#include <cstdint>

namespace pspair {

// Double-double value: hi + lo with |lo| <= ulp(hi)/2.  Gives roughly
// 106 bits of significand, enough to certify floor decisions for
// m^gamma with m up to 10^12 except at genuine ties.
struct DD {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DD() = default;
  constexpr DD(double h) : hi(h), lo(0.0) {}
  constexpr DD(double h, double l) : hi(h), lo(l) {}

  double to_double() const { return hi + lo; }
};

namespace dd_detail {

inline DD two_sum(double a, double b) {
  double s = a + b;
  double v = s - a;
  double e = (a - (s - v)) + (b - v);
  return {s, e};
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  double e = b - (s - a);
  return {s, e};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  double e = std::fma(a, b, -p);
  return {p, e};
}

}  // namespace dd_detail

inline DD dd_add(DD a, DD b) {
  using namespace dd_detail;
  DD s = two_sum(a.hi, b.hi);
  double e = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, e);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD dd_sub(DD a, DD b) { return dd_add(a, dd_neg(b)); }

inline DD dd_mul(DD a, DD b) {
  using namespace dd_detail;
  DD p = two_prod(a.hi, b.hi);
  double e = p.lo + a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, e);
}

inline DD dd_mul(DD a, double b) {
  using namespace dd_detail;
  DD p = two_prod(a.hi, b);
  double e = p.lo + a.lo * b;
  return quick_two_sum(p.hi, e);
}

inline DD dd_div(DD a, DD b) {
  using namespace dd_detail;
  double q1 = a.hi / b.hi;
  DD r = dd_sub(a, dd_mul(b, q1));
  double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul(b, q2));
  double q3 = r.hi / b.hi;
  DD q = quick_two_sum(q1, q2);
  return dd_add(q, DD(q3));
}

inline DD dd_div(double a, double b) { return dd_div(DD(a), DD(b)); }

// ln 2 to double-double precision.
inline constexpr DD DD_LN2{6.931471805599453094e-01, 2.3190468138462995584e-17};

// exp(a) for |a| within the double range; standard reduce-square scheme.
inline DD dd_exp(DD a) {
  if (a.hi > 709.0) return {HUGE_VAL, 0.0};
  if (a.hi < -709.0) return {0.0, 0.0};
  double m = std::round(a.hi / DD_LN2.hi);
  DD r = dd_sub(a, dd_mul(DD_LN2, m));
  // scale by 2^-9, Taylor, then square 9 times
  r = dd_mul(r, 1.0 / 512.0);
  DD term = r;
  DD sum = dd_add(DD(1.0), r);
  double fact = 1.0;
  for (int i = 2; i <= 16; ++i) {
    term = dd_mul(term, r);
    fact *= i;
    DD t = dd_mul(term, 1.0 / fact);
    sum = dd_add(sum, t);
    if (std::abs(t.hi) < 1e-35 * std::abs(sum.hi)) break;
  }
  for (int i = 0; i < 9; ++i) sum = dd_mul(sum, sum);
  double scale = std::ldexp(1.0, static_cast<int>(m));
  return dd_mul(sum, scale);
}

// log(a) for a > 0 via one Newton step off the double-precision seed.
inline DD dd_log(DD a) {
  double y0 = std::log(a.hi);
  DD y{y0, 0.0};
  for (int i = 0; i < 2; ++i) {
    // y <- y + a*exp(-y) - 1
    DD e = dd_exp(dd_neg(y));
    DD corr = dd_sub(dd_mul(a, e), DD(1.0));
    y = dd_add(y, corr);
  }
  return y;
}

// a^b for a > 0.
inline DD dd_pow(DD a, DD b) { return dd_exp(dd_mul(dd_log(a), b)); }

// Conservative relative error radius of dd_pow for arguments in the
// ranges this project uses (a <= 2^50, |b| <= 2).  The intrinsic dd
// rounding is ~2^-104 per operation; 1e-28 leaves three orders of
// margin over the observed worst case.
inline constexpr double DD_POW_REL_ERR = 1e-28;

}  // namespace pspair
