#include "pspair/ps_membership.hpp"

#include <mpfr.h>

#include <cmath>
#include <limits>

namespace pspair {

PsExponent::PsExponent(double c) : c_(c) {
  if (!(c > 1.0 && c < 2.0))
    throw std::invalid_argument("PsExponent: c must lie in (1,2), got " +
                                std::to_string(c));
  gamma_ = dd_div(1.0, c);
  // exact dyadic decomposition of the binary64 value
  double v = c;
  int p = 0;
  while (v != std::floor(v)) {
    v *= 2.0;
    ++p;
  }
  auto num = static_cast<std::uint64_t>(v);
  while (p > 0 && num % 2 == 0) {
    num /= 2;
    --p;
  }
  num_ = num;
  pow2_ = p;
}

namespace detail {
namespace {

constexpr std::uint64_t kNoPow = std::numeric_limits<std::uint64_t>::max();

// b^e, or kNoPow on 64-bit overflow.
std::uint64_t checked_pow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e > 0) {
    if (e & 1) {
      if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b)
        return kNoPow;
      r *= b;
    }
    e >>= 1;
    if (e > 0) {
      if (b > 0xFFFFFFFFull) return kNoPow;
      b *= b;
    }
  }
  return r;
}

// Integer k-th root: max t with t^k <= m.
std::uint64_t iroot(std::uint64_t m, unsigned k) {
  if (k == 1) return m;
  auto t = static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<double>(m), 1.0 / k)));
  while (t > 0 && checked_pow(t, k) > m) --t;
  while (checked_pow(t + 1, k) <= m) ++t;
  return t;
}

// m^(num/2^pow2) is an integer iff m is a perfect num-th power (num odd);
// the value is then t^(2^pow2).  Only feasible when num is small.
bool exact_power_value(std::uint64_t m, std::uint64_t num, int pow2,
                       std::uint64_t* out) {
  if (m == 1) {
    *out = 1;
    return true;
  }
  if (num > 63) return false;  // m < 2^64 cannot be t^num with t >= 2
  std::uint64_t t = iroot(m, static_cast<unsigned>(num));
  if (checked_pow(t, num) != m) return false;
  std::uint64_t v = t;
  for (int i = 0; i < pow2; ++i) {
    if (v > 0xFFFFFFFFull) return false;
    v *= v;
  }
  *out = v;
  return true;
}

// MPFR enclosure of base^gamma with gamma = 1/c evaluated at prec bits.
bool mpfr_floor_decide(std::uint64_t base, double c, int prec,
                       std::uint64_t* out) {
  mpfr_t cc, glo, ghi, ylo, yhi, flo, fhi;
  mpfr_inits2(prec, cc, glo, ghi, ylo, yhi, flo, fhi, (mpfr_ptr) nullptr);
  mpfr_set_d(cc, c, MPFR_RNDN);  // exact: binary64 fits
  mpfr_ui_div(glo, 1, cc, MPFR_RNDD);
  mpfr_ui_div(ghi, 1, cc, MPFR_RNDU);
  mpfr_set_ui(ylo, static_cast<unsigned long>(base), MPFR_RNDN);
  mpfr_set_ui(yhi, static_cast<unsigned long>(base), MPFR_RNDN);
  // base >= 1 so base^gamma is nondecreasing in gamma
  mpfr_pow(ylo, ylo, glo, MPFR_RNDD);
  mpfr_pow(yhi, yhi, ghi, MPFR_RNDU);
  mpfr_floor(flo, ylo);
  mpfr_floor(fhi, yhi);
  bool ok = mpfr_cmp(flo, fhi) == 0;
  std::uint64_t result = 0;
  if (ok) result = mpfr_get_ui(flo, MPFR_RNDN);
  mpfr_clears(cc, glo, ghi, ylo, yhi, flo, fhi, (mpfr_ptr) nullptr);
  *out = result;
  return ok;
}

// Same with exponent c itself (for nth_element).
bool mpfr_floor_decide_c(std::uint64_t base, double c, int prec,
                         std::uint64_t* out) {
  mpfr_t cc, y;
  mpfr_inits2(prec, cc, y, (mpfr_ptr) nullptr);
  mpfr_set_d(cc, c, MPFR_RNDN);
  mpfr_set_ui(y, static_cast<unsigned long>(base), MPFR_RNDN);
  mpfr_t ylo, yhi, flo, fhi;
  mpfr_inits2(prec, ylo, yhi, flo, fhi, (mpfr_ptr) nullptr);
  mpfr_pow(ylo, y, cc, MPFR_RNDD);
  mpfr_pow(yhi, y, cc, MPFR_RNDU);
  mpfr_floor(flo, ylo);
  mpfr_floor(fhi, yhi);
  bool ok = mpfr_cmp(flo, fhi) == 0;
  std::uint64_t result = 0;
  if (ok) result = mpfr_get_ui(flo, MPFR_RNDN);
  mpfr_clears(cc, y, ylo, yhi, flo, fhi, (mpfr_ptr) nullptr);
  *out = result;
  return ok;
}

// Floor of a dd value with error radius r; false if ambiguous.
bool dd_floor_decide(DD y, double r, std::uint64_t* out) {
  double f0 = std::floor(y.hi);
  DD rem = dd_sub(y, DD(f0));
  if (rem.to_double() < 0.0) {
    f0 -= 1.0;
    rem = dd_add(rem, DD(1.0));
  } else if (rem.to_double() >= 1.0) {
    f0 += 1.0;
    rem = dd_sub(rem, DD(1.0));
  }
  double d = rem.to_double();
  if (d <= r || 1.0 - d <= r) return false;
  if (f0 < 0.0) return false;
  *out = static_cast<std::uint64_t>(f0);
  return true;
}

}  // namespace

FloorResult floor_pow_certified(std::uint64_t m, const PsExponent& e,
                                int max_bits, bool allow_exact_detection) {
  if (m == 0) throw std::invalid_argument("floor_pow_certified: m >= 1");
  if (allow_exact_detection) {
    std::uint64_t v;
    if (exact_power_value(m, e.numerator(), e.pow2(), &v))
      return {v, true};
  }
  DD y = dd_pow(DD(static_cast<double>(m)), e.gamma());
  double r = std::max(std::abs(y.to_double()) * DD_POW_REL_ERR, 1e-30);
  std::uint64_t f;
  if (dd_floor_decide(y, r, &f)) return {f, false};
  for (int prec = 160; prec <= max_bits; prec += 96) {
    if (mpfr_floor_decide(m, e.c(), prec, &f)) return {f, false};
  }
  throw UndecidableError(m, e.c());
}

FloorResult floor_npow_certified(std::uint64_t n, const PsExponent& e,
                                 int max_bits, bool allow_exact_detection) {
  if (n == 0) throw std::invalid_argument("floor_npow_certified: n >= 1");
  if (allow_exact_detection) {
    // n^(num/2^pow2) integral iff n is a perfect 2^pow2-th power
    std::uint64_t s = n;
    bool pow_ok = true;
    for (int i = 0; i < e.pow2() && pow_ok; ++i) {
      std::uint64_t t = iroot(s, 2);
      if (t * t == s)
        s = t;
      else
        pow_ok = false;
    }
    if (pow_ok) {
      std::uint64_t v = checked_pow(s, e.numerator());
      if (v == kNoPow) throw std::overflow_error("nth_element overflow");
      return {v, true};
    }
  }
  DD y = dd_pow(DD(static_cast<double>(n)), DD(e.c()));
  if (y.hi > 9.0e18) throw std::overflow_error("nth_element overflow");
  double r = std::max(std::abs(y.to_double()) * DD_POW_REL_ERR, 1e-30);
  std::uint64_t f;
  if (dd_floor_decide(y, r, &f)) return {f, false};
  for (int prec = 160; prec <= max_bits; prec += 96) {
    if (mpfr_floor_decide_c(n, e.c(), prec, &f)) return {f, false};
  }
  throw UndecidableError(n, e.c());
}

}  // namespace detail

namespace {
constexpr int kMaxBits = 256;

// ceil(base^gamma) from a certified floor
std::uint64_t ceil_pow(std::uint64_t m, const PsExponent& e) {
  auto fr = detail::floor_pow_certified(m, e, kMaxBits, true);
  return fr.floor_val + (fr.exact ? 0 : 1);
}
}  // namespace

int indicator(std::uint64_t m, const PsExponent& e) {
  if (m == 0) throw std::invalid_argument("indicator: m >= 1");
  // floor(-a) = -ceil(a), so the indicator equals ceil((m+1)^g) - ceil(m^g)
  return static_cast<int>(ceil_pow(m + 1, e) - ceil_pow(m, e));
}

bool is_member(std::uint64_t m, const PsExponent& e) {
  return indicator(m, e) == 1;
}

std::uint64_t nth_element(std::uint64_t n, const PsExponent& e) {
  if (n == 0) throw std::invalid_argument("nth_element: n >= 1");
  return detail::floor_npow_certified(n, e, kMaxBits, true).floor_val;
}

std::uint64_t count_members_up_to(std::uint64_t x, const PsExponent& e) {
  if (x == 0) throw std::invalid_argument("count_members_up_to: x >= 1");
  // nth_element is strictly increasing for c > 1; binary search
  std::uint64_t lo = 1, hi = 2;
  while (nth_element(hi, e) <= x) {
    lo = hi;
    if (hi > (std::uint64_t(1) << 62)) throw std::overflow_error("count range");
    hi *= 2;
  }
  while (lo + 1 < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (nth_element(mid, e) <= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace pspair
