#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pspair/dd.hpp"

namespace pspair {

// Raised when an interval evaluation of m^gamma still straddles an
// integer after escalation to the configured precision ceiling.  Never
// silently resolved: the caller must surface the boundary case.
class UndecidableError : public std::runtime_error {
 public:
  UndecidableError(std::uint64_t m, double c)
      : std::runtime_error("membership undecidable at max precision: m=" +
                           std::to_string(m) + " c=" + std::to_string(c)),
        m(m),
        c(c) {}
  std::uint64_t m;
  double c;
};

// A Piatetski-Shapiro exponent c in (1,2), bound to its exact binary64
// value, with gamma = 1/c kept as a double-double pair.
class PsExponent {
 public:
  explicit PsExponent(double c);

  double c() const { return c_; }
  DD gamma() const { return gamma_; }
  double gamma_double() const { return gamma_.to_double(); }

  // c as an exact dyadic rational num / 2^pow2 in lowest terms.
  std::uint64_t numerator() const { return num_; }
  int pow2() const { return pow2_; }

 private:
  double c_;
  DD gamma_;
  std::uint64_t num_;
  int pow2_;
};

// floor(-m^gamma) - floor(-(m+1)^gamma); 1 iff m is a value of the
// sequence (floor(n^c)).
int indicator(std::uint64_t m, const PsExponent& e);

bool is_member(std::uint64_t m, const PsExponent& e);

// floor(n^c) with certified rounding.
std::uint64_t nth_element(std::uint64_t n, const PsExponent& e);

// max{ n : floor(n^c) <= x }
std::uint64_t count_members_up_to(std::uint64_t x, const PsExponent& e);

namespace detail {

struct FloorResult {
  std::uint64_t floor_val;
  bool exact;  // base^exponent is exactly this integer
};

// Certified floor of m^gamma.  max_bits is the software-precision
// ceiling for escalation; allow_exact_detection enables the dyadic
// perfect-power shortcut that resolves genuine integer values of
// m^gamma (e.g. 8^(2/3) = 4).  Exposed for tests of the error path.
FloorResult floor_pow_certified(std::uint64_t m, const PsExponent& e,
                                int max_bits, bool allow_exact_detection);

// Certified floor of n^c, same knobs.
FloorResult floor_npow_certified(std::uint64_t n, const PsExponent& e,
                                 int max_bits, bool allow_exact_detection);

}  // namespace detail

}  // namespace pspair
