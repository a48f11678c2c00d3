#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace pspair {

// A real value with a certified absolute error bound.
struct SeriesValue {
  double value = 0.0;
  double abs_error = 0.0;
};

// A finite set of non-negative integer offsets (sorted, distinct).
class OffsetSet {
 public:
  OffsetSet() = default;
  explicit OffsetSet(std::vector<std::uint64_t> offsets);

  const std::vector<std::uint64_t>& offsets() const { return offsets_; }
  std::size_t size() const { return offsets_.size(); }
  bool empty() const { return offsets_.empty(); }
  std::uint64_t max_pairwise_difference() const;

 private:
  std::vector<std::uint64_t> offsets_;
};

// Constants computed at startup; hard-coded references live in tests only.
struct Constants {
  double euler_mascheroni;   // C0
  double a_constant;         // A = 2 - C0 - log(2 pi)
  double twin_prime;         // C2
};

const Constants& constants();

// Shared read-only prime cache for Euler products.  Grows on demand;
// thread-safe after ensure() returns.
class PrimeCache {
 public:
  static PrimeCache& instance();
  void ensure(std::uint64_t limit);
  // Valid while no concurrent ensure() is in flight beyond 'limit'.
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  const std::vector<double>& inv() const { return inv_; }      // 1/p
  const std::vector<double>& qinv() const { return qinv_; }    // 1/(1-1/p)
  std::uint64_t limit() const { return limit_; }

 private:
  std::vector<std::uint32_t> primes_;
  std::vector<double> inv_, qinv_;
  std::uint64_t limit_ = 0;
};

inline constexpr std::uint64_t kDefaultPrimeCutoff = 1000000;

// Truncated Hardy-Littlewood Euler product over p <= cutoff with a
// certified tail bound.  Returns exactly 0 when some prime factor
// vanishes (the offsets cover all residues mod p).
SeriesValue singular_series(const OffsetSet& H,
                            std::uint64_t cutoff = kDefaultPrimeCutoff);

// Fast path for H = {0, h}: 0 for odd h, else 2*C2 * prod over odd
// prime divisors of h of (p-1)/(p-2).
SeriesValue singular_series_pair(std::uint64_t h);

// Inclusion-exclusion transform over subsets of H.
SeriesValue modified_singular_series(const OffsetSet& H,
                                     std::uint64_t cutoff = kDefaultPrimeCutoff);

// Same product restricted to primes not dividing q.
SeriesValue singular_series_away_from_q(const OffsetSet& H, std::uint64_t q,
                                        std::uint64_t cutoff = kDefaultPrimeCutoff);

// Modified series of a pair via the fast path: S0({0,h}) = S({0,h}) - 1.
double modified_pair(std::uint64_t h);

// sum_{1 <= t <= h-1} S0({0,t})
double avg_s0_prefix(std::uint64_t h);

// sum_{1 <= t1 < t2 <= h-1} S0({t1,t2}), computed in O(h) via
// translation invariance.
double avg_s0_pairs(std::uint64_t h);

// Riemann zeta at real s > 1 by Euler-Maclaurin with certified remainder.
SeriesValue zeta_real(double s);

// F(s) = zeta(s) zeta(s+1) / zeta(2s+2) * prod_p (1 - 1/(p-1)^2 +
// 2p/((p-1)^2 (p^(s+1)+1))), the Dirichlet series of S({0,h}).
SeriesValue dirichlet_F(double s, std::uint64_t cutoff = 10000000);

// CSV table `h,s,s0` of pair values for even h <= h_max.
void write_pair_table_csv(std::uint64_t h_max, std::ostream& os);

}  // namespace pspair
