#include "pspair/singular_series.hpp"

#include "pspair/prime_engine.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>

namespace pspair {

OffsetSet::OffsetSet(std::vector<std::uint64_t> offsets)
    : offsets_(std::move(offsets)) {
  std::sort(offsets_.begin(), offsets_.end());
  if (std::adjacent_find(offsets_.begin(), offsets_.end()) != offsets_.end())
    throw std::invalid_argument("OffsetSet: offsets must be distinct");
}

std::uint64_t OffsetSet::max_pairwise_difference() const {
  return offsets_.empty() ? 0 : offsets_.back() - offsets_.front();
}

// ---- prime cache --------------------------------------------------

PrimeCache& PrimeCache::instance() {
  static PrimeCache cache;
  return cache;
}

void PrimeCache::ensure(std::uint64_t limit) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  if (limit <= limit_) return;
  if (limit > 0xFFFFFFFFull)
    throw std::invalid_argument("PrimeCache: limit exceeds 2^32");
  primes_ = simple_sieve(static_cast<std::uint32_t>(limit));
  inv_.resize(primes_.size());
  qinv_.resize(primes_.size());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    double p = static_cast<double>(primes_[i]);
    inv_[i] = 1.0 / p;
    qinv_[i] = p / (p - 1.0);
  }
  limit_ = limit;
}

// ---- zeta and prime zeta ------------------------------------------

SeriesValue zeta_real(double s) {
  if (!(s > 1.0))
    throw std::domain_error("zeta_real: need s > 1, got " + std::to_string(s));
  const double N = 32.0;
  double sum = 0.0;
  for (int n = 1; n < 32; ++n) sum += std::pow(n, -s);
  sum += std::pow(N, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(N, -s);
  // Euler-Maclaurin correction terms B_{2j}/(2j)! s(s+1)...(s+2j-2) N^{1-s-2j}
  static const double B[8] = {1.0 / 6,  -1.0 / 30,      1.0 / 42, -1.0 / 30,
                              5.0 / 66, -691.0 / 2730, 7.0 / 6,  -3617.0 / 510};
  double fact = 2.0;  // (2j)!
  double rise = s;    // s(s+1)...(s+2j-2)
  double npow = std::pow(N, -(s + 1.0));
  for (int j = 1; j <= 7; ++j) {
    sum += B[j - 1] / fact * rise * npow;
    rise *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= (2 * j + 1) * (2 * j + 2);
    npow /= N * N;
  }
  // The remainder alternates and is bounded by the first omitted term.
  double rem = std::abs(B[7] / fact * rise * npow);
  return {sum, rem + 1e-15 * std::abs(sum)};
}

namespace {

int mobius(unsigned n) {
  int mu = 1;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

// P(m) = sum_p p^{-m} = sum_k mu(k)/k log zeta(k m)
double prime_zeta(double m) {
  double s = 0.0;
  for (unsigned k = 1; k * m <= 64.0; ++k) {
    int mu = mobius(k);
    if (mu == 0) continue;
    s += mu / static_cast<double>(k) * std::log(zeta_real(k * m).value);
  }
  return s;
}

double compute_euler_mascheroni() {
  const int n = 100;
  long double h = 0.0L;
  for (int k = 1; k <= n; ++k) h += 1.0L / k;
  long double nn = static_cast<long double>(n);
  long double g = h - std::log(nn) - 1.0L / (2 * nn) + 1.0L / (12 * nn * nn) -
                  1.0L / (120 * nn * nn * nn * nn) +
                  1.0L / (252 * nn * nn * nn * nn * nn * nn);
  return static_cast<double>(g);
}

// Twin prime constant: finite product over 2 < p <= 1000 of
// p(p-2)/(p-1)^2, with the p > 1000 tail from the logarithmic series
// log((1-2t)/(1-t)^2) = sum_{m>=2} ((2-2^m)/m) t^m at t = 1/p, summed
// over primes via prime zeta values.
double compute_twin_prime() {
  auto& cache = PrimeCache::instance();
  cache.ensure(1000);
  const auto& primes = cache.primes();
  double prod = 1.0;
  for (std::uint32_t p : primes) {
    if (p == 2) continue;
    double pd = p;
    prod *= pd * (pd - 2.0) / ((pd - 1.0) * (pd - 1.0));
  }
  double tail_log = 0.0;
  // The m-th term is bounded by (2^m/m) sum_{p>1000} p^{-m} <
  // 2 (2/1009)^m, below 1e-19 already at m = 7; going further only
  // amplifies the cancellation noise of P(m) - sum_{p<=1000} p^{-m}.
  for (int m = 2; m <= 7; ++m) {
    double small = 0.0;  // sum over p <= 1000 of p^{-m}
    for (std::uint32_t p : primes) small += std::pow(p, -m);
    tail_log += (2.0 - std::pow(2.0, m)) / m * (prime_zeta(m) - small);
  }
  return prod * std::exp(tail_log);
}

}  // namespace

const Constants& constants() {
  static const Constants c = [] {
    Constants k;
    k.euler_mascheroni = compute_euler_mascheroni();
    k.a_constant = 2.0 - k.euler_mascheroni - std::log(2.0 * M_PI);
    k.twin_prime = compute_twin_prime();
    return k;
  }();
  return c;
}

// ---- singular series ----------------------------------------------

namespace {

// Shared Euler product; q = 0 means no excluded modulus.
SeriesValue product_core(const OffsetSet& H, std::uint64_t cutoff,
                         std::uint64_t q) {
  const std::size_t k = H.size();
  if (k <= 1) return {1.0, 0.0};
  if (k > 64)
    throw std::length_error("singular_series: more than 64 offsets");
  const std::uint64_t maxdiff = H.max_pairwise_difference();
  const std::uint64_t need =
      std::max<std::uint64_t>({3, maxdiff, 2 * static_cast<std::uint64_t>(k)});
  if (cutoff < need)
    throw std::invalid_argument(
        "singular_series: cutoff too small for this offset set");
  auto& cache = PrimeCache::instance();
  cache.ensure(cutoff);
  const auto& primes = cache.primes();
  const auto& inv = cache.inv();
  const auto& qinv = cache.qinv();
  const double kd = static_cast<double>(k);

  double value = 1.0;
  std::uint64_t res[64];
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::uint64_t p = primes[i];
    if (p > cutoff) break;
    if (q != 0 && q % p == 0) continue;
    double cnt;
    if (p <= maxdiff || p <= k) {
      // count distinct residues of the offsets mod p
      std::size_t n = 0;
      for (std::uint64_t o : H.offsets()) {
        std::uint64_t r = o % p;
        bool seen = false;
        for (std::size_t j = 0; j < n; ++j)
          if (res[j] == r) {
            seen = true;
            break;
          }
        if (!seen) res[n++] = r;
      }
      if (n == p) return {0.0, 0.0};  // offsets cover every residue class
      cnt = static_cast<double>(n);
    } else {
      // p exceeds every pairwise difference, so residues are distinct
      cnt = kd;
    }
    double f = 1.0 - cnt * inv[i];
    double qk = qinv[i];
    for (std::size_t j = 1; j < k; ++j) qk *= qinv[i];
    value *= f * qk;
  }
  // |log f_p| <= k^2/p^2 once p exceeds both 2k and every pairwise
  // difference; sum_{p > P} p^{-2} < 1/(P log P), doubled for safety.
  double rel_tail = 2.0 * kd * kd /
                    (static_cast<double>(cutoff) *
                     std::log(static_cast<double>(cutoff)));
  return {value, std::abs(value) * rel_tail};
}

// prod over odd primes p | h of (p-1)/(p-2), by trial division.
double pair_divisor_product(std::uint64_t h) {
  double prod = 1.0;
  std::uint64_t m = h;
  while (m % 2 == 0) m /= 2;
  for (std::uint64_t p = 3; p * p <= m; p += 2) {
    if (m % p == 0) {
      prod *= static_cast<double>(p - 1) / static_cast<double>(p - 2);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) prod *= static_cast<double>(m - 1) / static_cast<double>(m - 2);
  return prod;
}

}  // namespace

SeriesValue singular_series(const OffsetSet& H, std::uint64_t cutoff) {
  return product_core(H, cutoff, 0);
}

SeriesValue singular_series_away_from_q(const OffsetSet& H, std::uint64_t q,
                                        std::uint64_t cutoff) {
  if (q == 0)
    throw std::invalid_argument("singular_series_away_from_q: q >= 1");
  return product_core(H, cutoff, q);
}

SeriesValue singular_series_pair(std::uint64_t h) {
  if (h == 0) throw std::invalid_argument("singular_series_pair: h >= 1");
  if (h % 2 != 0) return {0.0, 0.0};
  double v = 2.0 * constants().twin_prime * pair_divisor_product(h);
  return {v, std::abs(v) * 1e-13};
}

SeriesValue modified_singular_series(const OffsetSet& H,
                                     std::uint64_t cutoff) {
  const std::size_t k = H.size();
  if (k > 20)
    throw std::length_error("modified_singular_series: more than 20 offsets");
  const auto& offs = H.offsets();
  double value = 0.0, err = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
    std::vector<std::uint64_t> sub;
    for (std::size_t j = 0; j < k; ++j)
      if (mask & (std::uint64_t(1) << j)) sub.push_back(offs[j]);
    SeriesValue s = singular_series(OffsetSet(std::move(sub)), cutoff);
    int sign = ((k - __builtin_popcountll(mask)) % 2 == 0) ? 1 : -1;
    value += sign * s.value;
    err += s.abs_error;
  }
  return {value, err};
}

double modified_pair(std::uint64_t h) {
  // S0({0,h}) = S({0,h}) - 2 S({0}) + S(empty) = S({0,h}) - 1
  return singular_series_pair(h).value - 1.0;
}

double avg_s0_prefix(std::uint64_t h) {
  double sum = 0.0;
  for (std::uint64_t t = 1; t < h; ++t) sum += modified_pair(t);
  return sum;
}

double avg_s0_pairs(std::uint64_t h) {
  // by translation invariance S0({t1,t2}) depends only on d = t2 - t1
  double sum = 0.0;
  for (std::uint64_t d = 1; d + 1 < h; ++d)
    sum += static_cast<double>(h - 1 - d) * modified_pair(d);
  return sum;
}

SeriesValue dirichlet_F(double s, std::uint64_t cutoff) {
  if (!(s > 1.0))
    throw std::domain_error("dirichlet_F: need s > 1, got " +
                            std::to_string(s));
  auto& cache = PrimeCache::instance();
  cache.ensure(cutoff);
  SeriesValue z1 = zeta_real(s), z2 = zeta_real(s + 1.0),
              z3 = zeta_real(2.0 * s + 2.0);
  double value = z1.value * z2.value / z3.value;
  for (std::uint32_t p : cache.primes()) {
    if (p > cutoff) break;
    double pd = p;
    double denom = (pd - 1.0) * (pd - 1.0);
    double f = 1.0 - 1.0 / denom +
               2.0 * pd / (denom * (std::pow(pd, s + 1.0) + 1.0));
    value *= f;
  }
  // |log f_p| < 2/p^2 for p >= 3, so the tail over p > P is below
  // 2/(P log P); doubled for safety, plus the zeta error budgets.
  double rel = 4.0 / (static_cast<double>(cutoff) *
                      std::log(static_cast<double>(cutoff))) +
               z1.abs_error / z1.value + z2.abs_error / z2.value +
               z3.abs_error / z3.value;
  return {value, std::abs(value) * rel};
}

void write_pair_table_csv(std::uint64_t h_max, std::ostream& os) {
  os << "h,s,s0\n";
  for (std::uint64_t h = 2; h <= h_max; h += 2) {
    double s = singular_series_pair(h).value;
    os << h << "," << s << "," << (s - 1.0) << "\n";
  }
}

}  // namespace pspair
