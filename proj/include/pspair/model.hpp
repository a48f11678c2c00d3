#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pspair/ps_membership.hpp"

namespace pspair {

// Weight context at scale u: nu = 1 - 1/log u, H = -1/log nu, so that
// nu^h = exp(-h/H).
struct NuContext {
  double u;
  double nu;
  double H;
  std::complex<double> H_k(double k) const;  // H/(1 - 2*pi*i*k*H)
};

NuContext nu(double u);  // requires u >= 3

// Unit-modulus weight c(j,k,u,h) applied inside the R/S sums.  The
// conjugate-alignment family cancels the oscillating phase entirely,
// the adversarial extreme the decay bounds must still cover.
enum class PhaseFamily { kConstantOne, kConjugateAlignment };

struct RSumParams {
  double theta = 0.0;  // in [0,1]
  int vartheta = 0;    // 0 or 1
  double j = 0.0;
  double k = 0.0;
  PhaseFamily phase_family = PhaseFamily::kConstantOne;
  double gamma1 = 0.75;  // in (1/2, 1)
  double gamma2 = 0.6;
};

struct SumResult {
  std::complex<double> value;
  double trunc_error;  // certified geometric tail bound
};

// Truncation threshold 2*ceil((log u)^3) for the h-sums.
std::uint64_t default_h_max(double u);

// R(u) = sum over even h <= h_max of h^theta (log h)^vartheta nu^h
//        c(j,k,u,h) e(j u^gamma1 + k (u+h)^gamma2)
SumResult r_sum(const RSumParams& params, double u, std::uint64_t h_max);
SumResult r_sum(const RSumParams& params, double u);

// Same sum with weight S0({0,h}) instead of h^theta (log h)^vartheta.
SumResult s_sum(const RSumParams& params, double u, std::uint64_t h_max);
SumResult s_sum(const RSumParams& params, double u);

// Order-L term of the gap-density expansion: sum over A subset of
// {0,h} and T subset of [1,h-1] with |A|+|T| = L of
// (-1)^{|T|} S0(A union T) (nu log u)^{-|T|} nu^h.  Only L <= 2 is
// supported; higher orders are negligible at the scales treated here.
double d_hL(std::uint64_t h, int L, double u);

// integral from 3 to x of nu(u)^{-1} (log u)^{-2} sum_{L<=2} d_hL du,
// the model prediction for the number of prime gaps equal to h below x.
double gap_count_prediction(std::uint64_t h, double x);

// x^{gamma1+gamma2-1} / (c1 c2 log x)
double conjecture_main_term(double x, const PsExponent& c1,
                            const PsExponent& c2);

// integral from 2 to x of du / (log u)^k, relative tolerance 1e-9
double log_integral_power(double x, unsigned k);

// Gamma(z) for z in [1,2] via a Lanczos approximation.
double gamma_function(double z);

// Adaptive Simpson quadrature with an absolute floor of 1e-15.
double adaptive_simpson(double (*f)(double, const void*), const void* ctx,
                        double a, double b, double rel_tol);

// CSV sweep tables: `u,k,re,im,bound` with bound = |S| k^4.
void write_decay_table_csv(double u, const std::vector<double>& ks,
                           PhaseFamily family, std::ostream& os);
// `h,L,u,value` for the d_hL terms, L = 0..2.
void write_dhl_table_csv(const std::vector<std::uint64_t>& hs,
                         const std::vector<double>& us, std::ostream& os);

}  // namespace pspair
