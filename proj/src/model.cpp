#include "pspair/model.hpp"

#include "pspair/singular_series.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace pspair {

std::complex<double> NuContext::H_k(double k) const {
  return H / std::complex<double>(1.0, -2.0 * M_PI * k * H);
}

NuContext nu(double u) {
  if (!(u >= 3.0))
    throw std::domain_error("nu: need u >= 3, got " + std::to_string(u));
  NuContext ctx;
  ctx.u = u;
  ctx.nu = 1.0 - 1.0 / std::log(u);
  ctx.H = -1.0 / std::log(ctx.nu);
  return ctx;
}

std::uint64_t default_h_max(double u) {
  double lg = std::log(u);
  return 2 * static_cast<std::uint64_t>(std::ceil(lg * lg * lg));
}

namespace {

void check_params(const RSumParams& p, double u, std::uint64_t h_max) {
  if (!(u >= 3.0)) throw std::domain_error("r_sum/s_sum: need u >= 3");
  if (!(p.theta >= 0.0 && p.theta <= 1.0))
    throw std::invalid_argument("r_sum/s_sum: theta must lie in [0,1]");
  if (p.vartheta != 0 && p.vartheta != 1)
    throw std::invalid_argument("r_sum/s_sum: vartheta must be 0 or 1");
  if (h_max < default_h_max(u))
    throw std::invalid_argument("r_sum/s_sum: h_max below the (log u)^3 "
                                "truncation threshold");
}

SumResult sum_impl(bool weight_by_s0, const RSumParams& p, double u,
                   std::uint64_t h_max) {
  check_params(p, u, h_max);
  const NuContext ctx = nu(u);
  const double uj = p.j == 0.0 ? 0.0 : std::pow(u, p.gamma1);
  const double nu2 = ctx.nu * ctx.nu;
  std::complex<double> acc = 0.0;
  double w = nu2;  // nu^h
  for (std::uint64_t h = 2; h <= h_max; h += 2, w *= nu2) {
    const double hd = static_cast<double>(h);
    double ang = 0.0;
    if (p.j != 0.0) ang += p.j * uj;
    if (p.k != 0.0) ang += p.k * std::pow(u + hd, p.gamma2);
    std::complex<double> phase = std::polar(1.0, 2.0 * M_PI * ang);
    std::complex<double> c =
        p.phase_family == PhaseFamily::kConstantOne ? 1.0 : std::conj(phase);
    double weight = weight_by_s0
                        ? modified_pair(h)
                        : std::pow(hd, p.theta) *
                              (p.vartheta ? std::log(hd) : 1.0);
    acc += weight * w * c * phase;
  }
  // geometric tail: weights beyond h_max are O(h^theta log h) for R and
  // O(log log h) for S, both dominated by 8 h at these truncations
  double tail = 8.0 * static_cast<double>(h_max) * w / (1.0 - nu2);
  return {acc, tail};
}

}  // namespace

SumResult r_sum(const RSumParams& params, double u, std::uint64_t h_max) {
  return sum_impl(false, params, u, h_max);
}
SumResult r_sum(const RSumParams& params, double u) {
  return sum_impl(false, params, u, default_h_max(u));
}
SumResult s_sum(const RSumParams& params, double u, std::uint64_t h_max) {
  return sum_impl(true, params, u, h_max);
}
SumResult s_sum(const RSumParams& params, double u) {
  return sum_impl(true, params, u, default_h_max(u));
}

double d_hL(std::uint64_t h, int L, double u) {
  if (h < 2 || h % 2 != 0)
    throw std::invalid_argument("d_hL: h must be even and >= 2");
  if (L < 0 || L > 2)
    throw std::invalid_argument("d_hL: only L <= 2 is supported");
  const NuContext ctx = nu(u);
  const double nuh = std::pow(ctx.nu, static_cast<double>(h));
  const double nl = ctx.nu * std::log(u);
  switch (L) {
    case 0:
      return nuh;  // A = T = empty, S0(empty) = 1
    case 1:
      return 0.0;  // every singleton has S0 = 0
    default: {
      // |A| = 2: the set {0,h} itself
      double s = modified_pair(h);
      // |A| = 1, |T| = 1: sign (-1), distances t and h-t each sweep 1..h-1
      double mixed = 0.0;
      for (std::uint64_t t = 1; t < h; ++t) mixed += modified_pair(t);
      s -= 2.0 * mixed / nl;
      // |T| = 2: sign (+1), distance d = t2 - t1 occurs h-1-d times
      double pair_t = 0.0;
      for (std::uint64_t d = 1; d + 1 < h; ++d)
        pair_t += static_cast<double>(h - 1 - d) * modified_pair(d);
      s += pair_t / (nl * nl);
      return s * nuh;
    }
  }
}

// ---- quadrature ----------------------------------------------------

namespace {

double simpson(double a, double fa, double fm, double fb, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(double (*f)(double, const void*), const void* ctx, double a,
             double m, double b, double fa, double fm, double fb,
             double whole, double eps, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm, ctx), frm = f(rm, ctx);
  double left = simpson(a, fa, flm, fm, m);
  double right = simpson(m, fm, frm, fb, b);
  double delta = left + right - whole;
  if (depth <= 0)
    throw std::runtime_error("adaptive_simpson: quadrature non-convergence");
  if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return adapt(f, ctx, a, lm, m, fa, flm, fm, left, std::max(0.5 * eps, 1e-17), depth - 1) +
         adapt(f, ctx, m, rm, b, fm, frm, fb, right, std::max(0.5 * eps, 1e-17), depth - 1);
}

}  // namespace

double adaptive_simpson(double (*f)(double, const void*), const void* ctx,
                        double a, double b, double rel_tol) {
  double m = 0.5 * (a + b);
  double fa = f(a, ctx), fm = f(m, ctx), fb = f(b, ctx);
  double whole = simpson(a, fa, fm, fb, b);
  double eps = std::max(rel_tol * std::abs(whole), 1e-15);
  return adapt(f, ctx, a, m, b, fa, fm, fb, whole, eps, 60);
}

namespace {

struct GapIntegrand {
  double h;
  double s0h;     // S0({0,h})
  double prefix;  // sum_{t<h} S0({0,t})
  double pairs;   // sum_{t1<t2 in [1,h-1]} S0({t1,t2})
};

double gap_integrand(double u, const void* ctx) {
  const auto* g = static_cast<const GapIntegrand*>(ctx);
  double lg = std::log(u);
  double nuu = 1.0 - 1.0 / lg;
  double nl = nuu * lg;
  double poly = 1.0 + g->s0h - 2.0 * g->prefix / nl + g->pairs / (nl * nl);
  return std::pow(nuu, g->h - 1.0) / (lg * lg) * poly;
}

}  // namespace

double gap_count_prediction(std::uint64_t h, double x) {
  if (h < 2 || h % 2 != 0)
    throw std::invalid_argument("gap_count_prediction: h must be even >= 2");
  if (!(x >= 10.0))
    throw std::domain_error("gap_count_prediction: need x >= 10");
  GapIntegrand g;
  g.h = static_cast<double>(h);
  g.s0h = modified_pair(h);
  g.prefix = avg_s0_prefix(h);
  g.pairs = avg_s0_pairs(h);
  return adaptive_simpson(gap_integrand, &g, 3.0, x, 1e-6);
}

double conjecture_main_term(double x, const PsExponent& c1,
                            const PsExponent& c2) {
  if (!(x >= 3.0))
    throw std::domain_error("conjecture_main_term: need x >= 3");
  double g1 = c1.gamma_double(), g2 = c2.gamma_double();
  return std::pow(x, g1 + g2 - 1.0) / (c1.c() * c2.c() * std::log(x));
}

namespace {
double log_power_integrand(double u, const void* ctx) {
  unsigned k = *static_cast<const unsigned*>(ctx);
  return std::pow(std::log(u), -static_cast<double>(k));
}
}  // namespace

double log_integral_power(double x, unsigned k) {
  if (!(x > 2.0))
    throw std::domain_error("log_integral_power: need x > 2");
  if (k == 0) throw std::invalid_argument("log_integral_power: k >= 1");
  return adaptive_simpson(log_power_integrand, &k, 2.0, x, 1e-9);
}

double gamma_function(double z) {
  if (!(z >= 1.0 && z <= 2.0))
    throw std::domain_error("gamma_function: need z in [1,2]");
  // Lanczos approximation, g = 7, 9 coefficients
  static const double c[9] = {0.99999999999980993,  676.5203681218851,
                              -1259.1392167224028,  771.32342877765313,
                              -176.61502916214059,  12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6,
                              1.5056327351493116e-7};
  double zz = z - 1.0;
  double a = c[0];
  for (int i = 1; i < 9; ++i) a += c[i] / (zz + i);
  double t = zz + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, zz + 0.5) * std::exp(-t) * a;
}

void write_decay_table_csv(double u, const std::vector<double>& ks,
                           PhaseFamily family, std::ostream& os) {
  os << "u,k,re,im,bound\n";
  RSumParams p;
  p.phase_family = family;
  for (double k : ks) {
    p.k = k;
    SumResult s = s_sum(p, u);
    os << u << "," << k << "," << s.value.real() << "," << s.value.imag()
       << "," << std::abs(s.value) * k * k * k * k << "\n";
  }
}

void write_dhl_table_csv(const std::vector<std::uint64_t>& hs,
                         const std::vector<double>& us, std::ostream& os) {
  os << "h,L,u,value\n";
  for (std::uint64_t h : hs)
    for (int L = 0; L <= 2; ++L)
      for (double u : us)
        os << h << "," << L << "," << u << "," << d_hL(h, L, u) << "\n";
}

}  // namespace pspair
