// Acceptance gate: one line per criterion, exit code = number of
// failures.  Criteria that fail do so for documented modeling reasons,
// not implementation bugs; see README.md.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pspair/experiments.hpp"
#include "pspair/model.hpp"
#include "pspair/prime_engine.hpp"
#include "pspair/ps_membership.hpp"
#include "pspair/singular_series.hpp"

namespace {

int failures = 0;

void report(int n, const char* name, bool pass, const std::string& note) {
  std::printf("criterion %d (%s): %s%s%s\n", n, name,
              pass ? "PASS" : "FAIL", note.empty() ? "" : " -- ",
              note.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Peak resident set size of this process in kB, from the kernel.
long peak_rss_kb() {
  std::ifstream f("/proc/self/status");
  std::string line;
  while (std::getline(f, line))
    if (line.rfind("VmHWM:", 0) == 0)
      return std::strtol(line.c_str() + 6, nullptr, 10);
  return -1;
}

pspair::PairExperimentConfig cfg(std::uint64_t x, double c1, double c2,
                                 unsigned threads = 1) {
  pspair::PairExperimentConfig c;
  c.x = x;
  c.c1 = c1;
  c.c2 = c2;
  c.threads = threads;
  return c;
}

// 1. The production pair counter agrees with an independent brute-force
// enumeration on small ranges across several exponent pairs.
void criterion_1() {
  bool pass = true;
  std::ostringstream note;
  for (auto [c1, c2] : {std::pair{1.5, 1.5}, {1.2, 1.8}, {1.7, 1.3}})
    for (std::uint64_t x : {1000ull, 10000ull, 100000ull}) {
      std::uint64_t fast = pspair::count_ps_pairs(cfg(x, c1, c2)).count;
      std::uint64_t slow = pspair::brute_force_count(x, c1, c2);
      if (fast != slow) {
        pass = false;
        note << "x=" << x << " c=(" << c1 << "," << c2 << ") " << fast
             << "!=" << slow << "; ";
      }
    }
  report(1, "pair counts match a brute-force oracle", pass, note.str());
}

// 2. Singular-series internal consistency: the pair fast path matches
// the truncated Euler product within certified error, and the modified
// series inverts its inclusion-exclusion definition on random sets.
void criterion_2() {
  bool pass = true;
  std::ostringstream note;
  double worst = 0.0;
  for (std::uint64_t h = 2; h <= 10000; h += 2) {
    auto prod = pspair::singular_series(pspair::OffsetSet({0, h}));
    auto fast = pspair::singular_series_pair(h);
    double d = std::abs(prod.value - fast.value);
    double budget = 1e-8 + prod.abs_error + fast.abs_error;
    worst = std::max(worst, d);
    if (d > budget) {
      pass = false;
      note << "pair h=" << h << " diff=" << d << "; ";
      break;
    }
  }
  std::mt19937_64 rng(20240817);
  std::uniform_int_distribution<std::uint64_t> pick(0, 60);
  std::uniform_int_distribution<int> size_pick(1, 5);
  for (int trial = 0; trial < 200 && pass; ++trial) {
    int sz = size_pick(rng);
    std::vector<std::uint64_t> offs;
    while (static_cast<int>(offs.size()) < sz) {
      std::uint64_t o = pick(rng);
      bool dup = false;
      for (auto q : offs) dup = dup || q == o;
      if (!dup) offs.push_back(o);
    }
    pspair::OffsetSet H(offs);
    double sum = 0.0, err = 0.0;
    for (std::uint64_t mask = 0; mask < (1ull << sz); ++mask) {
      std::vector<std::uint64_t> sub;
      for (int b = 0; b < sz; ++b)
        if (mask & (1ull << b)) sub.push_back(offs[b]);
      auto s0 = pspair::modified_singular_series(pspair::OffsetSet(sub),
                                                100000);
      sum += s0.value;
      err += s0.abs_error;
    }
    auto s = pspair::singular_series(H, 100000);
    if (std::abs(sum - s.value) > err + s.abs_error + 1e-9) {
      pass = false;
      note << "inclusion-exclusion trial " << trial << " defect "
           << std::abs(sum - s.value) << "; ";
    }
  }
  std::ostringstream ok;
  ok << "max pair defect " << worst;
  report(2, "singular-series fast paths and transforms are consistent",
         pass, pass ? ok.str() : note.str());
}

// 3. The closed-form Dirichlet series F(s) agrees with direct summation
// of the pair values at s = 4.
void criterion_3() {
  auto f = pspair::dirichlet_F(4.0);
  double direct = 0.0;
  for (std::uint64_t h = 2; h <= 1000000; h += 2) {
    double hd = static_cast<double>(h);
    direct += pspair::singular_series_pair(h).value / (hd * hd * hd * hd);
  }
  double diff = std::abs(f.value - direct);
  bool pass = diff <= 1e-8 + f.abs_error;
  std::ostringstream note;
  note << "diff " << diff;
  report(3, "Dirichlet-series closed form matches direct summation", pass,
         note.str());
}

// 4. Averaged modified singular-series sums stay within the predicted
// error envelope (residuals bounded after the h^0.6 normalization).
void criterion_4() {
  auto rep = pspair::verify_lemma_averages(100000);
  std::ostringstream note;
  note << "prefix ratio " << rep.prefix_max_over_median << ", pair ratio "
       << rep.pair_max_over_median;
  report(4, "averaged singular-series sums track their estimates",
         rep.pass, note.str());
}

// 5. The exponentially weighted h-sums reproduce their closed form and
// leading asymptotics over a wide u grid.
// 6. The same sums decay like the fourth power of the frequency
// parameters, uniformly over phase choices.
void criteria_5_6() {
  auto rep = pspair::verify_proposition(
      {1e3, 1e4, 1e5, 1e6, 1e7, 1e8, 1e9}, {1.0, 2.0, 4.0, 8.0, 16.0});
  std::ostringstream n5;
  n5 << "geometric defect " << rep.max_geometric_defect
     << ", S residual " << rep.max_s_residual;
  report(5, "weighted sums match closed form and asymptotics",
         rep.closed_form_pass && rep.asymptotics_pass, n5.str());
  std::ostringstream n6;
  n6 << "normalized spans: k " << rep.k_span[0] << "/" << rep.k_span[1]
     << ", jk " << rep.jk_span[0] << "/" << rep.jk_span[1]
     << " (all must be < 10)";
  report(6, "fourth-power frequency decay holds uniformly",
         rep.k_decay_pass && rep.jk_decay_pass, n6.str());
}

// 7. The gap-density model predicts observed prime-gap counts below
// 10^8 within 10% for every well-populated even gap up to 50.
void criterion_7() {
  pspair::GapHistogram hist = pspair::gap_histogram(100000000);
  bool pass = true;
  std::ostringstream note;
  for (std::uint64_t h = 2; h <= 50; h += 2) {
    auto it = hist.counts.find(static_cast<std::uint32_t>(h));
    std::uint64_t emp = it == hist.counts.end() ? 0 : it->second;
    if (emp < 1000) continue;  // too few events to call 10%
    double model = pspair::gap_count_prediction(h, 1e8);
    double rel = (model - static_cast<double>(emp)) /
                 static_cast<double>(emp);
    if (std::abs(rel) > 0.10) {
      pass = false;
      note << "h=" << h << " rel " << rel * 100.0 << "%; ";
    }
  }
  report(7, "gap-density model within 10% of sieve counts", pass,
         note.str());
}

// 8. Empirical pair counts track the conjectured main term: final ratio
// within [0.7, 1.3] at x = 10^8 and drifting toward 1 as x grows.
void criterion_8() {
  double ratios[3];
  int i = 0;
  for (std::uint64_t x : {1000000ull, 10000000ull, 100000000ull})
    ratios[i++] = pspair::count_ps_pairs(cfg(x, 1.5, 1.5)).ratio;
  bool in_band = ratios[2] >= 0.7 && ratios[2] <= 1.3;
  bool drifting = std::abs(ratios[1] - 1.0) <= std::abs(ratios[0] - 1.0) &&
                  std::abs(ratios[2] - 1.0) <= std::abs(ratios[1] - 1.0);
  std::ostringstream note;
  note << "ratios " << ratios[0] << ", " << ratios[1] << ", " << ratios[2];
  report(8, "pair counts track the conjectured main term",
         in_band && drifting, note.str());
}

// 9. Scale: the counter is deterministic across thread counts and a
// 10^9 run completes within 300 s and 1 GB peak memory.
void criterion_9() {
  auto r1 = pspair::count_ps_pairs(cfg(10000000, 1.5, 1.6, 1));
  auto r4 = pspair::count_ps_pairs(cfg(10000000, 1.5, 1.6, 4));
  auto r8 = pspair::count_ps_pairs(cfg(10000000, 1.5, 1.6, 8));
  bool deterministic = r1.count == r4.count && r4.count == r8.count &&
                       r1.pi_c1 == r4.pi_c1 && r4.pi_c1 == r8.pi_c1;
  auto t0 = std::chrono::steady_clock::now();
  auto big = pspair::count_ps_pairs(cfg(1000000000, 1.5, 1.5, 1));
  double elapsed = seconds_since(t0);
  long rss = peak_rss_kb();
  bool pass = deterministic && elapsed < 300.0 && rss > 0 &&
              rss < 1048576;
  std::ostringstream note;
  note << "10^9 count " << big.count << " in " << elapsed << " s, peak rss "
       << rss / 1024 << " MB"
       << (deterministic ? "" : ", thread results diverge");
  report(9, "deterministic threading and 10^9-scale throughput", pass,
         note.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criteria_5_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
