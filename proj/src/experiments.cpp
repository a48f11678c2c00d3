#include "pspair/experiments.hpp"

#include "pspair/prime_engine.hpp"
#include "pspair/singular_series.hpp"

#include <mpfr.h>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>

namespace pspair {

namespace {

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

struct RunState {
  std::uint64_t count = 0, pi_c1 = 0, pi_total = 0, tail = 0;
  std::map<std::uint32_t, std::uint64_t> gaps;
  std::uint64_t last_p = 0;
  std::uint8_t last_pl = 0;
};

std::string serialize_gaps(const std::map<std::uint32_t, std::uint64_t>& g) {
  std::string s;
  for (const auto& [h, c] : g) {
    if (!s.empty()) s += ';';
    s += std::to_string(h) + ":" + std::to_string(c);
  }
  return s;
}

std::map<std::uint32_t, std::uint64_t> parse_gaps(const std::string& s) {
  std::map<std::uint32_t, std::uint64_t> g;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t semi = s.find(';', pos);
    if (semi == std::string::npos) semi = s.size();
    std::size_t colon = s.find(':', pos);
    if (colon == std::string::npos || colon >= semi)
      throw CheckpointError("malformed gap table in checkpoint");
    g[static_cast<std::uint32_t>(std::stoull(s.substr(pos, colon - pos)))] =
        std::stoull(s.substr(colon + 1, semi - colon - 1));
    pos = semi + 1;
  }
  return g;
}

}  // namespace

PairCountRecord count_ps_pairs(const PairExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  if (cfg.x < 2)
    throw std::invalid_argument("count_ps_pairs: x >= 2 required");
  PsExponent e1(cfg.c1), e2(cfg.c2);
  const double gap_limit = std::pow(std::log(static_cast<double>(cfg.x)), 3.0);

  RunState st;
  StreamOptions opts;
  opts.threads = cfg.threads == 0 ? 1 : cfg.threads;

  // Membership is evaluated inside sieve workers; failures are captured
  // and re-thrown on the consumer thread so counts are never biased by
  // silently skipped primes.
  std::mutex err_mu;
  std::optional<UndecidableError> first_err;
  opts.payload_fn = [&](std::uint64_t p) -> std::uint8_t {
    try {
      std::uint8_t bits = 0;
      if (is_member(p, e1)) bits |= 1;
      if (is_member(p, e2)) bits |= 2;
      return bits;
    } catch (const UndecidableError& e) {
      std::lock_guard<std::mutex> lk(err_mu);
      if (!first_err) first_err = e;
      return 0;
    }
  };

  bool resumed = false;
  if (!cfg.checkpoint_path.empty()) {
    std::optional<Checkpoint> cp;
    try {
      cp = restore_checkpoint(cfg.checkpoint_path);
    } catch (const CheckpointError&) {
      cp.reset();  // absent or unreadable: start fresh
    }
    if (cp) {
      auto& f = cp->fields;
      if (f.at("x") != std::to_string(cfg.x) ||
          f.at("c1") != hexfloat(cfg.c1) || f.at("c2") != hexfloat(cfg.c2))
        throw CheckpointError(
            "checkpoint does not match this configuration: " +
            cfg.checkpoint_path);
      opts.resume_segment = std::stoull(f.at("segment"));
      opts.resume_prev_prime = std::stoull(f.at("prev_prime"));
      opts.resume_prev_payload =
          static_cast<std::uint8_t>(std::stoul(f.at("prev_payload")));
      st.count = std::stoull(f.at("count"));
      st.pi_c1 = std::stoull(f.at("pi_c1"));
      st.pi_total = std::stoull(f.at("pi_total"));
      st.tail = std::stoull(f.at("tail"));
      st.gaps = parse_gaps(f.at("gaps"));
      st.last_p = opts.resume_prev_prime;
      st.last_pl = opts.resume_prev_payload;
      resumed = true;
    }
  }

  if (!cfg.checkpoint_path.empty()) {
    opts.on_segment_done = [&](std::uint64_t seg) {
      {
        std::lock_guard<std::mutex> lk(err_mu);
        if (first_err) return false;
      }
      if ((seg + 1) % 16 != 0) return true;
      Checkpoint cp;
      cp.fields["x"] = std::to_string(cfg.x);
      cp.fields["c1"] = hexfloat(cfg.c1);
      cp.fields["c2"] = hexfloat(cfg.c2);
      cp.fields["segment"] = std::to_string(seg + 1);
      cp.fields["prev_prime"] = std::to_string(st.last_p);
      cp.fields["prev_payload"] = std::to_string(st.last_pl);
      cp.fields["count"] = std::to_string(st.count);
      cp.fields["pi_c1"] = std::to_string(st.pi_c1);
      cp.fields["pi_total"] = std::to_string(st.pi_total);
      cp.fields["tail"] = std::to_string(st.tail);
      cp.fields["gaps"] = serialize_gaps(st.gaps);
      save_checkpoint(cp, cfg.checkpoint_path);
      return true;
    };
  } else {
    opts.on_segment_done = [&](std::uint64_t) {
      std::lock_guard<std::mutex> lk(err_mu);
      return !first_err;
    };
  }

  stream_consecutive_pairs(cfg.x, opts, [&](const ConsecutivePairEvent& ev) {
    ++st.pi_total;
    bool in1 = (ev.payload_p & 1) != 0;
    if (in1) ++st.pi_c1;
    if (in1 && (ev.payload_sharp & 2) != 0) {
      ++st.count;
      if (ev.gap % 2 == 0) {  // the single odd gap (2,3) stays untabled
        if (static_cast<double>(ev.gap) <= gap_limit)
          ++st.gaps[ev.gap];
        else
          ++st.tail;
      }
    }
    st.last_p = ev.p_sharp;
    st.last_pl = ev.payload_sharp;
  });

  {
    std::lock_guard<std::mutex> lk(err_mu);
    if (first_err) throw *first_err;
  }
  if (!cfg.checkpoint_path.empty())
    std::remove(cfg.checkpoint_path.c_str());  // run completed

  PairCountRecord rec;
  rec.x = cfg.x;
  rec.c1 = cfg.c1;
  rec.c2 = cfg.c2;
  rec.count = st.count;
  rec.pi_c1 = st.pi_c1;
  rec.pi_total = st.pi_total;
  // the main term is defined for x >= 3; clamp for the single pair (2,3)
  rec.main_term = conjecture_main_term(
      std::max<double>(static_cast<double>(cfg.x), 3.0), e1, e2);
  rec.ratio = static_cast<double>(rec.count) / rec.main_term;
  if (cfg.per_gap) {
    for (const auto& [h, c] : st.gaps) rec.per_gap.push_back({h, c});
    rec.tail_count = st.tail;
  }
  rec.checkpoint_used = resumed;
  rec.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

std::vector<GapClassRecord> count_per_gap(const PairExperimentConfig& cfg) {
  PairExperimentConfig c = cfg;
  c.per_gap = true;
  return count_ps_pairs(c).per_gap;
}

// ---- brute-force oracle --------------------------------------------

namespace {

// floor(n^c) evaluated independently of the production path: extended
// double, with a single high-precision evaluation when the value sits
// within 1e-9 of an integer (covers exact powers like 4^1.5 = 8).
std::uint64_t oracle_floor(std::uint64_t n, double c) {
  long double v = powl(static_cast<long double>(n), static_cast<long double>(c));
  long double r = nearbyintl(v);
  if (fabsl(v - r) < 1e-9L) {
    mpfr_t cc, y;
    mpfr_inits2(256, cc, y, (mpfr_ptr) nullptr);
    mpfr_set_d(cc, c, MPFR_RNDN);
    mpfr_set_ui(y, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_pow(y, y, cc, MPFR_RNDN);
    mpfr_floor(y, y);
    std::uint64_t f = mpfr_get_ui(y, MPFR_RNDN);
    mpfr_clears(cc, y, (mpfr_ptr) nullptr);
    return f;
  }
  return static_cast<std::uint64_t>(floorl(v));
}

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

std::uint64_t brute_force_count(std::uint64_t x, double c1, double c2) {
  if (x > 1000000)
    throw std::invalid_argument("brute_force_count: x <= 10^6 enforced");
  if (x < 2) return 0;
  // the successor of the largest prime <= x can exceed x by the local
  // gap; 2000 is far beyond any gap at this scale
  const std::uint64_t horizon = x + 2000;
  std::vector<char> in1(horizon + 1, 0), in2(horizon + 1, 0);
  for (std::uint64_t n = 1;; ++n) {
    std::uint64_t v = oracle_floor(n, c1);
    if (v > horizon) break;
    in1[v] = 1;
  }
  for (std::uint64_t n = 1;; ++n) {
    std::uint64_t v = oracle_floor(n, c2);
    if (v > horizon) break;
    in2[v] = 1;
  }
  std::uint64_t count = 0, prev = 0;
  for (std::uint64_t n = 2; n <= horizon; ++n) {
    if (!trial_division_prime(n)) continue;
    if (prev != 0 && in1[prev] && in2[n]) ++count;
    if (n > x) break;
    prev = n;
  }
  return count;
}

// ---- verification suites ------------------------------------------

AveragesReport verify_lemma_averages(std::uint64_t h_max) {
  if (h_max > 1000000)
    throw std::invalid_argument("verify_lemma_averages: h_max <= 10^6");
  if (h_max < 16)
    throw std::invalid_argument("verify_lemma_averages: h_max too small");
  std::vector<double> s0(h_max + 1, 0.0), cms(h_max + 1, 0.0),
      cms2(h_max + 1, 0.0);
  for (std::uint64_t t = 1; t <= h_max; ++t) {
    s0[t] = modified_pair(t);
    cms[t] = cms[t - 1] + s0[t];
    cms2[t] = cms2[t - 1] + static_cast<double>(t) * s0[t];
  }
  const double A = constants().a_constant;
  AveragesReport rep;
  double base = h_max >= 8000 ? 4000.0 : static_cast<double>(h_max) / 2.0;
  for (double hf = base; hf <= static_cast<double>(h_max);
       hf *= std::sqrt(2.0)) {
    auto h = static_cast<std::uint64_t>(std::llround(hf));
    if (h < 3 || h > h_max) continue;
    double hd = static_cast<double>(h);
    double prefix = cms[h - 1];
    double pairs = (hd - 1.0) * cms[h - 2] - cms2[h - 2];
    AveragesRow row;
    row.h = h;
    row.prefix_residual = std::abs(prefix) / std::pow(hd, 0.6);
    row.pair_residual =
        std::abs(pairs + 0.5 * hd * std::log(hd) - 0.5 * A * hd) /
        std::pow(hd, 0.6);
    rep.rows.push_back(row);
  }
  auto max_over_median = [&](auto get) {
    std::vector<double> v;
    for (const auto& r : rep.rows) v.push_back(get(r));
    std::sort(v.begin(), v.end());
    double med = v[v.size() / 2];
    return med > 0.0 ? v.back() / med : 0.0;
  };
  rep.prefix_max_over_median =
      max_over_median([](const AveragesRow& r) { return r.prefix_residual; });
  rep.pair_max_over_median =
      max_over_median([](const AveragesRow& r) { return r.pair_residual; });
  rep.pass =
      rep.prefix_max_over_median <= 3.0 && rep.pair_max_over_median <= 3.0;
  return rep;
}

PropositionReport verify_proposition(const std::vector<double>& u_grid,
                                     const std::vector<double>& k_grid) {
  if (u_grid.empty() || k_grid.empty())
    throw std::invalid_argument("verify_proposition: empty grid");
  PropositionReport rep;
  bool first = true;
  for (double u : u_grid) {
    RSumParams p;
    SumResult r = r_sum(p, u);
    SumResult s = s_sum(p, u);
    double lg = std::log(u);
    double nuv = 1.0 - 1.0 / lg;
    double geo = std::abs(r.value.real() - nuv * nuv / (1.0 - nuv * nuv));
    double rres = std::abs(r.value.real() - 0.5 * lg);
    double sres = std::abs(s.value.real() - 0.5 * lg + 0.5 * std::log(lg));
    rep.max_geometric_defect = std::max(rep.max_geometric_defect, geo);
    rep.max_r_residual = std::max(rep.max_r_residual, rres);
    rep.max_s_residual = std::max(rep.max_s_residual, sres);
    if (first) {
      rep.r_residual_at_first_u = rres;
      rep.s_residual_at_first_u = sres;
      first = false;
    }
  }
  rep.closed_form_pass = rep.max_geometric_defect <= 1e-9;
  rep.asymptotics_pass =
      rep.max_r_residual <= rep.r_residual_at_first_u + 1.0 &&
      rep.max_s_residual <= rep.s_residual_at_first_u + 1.0;

  const double u0 = std::exp(10.0);
  for (int fam = 0; fam < 2; ++fam) {
    double kmin = 0.0, kmax = 0.0, jkmin = 0.0, jkmax = 0.0;
    for (double k : k_grid) {
      RSumParams p;
      p.k = k;
      p.phase_family = fam == 0 ? PhaseFamily::kConstantOne
                                : PhaseFamily::kConjugateAlignment;
      double mag = std::abs(s_sum(p, u0).value);
      double norm = mag * k * k * k * k;
      rep.k_rows.push_back({u0, 0.0, k, fam, mag, norm});
      if (kmin == 0.0 || norm < kmin) kmin = norm;
      kmax = std::max(kmax, norm);
    }
    for (double j : k_grid)
      for (double k : k_grid) {
        RSumParams p;
        p.j = j;
        p.k = k;
        p.phase_family = fam == 0 ? PhaseFamily::kConstantOne
                                  : PhaseFamily::kConjugateAlignment;
        double mag = std::abs(s_sum(p, u0).value);
        double jk = j * k;
        double norm = mag * jk * jk * jk * jk;
        rep.jk_rows.push_back({u0, j, k, fam, mag, norm});
        if (jkmin == 0.0 || norm < jkmin) jkmin = norm;
        jkmax = std::max(jkmax, norm);
      }
    rep.k_span[fam] = kmin > 0.0 ? kmax / kmin : 0.0;
    rep.jk_span[fam] = jkmin > 0.0 ? jkmax / jkmin : 0.0;
  }
  rep.k_decay_pass = rep.k_span[0] < 10.0 && rep.k_span[1] < 10.0;
  rep.jk_decay_pass = rep.jk_span[0] < 10.0 && rep.jk_span[1] < 10.0;
  rep.pass = rep.closed_form_pass && rep.asymptotics_pass &&
             rep.k_decay_pass && rep.jk_decay_pass;
  return rep;
}

ConjectureRow compare_with_conjecture(const PairExperimentConfig& cfg) {
  ConjectureRow row;
  row.record = count_ps_pairs(cfg);
  row.band = row.record.main_term /
             std::sqrt(std::log(static_cast<double>(cfg.x)));
  return row;
}

// ---- report output -------------------------------------------------

void write_count_report_json(const PairCountRecord& rec, std::ostream& os) {
  nlohmann::json j;
  j["x"] = rec.x;
  j["c1"] = rec.c1;
  j["c2"] = rec.c2;
  j["count"] = rec.count;
  j["pi_c1"] = rec.pi_c1;
  j["pi_total"] = rec.pi_total;
  j["main_term"] = rec.main_term;
  j["ratio"] = rec.ratio;
  j["band"] =
      rec.main_term / std::sqrt(std::log(static_cast<double>(rec.x)));
  j["runtime_seconds"] = rec.runtime_seconds;
  j["checkpoint_used"] = rec.checkpoint_used;
  if (!rec.per_gap.empty() || rec.tail_count > 0) {
    nlohmann::json gaps = nlohmann::json::array();
    for (const auto& g : rec.per_gap)
      gaps.push_back({{"h", g.h}, {"count", g.count}});
    j["per_gap"] = gaps;
    j["tail_count"] = rec.tail_count;
  }
  os << j.dump(2) << "\n";
}

void write_per_gap_csv(const PairCountRecord& rec, std::ostream& os) {
  os << "h,count\n";
  for (const auto& g : rec.per_gap) os << g.h << "," << g.count << "\n";
  os << "tail," << rec.tail_count << "\n";
}

void write_averages_csv(const AveragesReport& rep, std::ostream& os) {
  os.precision(17);
  os << "h,prefix_residual,pair_residual\n";
  for (const auto& r : rep.rows)
    os << r.h << "," << r.prefix_residual << "," << r.pair_residual << "\n";
}

void write_proposition_csv(const PropositionReport& rep, std::ostream& os) {
  os.precision(17);
  os << "u,j,k,family,magnitude,normalized\n";
  for (const auto* rows : {&rep.k_rows, &rep.jk_rows})
    for (const auto& r : *rows)
      os << r.u << "," << r.j << "," << r.k << ","
         << (r.family == 0 ? "one" : "conj") << "," << r.magnitude << ","
         << r.normalized << "\n";
}

}  // namespace pspair
