#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pspair/model.hpp"
#include "pspair/ps_membership.hpp"

namespace pspair {

struct PairExperimentConfig {
  std::uint64_t x = 0;
  double c1 = 1.5;
  double c2 = 1.5;
  bool per_gap = false;
  unsigned threads = 1;
  std::string checkpoint_path;  // empty = no checkpointing
};

struct GapClassRecord {
  std::uint32_t h = 0;
  std::uint64_t count = 0;
};

struct PairCountRecord {
  std::uint64_t x = 0;
  double c1 = 0.0, c2 = 0.0;
  std::uint64_t count = 0;     // consecutive pairs with both members
  std::uint64_t pi_c1 = 0;     // primes p <= x in the first sequence
  std::uint64_t pi_total = 0;  // pi(x)
  double main_term = 0.0;
  double ratio = 0.0;
  std::vector<GapClassRecord> per_gap;  // even gaps up to (log x)^3
  std::uint64_t tail_count = 0;         // gaps beyond the table
  double runtime_seconds = 0.0;
  bool checkpoint_used = false;
};

// Streams consecutive primes to x and counts pairs with p in the first
// sequence and its successor in the second.  Deterministic across
// thread counts; resumable through cfg.checkpoint_path.
PairCountRecord count_ps_pairs(const PairExperimentConfig& cfg);

std::vector<GapClassRecord> count_per_gap(const PairExperimentConfig& cfg);

// Independent small-scale oracle (x <= 10^6): enumerates both floor
// sequences directly and the primes by trial division.
std::uint64_t brute_force_count(std::uint64_t x, double c1, double c2);

// ---- verification suites ------------------------------------------

struct AveragesRow {
  std::uint64_t h = 0;
  double prefix_residual = 0.0;  // |sum S0({0,t})| / h^0.6
  double pair_residual = 0.0;    // |pair sum + h log h / 2 - A h / 2| / h^0.6
};

struct AveragesReport {
  std::vector<AveragesRow> rows;
  double prefix_max_over_median = 0.0;
  double pair_max_over_median = 0.0;
  bool pass = false;  // both ratios <= 3
};

AveragesReport verify_lemma_averages(std::uint64_t h_max);

struct PropositionRow {
  double u = 0.0;
  double j = 0.0, k = 0.0;
  int family = 0;  // 0 = constant-one, 1 = conjugate-alignment
  double magnitude = 0.0;
  double normalized = 0.0;  // magnitude * (jk or k)^4
};

struct PropositionReport {
  // closed-form and asymptotic checks over the u grid
  double max_geometric_defect = 0.0;  // |R - nu^2/(1-nu^2)|
  double max_r_residual = 0.0;        // |R - log(u)/2|
  double r_residual_at_first_u = 0.0;
  double max_s_residual = 0.0;        // |S - log(u)/2 + log log(u)/2|
  double s_residual_at_first_u = 0.0;
  bool closed_form_pass = false;
  bool asymptotics_pass = false;
  // k^-4 and (jk)^-4 decay sweeps at u = e^10
  std::vector<PropositionRow> k_rows, jk_rows;
  double k_span[2] = {0.0, 0.0};   // per family: max/min of |S| k^4
  double jk_span[2] = {0.0, 0.0};  // per family: max/min of |S| (jk)^4
  bool k_decay_pass = false;
  bool jk_decay_pass = false;
  bool pass = false;
};

PropositionReport verify_proposition(const std::vector<double>& u_grid,
                                     const std::vector<double>& k_grid);

struct ConjectureRow {
  PairCountRecord record;
  double band = 0.0;  // main_term / sqrt(log x), display-only error band
};

ConjectureRow compare_with_conjecture(const PairExperimentConfig& cfg);

// ---- report output -------------------------------------------------

void write_count_report_json(const PairCountRecord& rec, std::ostream& os);
void write_per_gap_csv(const PairCountRecord& rec, std::ostream& os);
void write_averages_csv(const AveragesReport& rep, std::ostream& os);
void write_proposition_csv(const PropositionReport& rep, std::ostream& os);

}  // namespace pspair
