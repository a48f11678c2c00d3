#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pspair/experiments.hpp"
#include "pspair/model.hpp"
#include "pspair/prime_engine.hpp"
#include "pspair/ps_membership.hpp"
#include "pspair/singular_series.hpp"

namespace {

// Integer argument with optional scientific suffix (1e8).  Fractional
// mantissas (1.5e3) are rejected: sieve limits must be written as
// integers.
std::uint64_t parse_extent(const std::string& s) {
  if (s.find('.') != std::string::npos)
    throw CLI::ValidationError("--x", "fractional mantissa not allowed: " + s);
  char* end = nullptr;
  long double v = strtold(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !(v >= 0) || v != floorl(v) ||
      v > 9.0e18L)
    throw CLI::ValidationError("--x", "not a non-negative integer: " + s);
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    double v = strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0' || !std::isfinite(v))
      throw CLI::ValidationError("grid", "bad grid entry: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("grid", "empty grid");
  return out;
}

std::vector<std::uint64_t> parse_offsets(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    unsigned long long v = strtoull(item.c_str(), &end, 10);
    if (end == item.c_str() || *end != '\0')
      throw CLI::ValidationError("set", "bad offset: " + item);
    out.push_back(v);
  }
  return out;
}

struct OutStream {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit OutStream(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::trunc);
      if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
      os = &file;
    }
  }
  std::ostream& get() { return *os; }
};

void echo_config(std::ostream& os,
                 const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) os << "# " << k << "=" << v << "\n";
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(int argc, char** argv) {
  CLI::App app{"Empirical tests of consecutive primes in floor-power "
               "sequences"};
  app.require_subcommand(1);
  app.set_config("--config")->description(
      "key=value configuration file ('#' comments)");
  app.allow_config_extras(false);

  // ---- count ----
  std::string x_str, out_path, checkpoint_path, format = "json";
  double c1 = 1.5, c2 = 1.5;
  unsigned threads = 1;
  bool per_gap = false;
  auto* cmd_count = app.add_subcommand(
      "count", "Count consecutive-prime pairs lying in both sequences");
  cmd_count->configurable(true);
  cmd_count->add_option("--x", x_str, "sieve limit (integer, 1e8 style ok)")
      ->required();
  cmd_count->add_option("--c1", c1, "first exponent, in (1,2)")
      ->required()
      ->check(CLI::Range(1.0, 2.0));
  cmd_count->add_option("--c2", c2, "second exponent, in (1,2)")
      ->required()
      ->check(CLI::Range(1.0, 2.0));
  cmd_count->add_flag("--per-gap", per_gap, "tabulate counts by prime gap");
  cmd_count->add_option("--threads", threads, "sieve worker threads");
  cmd_count->add_option("--checkpoint", checkpoint_path,
                        "checkpoint file for resumable runs");
  cmd_count->add_option("--out", out_path, "output path (default stdout)");
  cmd_count->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // ---- singular ----
  auto* cmd_singular =
      app.add_subcommand("singular", "Singular-series values and tables");
  cmd_singular->require_subcommand(1);
  std::uint64_t sing_h_max = 100, sing_cutoff = pspair::kDefaultPrimeCutoff;
  std::string sing_set, sing_out;
  auto* sing_pair = cmd_singular->add_subcommand(
      "pair", "CSV table of pair values for even h");
  sing_pair->add_option("--h-max", sing_h_max, "largest offset")->required();
  auto* sing_set_cmd =
      cmd_singular->add_subcommand("set", "values for one offset set");
  sing_set_cmd->add_option("offsets", sing_set, "comma-separated offsets")
      ->required();
  cmd_singular->add_option("--cutoff", sing_cutoff, "Euler product cutoff");
  cmd_singular->add_option("--out", sing_out, "output path");

  // ---- verify ----
  auto* cmd_verify =
      app.add_subcommand("verify", "Run the verification suites");
  cmd_verify->require_subcommand(1);
  std::uint64_t avg_h_max = 100000;
  std::string u_grid_str = "1e3,1e4,1e5,1e6,1e7,1e8,1e9";
  std::string k_grid_str = "1,2,4,8,16";
  std::string verify_out;
  auto* verify_avg = cmd_verify->add_subcommand(
      "averages", "singular-series average estimates");
  verify_avg->add_option("--h-max", avg_h_max, "largest h on the grid");
  auto* verify_prop = cmd_verify->add_subcommand(
      "proposition", "weighted-sum asymptotics and decay bounds");
  verify_prop->add_option("--u-grid", u_grid_str, "comma-separated u values");
  verify_prop->add_option("--k-grid", k_grid_str, "comma-separated k values");
  cmd_verify->add_option("--out", verify_out, "output path");

  // ---- predict ----
  std::string px_str;
  double pc1 = 1.5, pc2 = 1.5;
  auto* cmd_predict = app.add_subcommand(
      "predict", "Conjectured main term for a pair count");
  cmd_predict->add_option("--x", px_str, "limit")->required();
  cmd_predict->add_option("--c1", pc1, "first exponent")
      ->required()
      ->check(CLI::Range(1.0, 2.0));
  cmd_predict->add_option("--c2", pc2, "second exponent")
      ->required()
      ->check(CLI::Range(1.0, 2.0));

  // ---- gapmodel ----
  std::string gx_str;
  std::uint64_t gh_max = 50;
  unsigned gthreads = 1;
  std::string gap_out;
  auto* cmd_gapmodel = app.add_subcommand(
      "gapmodel", "Compare gap-count predictions with a sieve histogram");
  cmd_gapmodel->add_option("--x", gx_str, "sieve limit")->required();
  cmd_gapmodel->add_option("--h-max", gh_max, "largest gap");
  cmd_gapmodel->add_option("--threads", gthreads, "sieve worker threads");
  cmd_gapmodel->add_option("--out", gap_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // config errors map to exit 2
  }

  if (cmd_count->parsed()) {
    pspair::PairExperimentConfig cfg;
    cfg.x = parse_extent(x_str);
    cfg.c1 = c1;
    cfg.c2 = c2;
    cfg.per_gap = per_gap;
    cfg.threads = threads;
    cfg.checkpoint_path = checkpoint_path;
    pspair::PairCountRecord rec = pspair::count_ps_pairs(cfg);
    OutStream out(out_path);
    if (format == "json") {
      pspair::write_count_report_json(rec, out.get());
    } else {
      echo_config(out.get(), {{"subcommand", "count"},
                              {"x", std::to_string(cfg.x)},
                              {"c1", fmt(cfg.c1)},
                              {"c2", fmt(cfg.c2)},
                              {"per_gap", cfg.per_gap ? "1" : "0"},
                              {"threads", std::to_string(cfg.threads)}});
      auto& os = out.get();
      os << "count," << rec.count << "\n";
      os << "pi_c1," << rec.pi_c1 << "\n";
      os << "pi_total," << rec.pi_total << "\n";
      os << "main_term," << fmt(rec.main_term) << "\n";
      os << "ratio," << fmt(rec.ratio) << "\n";
      if (cfg.per_gap) pspair::write_per_gap_csv(rec, os);
    }
    return 0;
  }

  if (cmd_singular->parsed()) {
    OutStream out(sing_out);
    if (sing_pair->parsed()) {
      echo_config(out.get(), {{"subcommand", "singular pair"},
                              {"h_max", std::to_string(sing_h_max)}});
      pspair::write_pair_table_csv(sing_h_max, out.get());
    } else {
      pspair::OffsetSet H(parse_offsets(sing_set));
      echo_config(out.get(), {{"subcommand", "singular set"},
                              {"offsets", sing_set},
                              {"cutoff", std::to_string(sing_cutoff)}});
      auto s = pspair::singular_series(H, sing_cutoff);
      auto s0 = pspair::modified_singular_series(H, sing_cutoff);
      auto& os = out.get();
      os << "s," << fmt(s.value) << "," << fmt(s.abs_error) << "\n";
      os << "s0," << fmt(s0.value) << "," << fmt(s0.abs_error) << "\n";
    }
    return 0;
  }

  if (cmd_verify->parsed()) {
    OutStream out(verify_out);
    auto& os = out.get();
    if (verify_avg->parsed()) {
      echo_config(os, {{"subcommand", "verify averages"},
                       {"h_max", std::to_string(avg_h_max)}});
      auto rep = pspair::verify_lemma_averages(avg_h_max);
      pspair::write_averages_csv(rep, os);
      os << "prefix_max_over_median," << fmt(rep.prefix_max_over_median)
         << "\n";
      os << "pair_max_over_median," << fmt(rep.pair_max_over_median) << "\n";
      os << (rep.pass ? "PASS" : "FAIL") << "\n";
      return rep.pass ? 0 : 1;
    }
    echo_config(os, {{"subcommand", "verify proposition"},
                     {"u_grid", u_grid_str},
                     {"k_grid", k_grid_str}});
    auto rep = pspair::verify_proposition(parse_grid(u_grid_str),
                                          parse_grid(k_grid_str));
    pspair::write_proposition_csv(rep, os);
    os << "max_geometric_defect," << fmt(rep.max_geometric_defect) << "\n";
    os << "max_r_residual," << fmt(rep.max_r_residual) << "\n";
    os << "max_s_residual," << fmt(rep.max_s_residual) << "\n";
    for (int fam = 0; fam < 2; ++fam) {
      os << "k_span_" << (fam ? "conj" : "one") << ","
         << fmt(rep.k_span[fam]) << "\n";
      os << "jk_span_" << (fam ? "conj" : "one") << ","
         << fmt(rep.jk_span[fam]) << "\n";
    }
    os << "closed_form," << (rep.closed_form_pass ? "PASS" : "FAIL") << "\n";
    os << "asymptotics," << (rep.asymptotics_pass ? "PASS" : "FAIL") << "\n";
    os << "k_decay," << (rep.k_decay_pass ? "PASS" : "FAIL") << "\n";
    os << "jk_decay," << (rep.jk_decay_pass ? "PASS" : "FAIL") << "\n";
    os << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? 0 : 1;
  }

  if (cmd_predict->parsed()) {
    std::uint64_t x = parse_extent(px_str);
    pspair::PsExponent e1(pc1), e2(pc2);
    echo_config(std::cout, {{"subcommand", "predict"},
                            {"x", std::to_string(x)},
                            {"c1", fmt(pc1)},
                            {"c2", fmt(pc2)}});
    std::cout << "main_term,"
              << fmt(pspair::conjecture_main_term(
                     static_cast<double>(x), e1, e2))
              << "\n";
    return 0;
  }

  // gapmodel
  std::uint64_t x = parse_extent(gx_str);
  OutStream out(gap_out);
  auto& os = out.get();
  echo_config(os, {{"subcommand", "gapmodel"},
                   {"x", std::to_string(x)},
                   {"h_max", std::to_string(gh_max)},
                   {"threads", std::to_string(gthreads)}});
  pspair::GapHistogram hist = pspair::gap_histogram(x, gthreads);
  os << "h,empirical,model,rel_err\n";
  for (std::uint64_t h = 2; h <= gh_max; h += 2) {
    auto it = hist.counts.find(static_cast<std::uint32_t>(h));
    std::uint64_t emp = it == hist.counts.end() ? 0 : it->second;
    double model =
        pspair::gap_count_prediction(h, static_cast<double>(x));
    os << h << "," << emp << "," << fmt(model) << ",";
    if (emp > 0)
      os << fmt((model - static_cast<double>(emp)) /
                static_cast<double>(emp));
    os << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pspair::UndecidableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
