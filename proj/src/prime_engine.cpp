#include "pspair/prime_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace pspair {

std::vector<std::uint32_t> simple_sieve(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> comp(limit + 1, false);
  for (std::uint64_t p = 2; p * p <= limit; ++p)
    if (!comp[p])
      for (std::uint64_t q = p * p; q <= limit; q += p) comp[q] = true;
  for (std::uint32_t n = 2; n <= limit; ++n)
    if (!comp[n]) out.push_back(n);
  return out;
}

namespace {

// Sieve [lo, hi) against the given base primes (covering sqrt(hi)).
std::vector<std::uint64_t> sieve_window(
    std::uint64_t lo, std::uint64_t hi,
    const std::vector<std::uint32_t>& base) {
  std::vector<bool> comp(hi - lo, false);
  for (std::uint32_t p : base) {
    std::uint64_t pp = std::uint64_t(p) * p;
    if (pp >= hi) break;
    std::uint64_t start = pp > lo ? pp : ((lo + p - 1) / p) * p;
    for (std::uint64_t q = start; q < hi; q += p) comp[q - lo] = true;
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = lo < 2 ? 2 : lo; n < hi; ++n)
    if (!comp[n - lo]) out.push_back(n);
  return out;
}

std::vector<std::uint32_t> base_primes_for(std::uint64_t hi) {
  auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(hi)));
  while (std::uint64_t(root) * root < hi) ++root;
  return simple_sieve(root);
}

}  // namespace

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2 || lo >= hi)
    throw std::invalid_argument("primes_in_range: need 2 <= lo < hi");
  if (hi - lo > (std::uint64_t(1) << 24))
    throw std::invalid_argument("primes_in_range: window too long");
  return sieve_window(lo, hi, base_primes_for(hi));
}

std::uint64_t prime_count(std::uint64_t x) {
  if (x < 2) return 0;
  auto base = base_primes_for(x + 1);
  std::uint64_t n = 0;
  const std::uint64_t len = std::uint64_t(1) << 22;
  for (std::uint64_t lo = 2; lo <= x; lo += len) {
    std::uint64_t hi = std::min(x + 1, lo + len);
    n += sieve_window(lo, hi, base).size();
  }
  return n;
}

namespace {

struct SegmentResult {
  bool ready = false;
  std::vector<std::uint64_t> primes;
  std::vector<std::uint8_t> payload;
};

// Ordered merge of worker-sieved segments.
class SegmentPool {
 public:
  SegmentPool(std::uint64_t first_seg, std::uint64_t last_seg,
              std::uint64_t seg_len, unsigned threads,
              const std::vector<std::uint32_t>& base,
              const std::function<std::uint8_t(std::uint64_t)>& payload_fn)
      : first_(first_seg),
        last_(last_seg),
        len_(seg_len),
        next_(first_seg),
        consume_(first_seg),
        base_(base),
        payload_(payload_fn),
        max_pending_(4 * threads + 4) {
    results_.resize(last_seg - first_seg + 1);
    for (unsigned i = 0; i < threads; ++i)
      workers_.emplace_back([this] { work(); });
  }

  ~SegmentPool() {
    stop_.store(true);
    cv_space_.notify_all();
    for (auto& t : workers_) t.join();
  }

  // Blocks until segment seg is sieved; seg must be consumed in order.
  SegmentResult take(std::uint64_t seg) {
    std::unique_lock<std::mutex> lk(mu_);
    cv_ready_.wait(lk, [&] { return results_[seg - first_].ready; });
    SegmentResult r = std::move(results_[seg - first_]);
    consume_ = seg + 1;
    cv_space_.notify_all();
    return r;
  }

  static std::uint64_t seg_lo(std::uint64_t seg, std::uint64_t len) {
    return 2 + seg * len;
  }

 private:
  void work() {
    for (;;) {
      std::uint64_t seg = next_.fetch_add(1);
      if (seg > last_ || stop_.load()) return;
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_space_.wait(lk, [&] {
          return stop_.load() || seg < consume_ + max_pending_;
        });
        if (stop_.load()) return;
      }
      std::uint64_t lo = seg_lo(seg, len_);
      SegmentResult r;
      r.primes = sieve_window(lo, lo + len_, base_);
      if (payload_) {
        r.payload.reserve(r.primes.size());
        for (std::uint64_t p : r.primes) r.payload.push_back(payload_(p));
      }
      r.ready = true;
      {
        std::lock_guard<std::mutex> lk(mu_);
        results_[seg - first_] = std::move(r);
      }
      cv_ready_.notify_all();
    }
  }

  std::uint64_t first_, last_, len_;
  std::atomic<std::uint64_t> next_;
  std::uint64_t consume_;
  const std::vector<std::uint32_t>& base_;
  std::function<std::uint8_t(std::uint64_t)> payload_;
  std::uint64_t max_pending_;
  std::vector<SegmentResult> results_;
  std::mutex mu_;
  std::condition_variable cv_ready_, cv_space_;
  std::atomic<bool> stop_{false};
  std::vector<std::thread> workers_;
};

}  // namespace

void stream_consecutive_pairs(std::uint64_t x, const StreamOptions& opts,
                              const PairCallback& cb) {
  if (x < 2) throw std::invalid_argument("stream_consecutive_pairs: x >= 2");
  const std::uint64_t len = opts.segment_len;
  // Sieve far enough that the successor of the largest prime <= x is
  // always inside the planned range (gaps below 10^12 are < 1500).
  const std::uint64_t horizon = x + 4 * len;
  const std::uint64_t last_seg = (horizon - 2) / len;
  unsigned threads = opts.threads == 0 ? 1 : opts.threads;
  auto base = base_primes_for(2 + (last_seg + 1) * len);

  std::uint64_t prev = opts.resume_prev_prime;
  std::uint8_t prev_pl = opts.resume_prev_payload;
  bool done = false;

  SegmentPool pool(opts.resume_segment, last_seg, len, threads, base,
                   opts.payload_fn);
  for (std::uint64_t seg = opts.resume_segment; seg <= last_seg && !done;
       ++seg) {
    SegmentResult r = pool.take(seg);
    for (std::size_t i = 0; i < r.primes.size(); ++i) {
      std::uint64_t q = r.primes[i];
      std::uint8_t pl = r.payload.empty() ? 0 : r.payload[i];
      if (prev != 0) {
        ConsecutivePairEvent ev;
        ev.p = prev;
        ev.p_sharp = q;
        ev.gap = static_cast<std::uint32_t>(q - prev);
        ev.payload_p = prev_pl;
        ev.payload_sharp = pl;
        cb(ev);
      }
      if (q > x) {
        done = true;
        break;
      }
      prev = q;
      prev_pl = pl;
    }
    if (!done && opts.on_segment_done && !opts.on_segment_done(seg)) return;
  }
  if (!done)
    throw std::runtime_error("stream_consecutive_pairs: horizon exhausted");
}

GapHistogram gap_histogram(std::uint64_t x, unsigned threads) {
  if (x < 3) throw std::invalid_argument("gap_histogram: x >= 3");
  GapHistogram h;
  h.limit = x;
  StreamOptions opts;
  opts.threads = threads;
  stream_consecutive_pairs(
      x, opts, [&](const ConsecutivePairEvent& ev) { ++h.counts[ev.gap]; });
  return h;
}

void write_gap_histogram_csv(const GapHistogram& hist, std::ostream& os) {
  os << "h,count\n";
  for (const auto& [h, c] : hist.counts) os << h << "," << c << "\n";
}

// ---- checkpointing ------------------------------------------------

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
  std::ostringstream body;
  body << "# pspair checkpoint v1\n";
  for (const auto& [k, v] : cp.fields) body << k << "=" << v << "\n";
  std::string s = body.str();
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(s)));
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw CheckpointError("cannot write checkpoint: " + path);
    out << s << "hash=" << hash << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw CheckpointError("cannot rename checkpoint into place: " + path);
}

Checkpoint restore_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  std::string line, body;
  std::string hash_line;
  Checkpoint cp;
  bool saw_hash = false;
  while (std::getline(in, line)) {
    if (saw_hash) throw CheckpointError("trailing data after hash: " + path);
    if (line.rfind("hash=", 0) == 0) {
      hash_line = line.substr(5);
      saw_hash = true;
      continue;
    }
    body += line;
    body += "\n";
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CheckpointError("malformed checkpoint line: " + line);
    cp.fields[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!saw_hash) throw CheckpointError("checkpoint truncated: " + path);
  char expect[32];
  std::snprintf(expect, sizeof expect, "%016llx",
                static_cast<unsigned long long>(fnv1a(body)));
  if (hash_line != expect)
    throw CheckpointError("checkpoint integrity hash mismatch: " + path);
  return cp;
}

}  // namespace pspair
