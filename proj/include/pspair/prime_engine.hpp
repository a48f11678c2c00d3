#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pspair {

// A prime together with its successor prime.
struct ConsecutivePairEvent {
  std::uint64_t p;
  std::uint64_t p_sharp;
  std::uint32_t gap;
  // worker-computed per-prime payloads (e.g. membership bits)
  std::uint8_t payload_p = 0;
  std::uint8_t payload_sharp = 0;
};

struct GapHistogram {
  std::uint64_t limit = 0;
  std::map<std::uint32_t, std::uint64_t> counts;  // gap h -> S_h(x)
};

// All primes <= limit by a plain sieve of Eratosthenes.
std::vector<std::uint32_t> simple_sieve(std::uint32_t limit);

// Primes in [lo, hi), ascending.  Requires 2 <= lo < hi and a window
// no longer than 2^24.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

std::uint64_t prime_count(std::uint64_t x);

struct StreamOptions {
  unsigned threads = 1;
  std::uint64_t segment_len = std::uint64_t(1) << 20;
  // Evaluated by sieve workers for every prime; must be a pure function.
  std::function<std::uint8_t(std::uint64_t)> payload_fn;
  // Resume state: first segment index to sieve and the pending
  // predecessor prime (0 = fresh run starting at p = 2).
  std::uint64_t resume_segment = 0;
  std::uint64_t resume_prev_prime = 0;
  std::uint8_t resume_prev_payload = 0;
  // Consumer-side hook after each fully merged segment; return false
  // to stop early (used for checkpoint/abort).  seg is the index of
  // the segment just completed.
  std::function<bool(std::uint64_t seg)> on_segment_done;
};

using PairCallback = std::function<void(const ConsecutivePairEvent&)>;

// Emits one event per prime p <= x in ascending order; the final
// event's successor may exceed x.  Segments are sieved by a worker
// pool and merged in order by the calling thread, so the callback
// sequence is deterministic for any thread count.
void stream_consecutive_pairs(std::uint64_t x, const StreamOptions& opts,
                              const PairCallback& cb);

GapHistogram gap_histogram(std::uint64_t x, unsigned threads = 1);

void write_gap_histogram_csv(const GapHistogram& hist, std::ostream& os);

// ---- checkpointing ------------------------------------------------

class CheckpointError : public std::runtime_error {
 public:
  explicit CheckpointError(const std::string& what)
      : std::runtime_error(what) {}
};

// Self-describing key=value records with a trailing integrity hash.
struct Checkpoint {
  std::map<std::string, std::string> fields;
};

void save_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint restore_checkpoint(const std::string& path);

std::uint64_t fnv1a(std::string_view data);

}  // namespace pspair
