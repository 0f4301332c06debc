#ifndef PRLAB_SIEVE_HPP
#define PRLAB_SIEVE_HPP

/*
 * Segmented sieve of Eratosthenes streaming primes and prime powers over
 * [lo, hi), half-open, in ascending order.
 *
 * Layout: odd-only bitmaps sized to cache (default 256 KiB of bits per
 * segment, i.e. a span of ~4.2M integers).  Base primes up to sqrt(hi) are
 * produced by a plain sieve.
 *
 * Concurrency: segments are independent work units.  With threads > 1 a
 * small worker pool sieves segments out of order into buffers and a reorder
 * window hands them to the consumer strictly ascending, so every downstream
 * accumulation (race counters, sign-change detection) sees the identical
 * event order regardless of worker count.
 *
 * Checkpoint container: the little-endian "PRLB1" block documented in
 * docs/formats.md.  The sieve owns the container format; the payload is an
 * opaque counter block defined by whichever module saved it.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace prlab {

struct SieveOptions {
  std::size_t segment_bytes = 256 * 1024;  // bitmap bytes per segment
  unsigned threads = 0;                    // 0 = auto (capped), 1 = serial
};

// Ordered segment-at-a-time prime producer.
class PrimeStream {
 public:
  // 2 <= lo < hi <= 2^63.  Throws std::invalid_argument on an empty range.
  PrimeStream(std::uint64_t lo, std::uint64_t hi, SieveOptions opt = {});
  ~PrimeStream();
  PrimeStream(const PrimeStream&) = delete;
  PrimeStream& operator=(const PrimeStream&) = delete;

  // Next ascending segment of primes; nullptr when exhausted.  The returned
  // vector is owned by the stream and valid until the next call.
  const std::vector<std::uint64_t>* next_segment(std::uint64_t* seg_lo = nullptr,
                                                 std::uint64_t* seg_hi = nullptr);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct PrimePowerEvent {
  std::uint64_t n;  // = p^m
  std::uint64_t p;
  std::uint32_t m;  // >= 1
  double log_p;     // natural log of p
};

// Every prime in [lo, hi), ascending; returns the count delivered.
template <class CB>
std::uint64_t stream_primes(std::uint64_t lo, std::uint64_t hi, CB&& cb,
                            SieveOptions opt = {}) {
  PrimeStream s(lo, hi, opt);
  std::uint64_t count = 0;
  while (const auto* seg = s.next_segment()) {
    for (std::uint64_t p : *seg) {
      cb(p);
      ++count;
    }
  }
  return count;
}

// All prime powers p^m in [lo, hi) as a sorted list (the m >= 2 part is tiny:
// O(sqrt(hi)) candidates).  Helper shared by stream_prime_powers and the
// race sweep, which merges it against the prime stream itself.
std::vector<PrimePowerEvent> higher_prime_powers(std::uint64_t lo,
                                                 std::uint64_t hi);

// Every n = p^m in [lo, hi), ascending in n; returns the event count.
template <class CB>
std::uint64_t stream_prime_powers(std::uint64_t lo, std::uint64_t hi, CB&& cb,
                                  SieveOptions opt = {}) {
  const std::vector<PrimePowerEvent> higher = higher_prime_powers(lo, hi);
  std::size_t hi_idx = 0;
  PrimeStream s(lo, hi, opt);
  std::uint64_t count = 0;
  while (const auto* seg = s.next_segment()) {
    for (std::uint64_t p : *seg) {
      while (hi_idx < higher.size() && higher[hi_idx].n < p) {
        cb(higher[hi_idx]);
        ++hi_idx;
        ++count;
      }
      cb(PrimePowerEvent{p, p, 1, std::log(static_cast<double>(p))});
      ++count;
    }
  }
  while (hi_idx < higher.size()) {
    cb(higher[hi_idx]);
    ++hi_idx;
    ++count;
  }
  return count;
}

// Simple (non-segmented) sieve; used for base primes and by tests as a
// second implementation at small scale.
std::vector<std::uint64_t> simple_sieve(std::uint64_t limit);  // primes <= limit

// ------------------------------------------------------------ checkpoints --
class CheckpointFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  std::uint64_t position = 0;        // sweep position T0 (a segment boundary)
  std::vector<std::byte> payload;    // module-defined counter block
};

void save_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::string& path);  // throws CheckpointFormatError

}  // namespace prlab

#endif  // PRLAB_SIEVE_HPP
