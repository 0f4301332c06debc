#include "prlab/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

namespace prlab {

std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  const std::size_t n = static_cast<std::size_t>(limit) + 1;
  std::vector<bool> comp(n, false);
  for (std::uint64_t p = 2; p * p <= limit; ++p) {
    if (comp[p]) continue;
    for (std::uint64_t q = p * p; q <= limit; q += p) comp[q] = true;
  }
  for (std::uint64_t p = 2; p <= limit; ++p)
    if (!comp[p]) primes.push_back(p);
  return primes;
}

namespace {

std::uint64_t isqrt64(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Sieve the odd numbers of [lo, hi) into `out` (ascending primes).  `lo` may
// be even; 2 is the caller's business.  base = odd base primes <= sqrt(hi-1).
void sieve_segment(std::uint64_t lo, std::uint64_t hi,
                   const std::vector<std::uint64_t>& base,
                   std::vector<std::uint64_t>& bits_scratch,
                   std::vector<std::uint64_t>& out) {
  out.clear();
  const std::uint64_t first = lo | 1;  // first odd >= lo
  if (first >= hi) return;
  const std::size_t nbits = static_cast<std::size_t>((hi - first + 1) / 2);
  const std::size_t nwords = (nbits + 63) / 64;
  bits_scratch.assign(nwords, 0);

  for (std::uint64_t p : base) {
    std::uint64_t start = p * p;
    if (start >= hi) break;
    if (start < lo) {
      std::uint64_t q = (lo + p - 1) / p;
      if ((q & 1) == 0) ++q;  // odd multiples only
      start = q * p;
    }
    // start is odd (p odd, q odd).  Index within the odd-bitmap.
    for (std::uint64_t n = start; n < hi; n += 2 * p) {
      const std::uint64_t i = (n - first) >> 1;
      bits_scratch[i >> 6] |= std::uint64_t(1) << (i & 63);
    }
  }
  // 1 is not prime.
  if (first == 1) bits_scratch[0] |= 1;

  for (std::size_t w = 0; w < nwords; ++w) {
    std::uint64_t word = ~bits_scratch[w];
    if (w == nwords - 1 && (nbits & 63))
      word &= (std::uint64_t(1) << (nbits & 63)) - 1;
    while (word) {
      const int b = std::countr_zero(word);
      word &= word - 1;
      out.push_back(first + 2 * ((std::uint64_t(w) << 6) + b));
    }
  }
}

}  // namespace

struct PrimeStream::Impl {
  std::uint64_t lo, hi;
  std::uint64_t span;              // integers per segment
  std::uint64_t nseg;
  std::vector<std::uint64_t> base;  // odd base primes
  unsigned threads;

  // Serial state
  std::uint64_t next_seq = 0;
  std::vector<std::uint64_t> bits;
  std::vector<std::uint64_t> current;
  bool two_pending = false;

  // Parallel state
  std::vector<std::thread> pool;
  std::mutex mu;
  std::condition_variable cv_ready, cv_space;
  std::map<std::uint64_t, std::vector<std::uint64_t>> done;
  std::atomic<std::uint64_t> claim{0};
  std::uint64_t consumed = 0;
  std::uint64_t window;
  bool stop = false;

  Impl(std::uint64_t lo_, std::uint64_t hi_, const SieveOptions& opt)
      : lo(lo_), hi(hi_) {
    span = std::max<std::uint64_t>(std::uint64_t(opt.segment_bytes) * 16, 1 << 16);
    nseg = (hi - lo + span - 1) / span;
    const std::uint64_t root = isqrt64(hi - 1);
    for (std::uint64_t p : simple_sieve(root))
      if (p >= 3) base.push_back(p);
    two_pending = (lo <= 2 && 2 < hi);

    threads = opt.threads;
    if (threads == 0) {
      threads = std::min(16u, std::max(1u, std::thread::hardware_concurrency()));
    }
    if (nseg < 2) threads = 1;
    if (threads > 1) {
      window = 2 * threads;
      for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([this] { worker(); });
    }
  }

  ~Impl() {
    {
      std::lock_guard<std::mutex> g(mu);
      stop = true;
    }
    cv_space.notify_all();
    for (auto& th : pool) th.join();
  }

  void bounds(std::uint64_t s, std::uint64_t* a, std::uint64_t* b) const {
    *a = lo + s * span;
    *b = std::min(hi, *a + span);
  }

  void worker() {
    std::vector<std::uint64_t> scratch, primes;
    for (;;) {
      const std::uint64_t s = claim.fetch_add(1);
      if (s >= nseg) return;
      {
        // Keep the reorder window bounded so memory stays O(threads).
        std::unique_lock<std::mutex> g(mu);
        cv_space.wait(g, [&] { return stop || s < consumed + window; });
        if (stop) return;
      }
      std::uint64_t a, b;
      bounds(s, &a, &b);
      sieve_segment(a, b, base, scratch, primes);
      {
        std::lock_guard<std::mutex> g(mu);
        done.emplace(s, std::move(primes));
        primes = {};
      }
      cv_ready.notify_all();
    }
  }

  const std::vector<std::uint64_t>* next(std::uint64_t* a, std::uint64_t* b) {
    if (next_seq >= nseg) return nullptr;
    std::uint64_t sa, sb;
    bounds(next_seq, &sa, &sb);
    if (threads <= 1) {
      sieve_segment(sa, sb, base, bits, current);
    } else {
      std::unique_lock<std::mutex> g(mu);
      cv_ready.wait(g, [&] { return done.count(next_seq) != 0; });
      current = std::move(done[next_seq]);
      done.erase(next_seq);
      consumed = next_seq + 1;
      g.unlock();
      cv_space.notify_all();
    }
    if (two_pending) {
      current.insert(current.begin(), 2);
      two_pending = false;
    }
    if (a) *a = sa;
    if (b) *b = sb;
    ++next_seq;
    return &current;
  }
};

PrimeStream::PrimeStream(std::uint64_t lo, std::uint64_t hi, SieveOptions opt) {
  if (hi <= lo) throw std::invalid_argument("PrimeStream: empty range");
  if (lo < 2) lo = 2;
  impl_ = std::make_unique<Impl>(lo, hi, opt);
}

PrimeStream::~PrimeStream() = default;

const std::vector<std::uint64_t>* PrimeStream::next_segment(
    std::uint64_t* seg_lo, std::uint64_t* seg_hi) {
  return impl_->next(seg_lo, seg_hi);
}

std::vector<PrimePowerEvent> higher_prime_powers(std::uint64_t lo,
                                                 std::uint64_t hi) {
  std::vector<PrimePowerEvent> events;
  if (hi <= 4) return events;
  const std::uint64_t root = isqrt64(hi - 1);
  for (std::uint64_t p : simple_sieve(root)) {
    const double lp = std::log(static_cast<double>(p));
    // Smallest power >= lo with m >= 2.
    std::uint64_t n = p * p;
    std::uint32_t m = 2;
    while (n < lo) {
      if (n > (hi - 1) / p) break;  // next step would overflow past hi anyway
      n *= p;
      ++m;
    }
    while (n >= lo && n < hi) {
      events.push_back(PrimePowerEvent{n, p, m, lp});
      if (n > (hi - 1) / p) break;
      n *= p;
      ++m;
    }
  }
  std::sort(events.begin(), events.end(),
            [](const PrimePowerEvent& x, const PrimePowerEvent& y) {
              return x.n < y.n;
            });
  return events;
}

// ------------------------------------------------------------ checkpoints --
namespace {

constexpr char kMagic[5] = {'P', 'R', 'L', 'B', '1'};
constexpr std::uint8_t kVersion = 1;

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

void put_u64(std::vector<std::uint8_t>& v, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) v.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= std::uint64_t(p[i]) << (8 * i);
  return x;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::vector<std::uint8_t> buf;
  buf.insert(buf.end(), kMagic, kMagic + 5);
  buf.push_back(kVersion);
  buf.push_back(0);
  buf.push_back(0);
  put_u64(buf, cp.position);
  put_u64(buf, cp.payload.size());
  const std::uint8_t* pay =
      reinterpret_cast<const std::uint8_t*>(cp.payload.data());
  buf.insert(buf.end(), pay, pay + cp.payload.size());
  put_u64(buf, fnv1a(buf.data(), buf.size()));

  // Write to a temp file then rename, so an interrupted save never leaves a
  // truncated checkpoint in place.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointFormatError("cannot open checkpoint for writing: " + path);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw CheckpointFormatError("checkpoint write failed: " + path);
  }
  std::remove(path.c_str());
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw CheckpointFormatError("checkpoint rename failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointFormatError("cannot open checkpoint: " + path);
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (buf.size() < 32) throw CheckpointFormatError("checkpoint truncated");
  if (std::memcmp(buf.data(), kMagic, 5) != 0)
    throw CheckpointFormatError("bad checkpoint magic");
  if (buf[5] != kVersion)
    throw CheckpointFormatError("unsupported checkpoint version");
  const std::uint64_t pos = get_u64(buf.data() + 8);
  const std::uint64_t n = get_u64(buf.data() + 16);
  if (buf.size() != 24 + n + 8)
    throw CheckpointFormatError("checkpoint length mismatch");
  const std::uint64_t want = get_u64(buf.data() + 24 + n);
  if (fnv1a(buf.data(), 24 + n) != want)
    throw CheckpointFormatError("checkpoint hash mismatch");
  Checkpoint cp;
  cp.position = pos;
  cp.payload.resize(n);
  std::memcpy(cp.payload.data(), buf.data() + 24, n);
  return cp;
}

}  // namespace prlab
