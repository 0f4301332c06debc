#include "prlab/race.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace prlab {

const char* to_string(CountFn f) {
  switch (f) {
    case CountFn::pi: return "pi";
    case CountFn::theta: return "theta";
    case CountFn::psi: return "psi";
    case CountFn::Pi: return "Pi";
    case CountFn::pi2: return "pi2";
  }
  return "?";
}

std::optional<CountFn> count_fn_from_string(const std::string& s) {
  if (s == "pi") return CountFn::pi;
  if (s == "theta") return CountFn::theta;
  if (s == "psi") return CountFn::psi;
  if (s == "Pi" || s == "PI" || s == "bigpi") return CountFn::Pi;
  if (s == "pi2") return CountFn::pi2;
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// All semiprimes p*q <= T (p <= q), ascending.  Enumeration: one prime
// stream to T/2 for the larger factor q, inner loop over the
// sqrt(T)-bounded smaller factor p.
std::vector<std::uint64_t> semiprimes_up_to(std::uint64_t T) {
  std::vector<std::uint64_t> out;
  if (T < 4) return out;
  std::vector<std::uint64_t> small = simple_sieve(
      static_cast<std::uint64_t>(std::sqrt(static_cast<double>(T))) + 1);
  while (!small.empty() && small.back() * small.back() > T) small.pop_back();
  stream_primes(2, T / 2 + 1, [&](std::uint64_t q) {
    for (std::uint64_t p : small) {
      if (p > q) break;
      const std::uint64_t n = p * q;
      if (n > T) break;
      out.push_back(n);
    }
  });
  std::sort(out.begin(), out.end());
  return out;
}

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Per-race live state during a sweep.
struct RaceState {
  RaceSeries series;
  std::vector<std::int8_t> weight;  // per class index: +1 (A), -1 (B), 0
  bool integer_valued = false;      // pi / pi2 races carry an exact int delta
  std::int64_t delta_int = 0;
  KahanSum delta_f;
  int last_nonzero_sign = 0;
  std::uint64_t prev_x = 1;  // start of the current constant-delta span
  std::uint64_t next_sample = 2;

  double delta() const {
    return integer_valued ? static_cast<double>(delta_int) : delta_f.value();
  }
};

}  // namespace

// -------------------------------------------------------------- sweep ------

namespace {

constexpr std::uint8_t kNoValue = 0, kHasValue = 1;

void put_u64(std::vector<std::byte>& v, std::uint64_t x) {
  for (int i = 0; i < 8; ++i)
    v.push_back(static_cast<std::byte>((x >> (8 * i)) & 0xff));
}
void put_i64(std::vector<std::byte>& v, std::int64_t x) {
  put_u64(v, static_cast<std::uint64_t>(x));
}
void put_f64(std::vector<std::byte>& v, double d) {
  std::uint64_t x;
  std::memcpy(&x, &d, 8);
  put_u64(v, x);
}
void put_u8(std::vector<std::byte>& v, std::uint8_t x) {
  v.push_back(static_cast<std::byte>(x));
}

struct Reader {
  const std::byte* p;
  const std::byte* end;
  void need(std::size_t n) {
    if (static_cast<std::size_t>(end - p) < n)
      throw CheckpointFormatError("checkpoint payload truncated");
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i)
      x |= static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(p[i]))
           << (8 * i);
    p += 8;
    return x;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() {
    const std::uint64_t x = u64();
    double d;
    std::memcpy(&d, &x, 8);
    return d;
  }
  std::uint8_t u8() {
    need(1);
    return std::to_integer<std::uint8_t>(*p++);
  }
};

std::vector<std::byte> serialize_state(const CountVector& counts,
                                       const std::vector<RaceState>& races) {
  std::vector<std::byte> out;
  put_u64(out, counts.k);
  put_u64(out, counts.x);
  put_u64(out, counts.pi_total);
  put_u64(out, counts.pi2_total);
  put_u64(out, counts.pi2_nonunit);
  put_u64(out, counts.classes.size());
  for (const auto& c : counts.classes) {
    put_u64(out, c.pi);
    put_f64(out, c.theta.raw_sum());
    put_f64(out, c.theta.raw_comp());
    put_f64(out, c.psi.raw_sum());
    put_f64(out, c.psi.raw_comp());
    put_f64(out, c.Pi.raw_sum());
    put_f64(out, c.Pi.raw_comp());
    put_u64(out, c.pi2);
  }
  put_u64(out, races.size());
  for (const auto& r : races) {
    put_u8(out, static_cast<std::uint8_t>(r.series.spec.f));
    put_u64(out, r.series.spec.A.size());
    for (auto a : r.series.spec.A) put_u64(out, a);
    put_u64(out, r.series.spec.B.size());
    for (auto b : r.series.spec.B) put_u64(out, b);
    put_i64(out, r.delta_int);
    put_f64(out, r.delta_f.raw_sum());
    put_f64(out, r.delta_f.raw_comp());
    put_u64(out, r.series.sign_changes);
    put_u8(out, r.series.first_negative ? kHasValue : kNoValue);
    put_u64(out, r.series.first_negative.value_or(0));
    put_u8(out, r.series.first_positive ? kHasValue : kNoValue);
    put_u64(out, r.series.first_positive.value_or(0));
    put_u8(out, static_cast<std::uint8_t>(r.last_nonzero_sign + 1));
    put_u64(out, r.prev_x);
    put_u64(out, r.next_sample);
    put_u64(out, r.series.lead_count);
    put_f64(out, r.series.lead_log_measure.raw_sum());
    put_f64(out, r.series.lead_log_measure.raw_comp());
    put_u64(out, r.series.samples.size());
    for (const auto& s : r.series.samples) {
      put_u64(out, s.first);
      put_f64(out, s.second);
    }
  }
  return out;
}

void restore_state(const std::vector<std::byte>& payload, CountVector* counts,
                   std::vector<RaceState>* races) {
  Reader rd{payload.data(), payload.data() + payload.size()};
  if (rd.u64() != counts->k)
    throw CheckpointFormatError("checkpoint modulus mismatch");
  counts->x = rd.u64();
  counts->pi_total = rd.u64();
  counts->pi2_total = rd.u64();
  counts->pi2_nonunit = rd.u64();
  if (rd.u64() != counts->classes.size())
    throw CheckpointFormatError("checkpoint class-count mismatch");
  for (auto& c : counts->classes) {
    c.pi = rd.u64();
    double s = rd.f64(), comp = rd.f64();
    c.theta.set_raw(s, comp);
    s = rd.f64();
    comp = rd.f64();
    c.psi.set_raw(s, comp);
    s = rd.f64();
    comp = rd.f64();
    c.Pi.set_raw(s, comp);
    c.pi2 = rd.u64();
  }
  if (rd.u64() != races->size())
    throw CheckpointFormatError("checkpoint race-count mismatch");
  for (auto& r : *races) {
    if (rd.u8() != static_cast<std::uint8_t>(r.series.spec.f))
      throw CheckpointFormatError("checkpoint race mismatch (function)");
    auto read_set = [&](const std::vector<std::uint32_t>& want) {
      if (rd.u64() != want.size())
        throw CheckpointFormatError("checkpoint race mismatch (classes)");
      for (auto a : want)
        if (rd.u64() != a)
          throw CheckpointFormatError("checkpoint race mismatch (classes)");
    };
    read_set(r.series.spec.A);
    read_set(r.series.spec.B);
    r.delta_int = rd.i64();
    const double s = rd.f64(), comp = rd.f64();
    r.delta_f.set_raw(s, comp);
    r.series.sign_changes = rd.u64();
    std::uint8_t has = rd.u8();
    std::uint64_t v = rd.u64();
    r.series.first_negative =
        has ? std::optional<std::uint64_t>(v) : std::nullopt;
    has = rd.u8();
    v = rd.u64();
    r.series.first_positive =
        has ? std::optional<std::uint64_t>(v) : std::nullopt;
    r.last_nonzero_sign = static_cast<int>(rd.u8()) - 1;
    r.prev_x = rd.u64();
    r.next_sample = rd.u64();
    r.series.lead_count = rd.u64();
    const double ms = rd.f64(), mc = rd.f64();
    r.series.lead_log_measure.set_raw(ms, mc);
    r.series.samples.resize(rd.u64());
    for (auto& sm : r.series.samples) {
      sm.first = rd.u64();
      sm.second = rd.f64();
    }
  }
}

}  // namespace

SweepResult sweep(const ResidueSystem& sys, std::uint64_t T,
                  const std::vector<RaceSpec>& race_specs,
                  const SweepOptions& opt) {
  if (T < 2) throw std::invalid_argument("sweep: T must be >= 2");

  SweepOptions o = opt;
  SweepResult res;
  res.counts.k = sys.k;
  res.counts.classes.assign(sys.reduced.size(), ClassCounts{});

  std::vector<RaceState> states(race_specs.size());
  for (std::size_t i = 0; i < race_specs.size(); ++i) {
    RaceState& st = states[i];
    st.series.spec = race_specs[i];
    st.series.k = sys.k;
    st.series.T = T;
    st.weight.assign(sys.reduced.size(), 0);
    const auto& spec = race_specs[i];
    if (spec.A.empty() || spec.B.empty())
      throw std::invalid_argument("sweep: race classes must be nonempty");
    for (auto a : spec.A) {
      const auto idx = sys.index_of(a);
      if (idx == ResidueSystem::npos)
        throw std::invalid_argument("sweep: race class is not a unit");
      if (st.weight[idx] != 0)
        throw std::invalid_argument("sweep: race classes must be distinct");
      st.weight[idx] = +1;
    }
    for (auto b : spec.B) {
      const auto idx = sys.index_of(b);
      if (idx == ResidueSystem::npos)
        throw std::invalid_argument("sweep: race class is not a unit");
      if (st.weight[idx] != 0)
        throw std::invalid_argument("sweep: race classes must be distinct");
      st.weight[idx] = -1;
    }
    st.integer_valued =
        spec.f == CountFn::pi || spec.f == CountFn::pi2;
    if (spec.f == CountFn::pi2) o.with_pi2 = true;
    if (spec.f == CountFn::theta || spec.f == CountFn::psi ||
        spec.f == CountFn::Pi)
      o.with_prime_powers = true;
  }

  std::uint64_t start_x = 1;  // counts complete through start_x
  if (o.resume) {
    if (o.checkpoint_path.empty())
      throw std::invalid_argument("sweep: resume requires a checkpoint path");
    const Checkpoint cp = load_checkpoint(o.checkpoint_path);
    restore_state(cp.payload, &res.counts, &states);
    start_x = cp.position;
    if (start_x >= T) {
      // Nothing left to sweep; close out below.
    }
  }

  // Event sources.
  std::vector<PrimePowerEvent> powers;
  std::size_t power_idx = 0;
  if (o.with_prime_powers && start_x < T) {
    powers = higher_prime_powers(start_x + 1, T + 1);
  }
  std::vector<std::uint64_t> semis;
  std::size_t semi_idx = 0;
  if (o.with_pi2 && start_x < T) {
    semis = semiprimes_up_to(T);
    semis.erase(semis.begin(),
                std::upper_bound(semis.begin(), semis.end(), start_x));
  }

  // Race bookkeeping on one event.
  auto touch_race = [&](RaceState& st, std::uint64_t n, int w, double fw) {
    // Close the constant span [prev_x, n).
    const double cur = st.delta();
    if (cur > 0.0) {
      st.series.lead_count += n - st.prev_x;
      const std::uint64_t lo = std::max<std::uint64_t>(st.prev_x, 2);
      if (n > lo)
        st.series.lead_log_measure.add(
            std::log(static_cast<double>(n) / static_cast<double>(lo)));
    }
    st.prev_x = n;
    if (st.integer_valued)
      st.delta_int += w;
    else
      st.delta_f.add(fw);
    const int s = sign_of(st.delta());
    bool crossing = false;
    if (s != 0) {
      if (st.last_nonzero_sign != 0 && s != st.last_nonzero_sign) {
        ++st.series.sign_changes;
        crossing = true;
      }
      if (st.last_nonzero_sign == 0) crossing = true;  // first sign ever
      st.last_nonzero_sign = s;
      if (s < 0 && !st.series.first_negative) {
        st.series.first_negative = n;
        crossing = true;
      }
      if (s > 0 && !st.series.first_positive) {
        st.series.first_positive = n;
        crossing = true;
      }
    }
    // Full-resolution sample at each detected crossing, in addition to the
    // geometric schedule (which has already emitted everything below n).
    if (crossing &&
        (st.series.samples.empty() || st.series.samples.back().first < n))
      st.series.samples.emplace_back(n, st.delta());
  };

  // Geometric sampling: record delta at x for every race whose schedule hits x.
  auto emit_samples_before = [&](std::uint64_t n) {
    for (auto& st : states) {
      while (st.next_sample < n && st.next_sample <= T) {
        if (st.series.samples.empty() ||
            st.series.samples.back().first < st.next_sample)
          st.series.samples.emplace_back(st.next_sample, st.delta());
        std::uint64_t nx = static_cast<std::uint64_t>(
            std::ceil(static_cast<double>(st.next_sample) *
                      (1.0 + o.sample_ratio)));
        st.next_sample = std::max(st.next_sample + 1, nx);
      }
    }
  };

  auto on_prime = [&](std::uint64_t p) {
    emit_samples_before(p);
    ++res.counts.pi_total;
    const std::uint32_t idx = sys.index_of(p);
    if (idx == ResidueSystem::npos) return;  // p | k: in no reduced class
    auto& c = res.counts.classes[idx];
    ++c.pi;
    double lp = 0.0;
    if (o.with_prime_powers) {
      lp = std::log(static_cast<double>(p));
      c.theta.add(lp);
      c.psi.add(lp);
      c.Pi.add(1.0);
    }
    for (auto& st : states) {
      const int w = st.weight[idx];
      if (w == 0) continue;
      switch (st.series.spec.f) {
        case CountFn::pi:
          touch_race(st, p, w, 0.0);
          break;
        case CountFn::theta:
        case CountFn::psi:
          touch_race(st, p, 0, w * lp);
          break;
        case CountFn::Pi:
          touch_race(st, p, 0, static_cast<double>(w));
          break;
        case CountFn::pi2:
          break;
      }
    }
  };

  auto on_power = [&](const PrimePowerEvent& e) {
    emit_samples_before(e.n);
    const std::uint32_t idx = sys.index_of(e.n);
    if (idx == ResidueSystem::npos) return;
    auto& c = res.counts.classes[idx];
    c.psi.add(e.log_p);
    c.Pi.add(1.0 / static_cast<double>(e.m));
    for (auto& st : states) {
      const int w = st.weight[idx];
      if (w == 0) continue;
      if (st.series.spec.f == CountFn::psi)
        touch_race(st, e.n, 0, w * e.log_p);
      else if (st.series.spec.f == CountFn::Pi)
        touch_race(st, e.n, 0, w / static_cast<double>(e.m));
    }
  };

  auto on_semiprime = [&](std::uint64_t n) {
    emit_samples_before(n);
    ++res.counts.pi2_total;
    const std::uint32_t idx = sys.index_of(n);
    if (idx == ResidueSystem::npos) {
      ++res.counts.pi2_nonunit;
      return;
    }
    ++res.counts.classes[idx].pi2;
    for (auto& st : states) {
      const int w = st.weight[idx];
      if (w != 0 && st.series.spec.f == CountFn::pi2)
        touch_race(st, n, w, 0.0);
    }
  };

  const bool track_powers = o.with_prime_powers;
  if (start_x < T) {
    PrimeStream stream(start_x + 1, T + 1, o.sieve);
    std::uint64_t seg_lo = 0, seg_hi = 0;
    std::uint64_t since_save = 0;
    while (const auto* seg = stream.next_segment(&seg_lo, &seg_hi)) {
      for (std::uint64_t p : *seg) {
        if (track_powers)
          while (power_idx < powers.size() && powers[power_idx].n < p)
            on_power(powers[power_idx++]);
        while (semi_idx < semis.size() && semis[semi_idx] <= p) {
          // A semiprime can equal a prime power (p^2) but never a prime.
          if (track_powers)
            while (power_idx < powers.size() &&
                   powers[power_idx].n <= semis[semi_idx])
              on_power(powers[power_idx++]);
          on_semiprime(semis[semi_idx++]);
        }
        on_prime(p);
      }
      // Segment end: flush events below seg_hi so the checkpoint position is
      // a clean boundary (counts complete through seg_hi - 1).
      if (track_powers)
        while (power_idx < powers.size() && powers[power_idx].n < seg_hi)
          on_power(powers[power_idx++]);
      while (semi_idx < semis.size() && semis[semi_idx] < seg_hi) {
        if (track_powers)
          while (power_idx < powers.size() &&
                 powers[power_idx].n <= semis[semi_idx])
            on_power(powers[power_idx++]);
        on_semiprime(semis[semi_idx++]);
      }
      res.counts.x = seg_hi - 1;
      since_save += seg_hi - seg_lo;
      if (!o.checkpoint_path.empty() && o.save_interval > 0 &&
          since_save >= o.save_interval && res.counts.x < T) {
        Checkpoint cp;
        cp.position = res.counts.x;
        cp.payload = serialize_state(res.counts, states);
        save_checkpoint(o.checkpoint_path, cp);
        since_save = 0;
      }
    }
  }

  // Final checkpoint at x = T, written before the close-out below: the
  // serialized state must be the clean mid-sweep state (no forced sample at
  // T, spans still open) so a resumed run continues bit-identically.
  if (!o.checkpoint_path.empty()) {
    res.counts.x = T;
    Checkpoint cp;
    cp.position = T;
    cp.payload = serialize_state(res.counts, states);
    save_checkpoint(o.checkpoint_path, cp);
  }

  // Final samples and span close-out at x = T.
  for (auto& st : states) {
    while (st.next_sample <= T) {
      if (st.series.samples.empty() ||
          st.series.samples.back().first < st.next_sample)
        st.series.samples.emplace_back(st.next_sample, st.delta());
      std::uint64_t nx = static_cast<std::uint64_t>(std::ceil(
          static_cast<double>(st.next_sample) * (1.0 + o.sample_ratio)));
      st.next_sample = std::max(st.next_sample + 1, nx);
    }
    const double cur = st.delta();
    if (cur > 0.0) {
      st.series.lead_count += T - st.prev_x + 1;
      const std::uint64_t lo = std::max<std::uint64_t>(st.prev_x, 2);
      if (T > lo)
        st.series.lead_log_measure.add(
            std::log(static_cast<double>(T) / static_cast<double>(lo)));
    }
    st.prev_x = T + 1;
    st.series.final_delta = cur;
    if (st.series.samples.empty() || st.series.samples.back().first < T)
      st.series.samples.emplace_back(T, cur);
  }
  res.counts.x = T;

  res.races.reserve(states.size());
  for (auto& st : states) res.races.push_back(std::move(st.series));
  return res;
}

std::uint64_t sign_changes(const RaceSeries& s) { return s.sign_changes; }

LeadDensity lead_density(const RaceSeries& s) {
  LeadDensity d;
  d.numerator = s.lead_count;
  d.denominator = s.T;
  return d;
}

LogDensity log_density(const RaceSeries& s) {
  LogDensity d;
  const double measure = s.lead_log_measure.value();
  d.literal = measure / static_cast<double>(s.T);
  d.standard = measure / std::log(static_cast<double>(s.T));
  return d;
}

std::optional<std::uint64_t> find_ordering(
    const ResidueSystem& sys, const std::vector<std::uint32_t>& perm,
    std::uint64_t x_start, std::uint64_t x_end, const SieveOptions& sieve) {
  if (perm.size() < 2 || perm.size() > sys.euler_phi)
    throw std::invalid_argument("find_ordering: need 2..phi(k) classes");
  std::vector<std::uint32_t> idx(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    idx[i] = sys.index_of(perm[i]);
    if (idx[i] == ResidueSystem::npos)
      throw std::invalid_argument("find_ordering: class is not a unit");
    for (std::size_t j = 0; j < i; ++j)
      if (idx[j] == idx[i])
        throw std::invalid_argument("find_ordering: classes must be distinct");
  }
  if (x_end < x_start || x_end < 2) return std::nullopt;
  x_start = std::max<std::uint64_t>(x_start, 2);

  std::vector<std::uint64_t> counts(sys.reduced.size(), 0);
  auto satisfied = [&] {
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
      if (counts[idx[i]] <= counts[idx[i + 1]]) return false;
    return true;
  };

  std::optional<std::uint64_t> found;
  std::uint64_t span_start = 2;  // ordering state is constant on [span_start, next event)
  bool state = satisfied();      // vacuously false with all counts zero
  PrimeStream stream(2, x_end + 1, sieve);
  while (const auto* seg = stream.next_segment()) {
    for (std::uint64_t p : *seg) {
      // Span [span_start, p): does it contain an m in [x_start, x_end]?
      if (state) {
        const std::uint64_t m = std::max(span_start, x_start);
        if (m < p && m <= x_end) return m;
      }
      const std::uint32_t ci = sys.index_of(p);
      if (ci != ResidueSystem::npos) {
        bool relevant = false;
        for (auto i : idx)
          if (i == ci) {
            relevant = true;
            break;
          }
        ++counts[ci];
        if (relevant) {
          state = satisfied();
          span_start = p;
        }
      }
    }
  }
  if (state) {
    const std::uint64_t m = std::max(span_start, x_start);
    if (m <= x_end) return m;
  }
  return found;
}

std::vector<EVectorSample> e_vector(const ResidueSystem& sys,
                                    const std::vector<std::uint32_t>& classes,
                                    std::vector<std::uint64_t> xs,
                                    const SieveOptions& sieve) {
  for (auto x : xs)
    if (x < 2) throw std::invalid_argument("e_vector: x must be >= 2");
  std::vector<std::uint32_t> idx(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    idx[i] = sys.index_of(classes[i]);
    if (idx[i] == ResidueSystem::npos)
      throw std::invalid_argument("e_vector: class is not a unit");
  }
  std::sort(xs.begin(), xs.end());
  std::vector<EVectorSample> out;
  if (xs.empty()) return out;

  std::vector<std::uint64_t> counts(sys.reduced.size(), 0);
  std::uint64_t pi_total = 0;
  std::size_t xi = 0;
  const double phi = static_cast<double>(sys.euler_phi);

  auto emit_through = [&](std::uint64_t n) {
    // All primes < n are accumulated; xs in [last, n) get these counts.
    while (xi < xs.size() && xs[xi] < n) {
      EVectorSample s;
      s.x = xs[xi];
      const double lx = std::log(static_cast<double>(s.x));
      const double sx = std::sqrt(static_cast<double>(s.x));
      for (auto id : idx)
        s.components.push_back(
            lx / sx *
            (phi * static_cast<double>(counts[id]) -
             static_cast<double>(pi_total)));
      out.push_back(std::move(s));
      ++xi;
    }
  };

  PrimeStream stream(2, xs.back() + 1, sieve);
  while (const auto* seg = stream.next_segment()) {
    for (std::uint64_t p : *seg) {
      // pi(x) includes p exactly when x >= p, so flush xs < p first.
      emit_through(p);
      ++pi_total;
      const std::uint32_t ci = sys.index_of(p);
      if (ci != ResidueSystem::npos) ++counts[ci];
    }
  }
  emit_through(xs.back() + 1);
  return out;
}

// -------------------------------------------------------------- emitters ---

void emit_race_csv(std::ostream& os, const RaceSeries& s) {
  os << "x,delta\n";
  for (const auto& [x, d] : s.samples)
    os << x << ',' << format_double(d) << '\n';
}

void emit_counts_csv(std::ostream& os, const ResidueSystem& sys,
                     const CountVector& counts) {
  os << "x,f,l,value\n";
  for (std::size_t u = 0; u < sys.reduced.size(); ++u) {
    const auto& c = counts.classes[u];
    const auto l = sys.reduced[u];
    os << counts.x << ",pi," << l << ',' << c.pi << '\n';
    os << counts.x << ",theta," << l << ',' << format_double(c.theta.value())
       << '\n';
    os << counts.x << ",psi," << l << ',' << format_double(c.psi.value())
       << '\n';
    os << counts.x << ",Pi," << l << ',' << format_double(c.Pi.value())
       << '\n';
    os << counts.x << ",pi2," << l << ',' << c.pi2 << '\n';
  }
}

void emit_crossing_json(std::ostream& os, const RaceSeries& s) {
  auto class_list = [&](const std::vector<std::uint32_t>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(v[i]);
    }
    return out + "]";
  };
  os << "{\"race\":{\"k\":" << s.k << ",\"f\":\"" << to_string(s.spec.f)
     << "\",\"A\":" << class_list(s.spec.A)
     << ",\"B\":" << class_list(s.spec.B) << "},";
  os << "\"T\":" << s.T << ",";
  if (s.first_negative)
    os << "\"first_negative\":" << *s.first_negative << ",";
  else
    os << "\"first_negative\":null,";
  if (s.first_positive)
    os << "\"first_positive\":" << *s.first_positive << ",";
  else
    os << "\"first_positive\":null,";
  os << "\"w\":" << s.sign_changes
     << ",\"delta_T\":" << format_double(s.final_delta) << "}";
}

}  // namespace prlab
