#ifndef PRLAB_RACE_HPP
#define PRLAB_RACE_HPP

/*
 * Per-residue-class counting functions and the empirical race statistics.
 *
 * For a modulus k and unit classes l, the sweep maintains along one pass to T:
 *   pi(x; k, l)     #{p <= x prime, p = l (mod k)}
 *   theta(x; k, l)  sum of log p over those primes
 *   psi(x; k, l)    sum of Lambda(n) over n = p^m <= x, n = l (mod k)
 *   Pi(x; k, l)     sum of Lambda(n)/log n = sum 1/m over the same n
 *   pi2(x; k, l)    #{n = p*q <= x, p,q prime, n = l (mod k)}   (optional pass)
 *
 * A race compares sum over classes A against sum over classes B of one of
 * these (singletons give the classic two-class race; larger sets give the
 * union races).  delta_f(x) is evaluated at every event point (every n where
 * a tracked counter changes), which is exact for all integers because the
 * counting functions are step functions.
 *
 * Sign convention: a sign change is counted between consecutive event points
 * n1 < n2 exactly when sign(delta(n1)) * sign(delta(n2)) = -1; zero is not a
 * sign, and a run through zero counts as one change.
 *
 * Stored samples are geometric, x_next = ceil(x * (1 + ratio)), plus full
 * event resolution in a small window around detected sign changes; the race
 * verdict statistics (w, first crossings, lead counts, log-densities) are
 * exact regardless of the sample spacing.
 *
 * Checkpoint/resume: the sweep state (all counters including compensation
 * limbs, per-race statistics, stored samples) serializes into the PRLB1
 * container at segment boundaries; a resumed run is bit-identical to an
 * uninterrupted one.
 */

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "prlab/kahan.hpp"
#include "prlab/residue.hpp"
#include "prlab/sieve.hpp"

namespace prlab {

enum class CountFn : std::uint8_t { pi = 0, theta, psi, Pi, pi2 };

const char* to_string(CountFn f);
std::optional<CountFn> count_fn_from_string(const std::string& s);

struct ClassCounts {
  std::uint64_t pi = 0;
  KahanSum theta, psi, Pi;
  std::uint64_t pi2 = 0;
};

struct CountVector {
  std::uint64_t k = 0;
  std::uint64_t x = 0;                // sweep position (inclusive)
  std::vector<ClassCounts> classes;   // by unit index of ResidueSystem
  std::uint64_t pi_total = 0;         // pi(x), all primes including p | k
  std::uint64_t pi2_total = 0;        // total semiprimes <= x
  std::uint64_t pi2_nonunit = 0;      // semiprimes sharing a factor with k
};

// A race: sum over A minus sum over B, both sets of unit residues mod k.
struct RaceSpec {
  CountFn f = CountFn::pi;
  std::vector<std::uint32_t> A, B;  // disjoint, nonempty
};

struct RaceSeries {
  RaceSpec spec;
  std::uint64_t k = 0;
  std::uint64_t T = 0;
  std::vector<std::pair<std::uint64_t, double>> samples;  // (x, delta)
  std::uint64_t sign_changes = 0;                         // w_f(T)
  std::optional<std::uint64_t> first_negative, first_positive;
  double final_delta = 0.0;

  // Lead statistics over integers n in [1, T], updated exactly:
  std::uint64_t lead_count = 0;   // #{n : delta(n) > 0}
  // integral of dt/t over {t in [2, T] : delta(t) > 0} (step-function sense)
  KahanSum lead_log_measure;
};

struct SweepOptions {
  double sample_ratio = 1e-3;      // geometric sample spacing
  bool with_prime_powers = true;   // track theta/psi/Pi (adds p^m events)
  bool with_pi2 = false;           // track semiprime counts (extra pass)
  SieveOptions sieve;
  // Checkpointing: save into `checkpoint_path` roughly every
  // `save_interval` integers (aligned to segment ends); 0 = only on demand.
  std::string checkpoint_path;
  std::uint64_t save_interval = 0;
  bool resume = false;  // start from checkpoint_path instead of x = 1
};

struct SweepResult {
  CountVector counts;
  std::vector<RaceSeries> races;
};

// One pass over [2, T].  Throws on invalid classes or T < 2.
SweepResult sweep(const ResidueSystem& sys, std::uint64_t T,
                  const std::vector<RaceSpec>& races,
                  const SweepOptions& opt = {});

// w_f(T): already accumulated during the sweep.
std::uint64_t sign_changes(const RaceSeries& s);

// Smallest integer m in [x_start, x_end] with
// pi(m; k, a_1) > pi(m; k, a_2) > ... > pi(m; k, a_r), or nullopt.
std::optional<std::uint64_t> find_ordering(const ResidueSystem& sys,
                                           const std::vector<std::uint32_t>& perm,
                                           std::uint64_t x_start,
                                           std::uint64_t x_end,
                                           const SieveOptions& sieve = {});

// N(T)/T as an exact rational: N = #{n in [1, T] : delta_pi(n; k, l1, l2) > 0}.
struct LeadDensity {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};
LeadDensity lead_density(const RaceSeries& s);

// Empirical logarithmic density of {t <= X : delta > 0}, both normalizations:
//   literal:  (1/X)     * integral_{P and [2,X]} dt/t   (the definition as
//             printed, which sends full-measure sets to (log X - log 2)/X)
//   standard: (1/log X) * the same integral (used for density comparisons)
struct LogDensity {
  double literal = 0.0;
  double standard = 0.0;
};
LogDensity log_density(const RaceSeries& s);

// E-vector samples: (log x / sqrt x) * (phi(k) pi(x;k,a_i) - pi(x)).
struct EVectorSample {
  std::uint64_t x;
  std::vector<double> components;
};
std::vector<EVectorSample> e_vector(const ResidueSystem& sys,
                                    const std::vector<std::uint32_t>& classes,
                                    std::vector<std::uint64_t> xs,
                                    const SieveOptions& sieve = {});

// ------------------------------------------------------------- emitters ----
// CSV: "x,delta" rows for one race; "x,f,l,value" rows for counters.
void emit_race_csv(std::ostream& os, const RaceSeries& s);
void emit_counts_csv(std::ostream& os, const ResidueSystem& sys,
                     const CountVector& counts);
// Crossing report JSON: {race, first_negative, first_positive, w, T, delta_T}.
void emit_crossing_json(std::ostream& os, const RaceSeries& s);

// Fixed 17-significant-digit float formatting shared by all emitters.
std::string format_double(double v);

}  // namespace prlab

#endif  // PRLAB_RACE_HPP
