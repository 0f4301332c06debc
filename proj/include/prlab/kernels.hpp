#ifndef PRLAB_KERNELS_HPP
#define PRLAB_KERNELS_HPP

/*
 * Weighted prime sums with smooth kernels.
 *
 *   abel_delta       Delta_F(r; k, l1, l2) = sum_{n = l1} w_F(n) e^{-nr}
 *                                          - sum_{n = l2} w_F(n) e^{-nr}
 *   chebyshev_series sum_{3 <= p <= X} (-1)^{(p+1)/2} f(p)
 *   kt_gauss_sum     sum_p eps(k; p, l1, l2) w(p) exp(-(1/r) log^2(p/x))
 *   bentz_sum        sum_p sgn(p) log p * p^{-alpha} exp(-log^2 p / x)
 *
 * Every sum is accumulated with compensated (Kahan) addition; term order is
 * ascending n, so results are bit-stable.
 *
 * Truncation.  The Abel kernel dies fast enough that the stopping point
 * carries a certified tail bound (integral comparison, see kernels.cpp) and
 * the returned value is the full series to within `tail_bound`.  The two
 * Gaussian-kernel sums are different: their kernels keep non-negligible mass
 * out to p ~ exp(c x), far beyond anything enumerable, so they are truncated
 * at a configurable prime budget `cutoff`.  `raw_sum` is the exact partial
 * sum below the cutoff (what a naive loop reproduces), `compensation` is an
 * analytic estimate of the smooth part of the neglected tail (from the
 * square-class bias theta(t; k, l1) - theta(t; k, l2) ~ -beta sqrt(t)), and
 * `value = raw_sum + compensation`.
 */

#include <cstdint>
#include <functional>
#include <string>

#include "prlab/residue.hpp"

namespace prlab {

enum class KernelWeight : std::uint8_t {
  unit = 0,         // 1 per prime              (pi-style)
  log_p,            // log p per prime          (theta-style)
  lambda,           // Lambda(n) per prime power (psi-style)
  lambda_over_log,  // Lambda(n)/log n = 1/m     (Pi-style)
};

struct KernelResult {
  double value = 0.0;         // raw_sum + compensation
  double raw_sum = 0.0;       // exact partial sum below `cutoff`
  double compensation = 0.0;  // analytic tail estimate (Gaussian kernels)
  double tail_bound = 0.0;    // certified (abel) or estimated (gaussian) tail
  double cutoff = 0.0;        // last n admitted to the sum
  std::string warning;        // non-fatal range notes (empty if none)
};

// Delta_F(r; k, l1, l2) for F in {pi, theta, psi, Pi} selected by weight.
// Throws std::invalid_argument on r <= 0 or invalid classes.
KernelResult abel_delta(const ResidueSystem& sys, KernelWeight weight,
                        double r, std::uint64_t l1, std::uint64_t l2);

// sum_{3 <= p <= X} (-1)^{(p+1)/2} f(p): + on p = 3 (mod 4), - on p = 1.
// The sign of the mod-4 non-residue class leads, so f = 1 gives Chebyshev's
// excess pi(X;4,3) - pi(X;4,1) plus nothing else.  Exact partial sum.
KernelResult chebyshev_series(const std::function<double(double)>& f,
                              double X);

struct KTGaussSpec {
  std::uint64_t k = 4;
  std::uint64_t l1 = 3, l2 = 1;
  double x = 1e4;  // center of the kernel, > 1
  double r = 1.0;  // width parameter; Knapowski-Turan range 0 < r <= log x
  KernelWeight weight = KernelWeight::log_p;
  double cutoff = 1e8;  // prime budget (upper truncation)
};
KernelResult kt_gauss_sum(const ResidueSystem& sys, const KTGaussSpec& spec);

enum class BentzVariant : std::uint8_t {
  mod4,  // sign (-1)^{(p-1)/2}: + on p = 1 (mod 4)   [k = 4 fixed]
  chi3,  // sign chi_3(p): + on p = 1 (mod 3)          [k = 3 fixed]
  eps,   // sign eps(k; p, l1, l2) for caller's (k, l1, l2)
};

struct BentzSpec {
  BentzVariant variant = BentzVariant::mod4;
  std::uint64_t k = 4, l1 = 1, l2 = 3;  // used by variant eps only
  double x = 50.0;                      // kernel scale, > 0
  double alpha = 0.5;                   // p^{-alpha}, alpha in [0, 1/2]
  bool quarter_x = false;               // exp(-log^2 p / (4x)) variant
  double cutoff = 1e8;                  // prime budget
};
KernelResult bentz_sum(const BentzSpec& spec);

}  // namespace prlab

#endif  // PRLAB_KERNELS_HPP
