#include "prlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "prlab/kahan.hpp"
#include "prlab/sieve.hpp"

namespace prlab {

namespace {

// Upper bound for sum_{n > N} W(n) e^{-rn} by integral comparison, valid once
// the summand is decreasing (n log n > 1/r for the log weight).
//   W = 1:     integral = e^{-rN} / r
//   W = log t: log t <= log N + (t - N)/N  gives
//              integral <= e^{-rN} (log N / r + 1 / (N r^2))
double abel_tail_bound(double N, double r, bool log_weight) {
  const double e = std::exp(-r * N);
  if (!log_weight) return e / r;
  return e * (std::log(N) / r + 1.0 / (N * r * r));
}

double erfc_scaled_gauss_tail(double L, double c, double X) {
  // integral_{L}^{inf} exp(c*u - u^2/X) du
  //   = exp(c^2 X / 4) * (sqrt(pi X)/2) * erfc((L - c X / 2) / sqrt(X))
  const double sX = std::sqrt(X);
  return std::exp(c * c * X / 4.0) * (std::sqrt(M_PI) * sX / 2.0) *
         std::erfc((L - c * X / 2.0) / sX);
}

}  // namespace

KernelResult abel_delta(const ResidueSystem& sys, KernelWeight weight,
                        double r, std::uint64_t l1, std::uint64_t l2) {
  if (!(r > 0.0)) throw std::invalid_argument("abel_delta: r must be > 0");
  if (l1 == l2) throw std::invalid_argument("abel_delta: classes must differ");
  if (sys.index_of(l1) == ResidueSystem::npos ||
      sys.index_of(l2) == ResidueSystem::npos)
    throw std::invalid_argument("abel_delta: class is not a unit");

  const bool over_powers =
      weight == KernelWeight::lambda || weight == KernelWeight::lambda_over_log;
  const bool log_weight =
      weight == KernelWeight::log_p || weight == KernelWeight::lambda;

  KahanSum acc;
  KernelResult res;
  // The kernel e^{-nr} makes everything past n ~ 740/r irrelevant at the
  // 1e-312 scale; sweep in doublings until the certified bound clears the
  // stopping tolerance against the actual partial sum.
  std::uint64_t lo = 2;
  std::uint64_t hi = std::max<std::uint64_t>(
      64, static_cast<std::uint64_t>(std::ceil(760.0 / r)));
  for (;;) {
    auto term = [&](std::uint64_t n, double w) {
      const int e = epsilon(sys, n, l1, l2);
      if (e != 0) acc.add(e * w * std::exp(-static_cast<double>(n) * r));
    };
    if (over_powers) {
      stream_prime_powers(lo, hi + 1, [&](const PrimePowerEvent& ev) {
        term(ev.n, weight == KernelWeight::lambda
                       ? ev.log_p
                       : 1.0 / static_cast<double>(ev.m));
      });
    } else {
      stream_primes(lo, hi + 1, [&](std::uint64_t p) {
        term(p, weight == KernelWeight::log_p
                    ? std::log(static_cast<double>(p))
                    : 1.0);
      });
    }
    const double N = static_cast<double>(hi);
    const bool decreasing = !log_weight || N * std::log(N) > 1.0 / r;
    const double bound = 2.0 * abel_tail_bound(N, r, log_weight);
    const double tol = 1e-12 * (std::abs(acc.value()) + 1e-300);
    if (decreasing && bound < tol) {
      res.tail_bound = bound;
      res.cutoff = N;
      break;
    }
    lo = hi + 1;
    hi *= 2;
  }
  res.raw_sum = acc.value();
  res.value = res.raw_sum;
  return res;
}

KernelResult chebyshev_series(const std::function<double(double)>& f,
                              double X) {
  KernelResult res;
  KahanSum acc;
  if (X >= 3.0) {
    stream_primes(3, static_cast<std::uint64_t>(std::floor(X)) + 1,
                  [&](std::uint64_t p) {
                    const double v = f(static_cast<double>(p));
                    acc.add(p % 4 == 3 ? v : -v);
                  });
  }
  res.raw_sum = acc.value();
  res.value = res.raw_sum;
  res.cutoff = X;
  return res;
}

KernelResult kt_gauss_sum(const ResidueSystem& sys, const KTGaussSpec& spec) {
  if (!(spec.x > 1.0))
    throw std::invalid_argument("kt_gauss_sum: x must be > 1");
  if (!(spec.r > 0.0))
    throw std::invalid_argument("kt_gauss_sum: r must be > 0");
  if (spec.l1 == spec.l2)
    throw std::invalid_argument("kt_gauss_sum: classes must differ");

  KernelResult res;
  const double lx = std::log(spec.x);
  if (spec.r > lx)
    res.warning = "r exceeds log x (outside the Knapowski-Turan range r <= log x)";

  // Kernel mass in u = log p sits at u = lx + r/2 with width ~ sqrt(r/2);
  // L* picks up all but ~1e-9 of it, the prime budget caps what that asks for.
  const double Lstar = spec.r / 2.0 + std::sqrt(spec.r * std::log(1e9));
  double hi = spec.x * std::exp(Lstar);
  if (hi > spec.cutoff) {
    hi = spec.cutoff;
    if (!res.warning.empty()) res.warning += "; ";
    res.warning += "kernel support exceeds the prime budget (truncated)";
  }

  const bool over_powers = spec.weight == KernelWeight::lambda ||
                           spec.weight == KernelWeight::lambda_over_log;
  KahanSum acc;
  auto term = [&](std::uint64_t n, double w) {
    const int e = epsilon(sys, n, spec.l1, spec.l2);
    if (e == 0) return;
    const double d = std::log(static_cast<double>(n)) - lx;
    acc.add(e * w * std::exp(-d * d / spec.r));
  };
  const auto n_hi = static_cast<std::uint64_t>(std::floor(hi)) + 1;
  if (over_powers) {
    stream_prime_powers(2, n_hi, [&](const PrimePowerEvent& ev) {
      term(ev.n, spec.weight == KernelWeight::lambda
                     ? ev.log_p
                     : 1.0 / static_cast<double>(ev.m));
    });
  } else {
    stream_primes(2, n_hi, [&](std::uint64_t p) {
      term(p, spec.weight == KernelWeight::log_p
                  ? std::log(static_cast<double>(p))
                  : 1.0);
    });
  }
  res.raw_sum = acc.value();
  res.cutoff = std::floor(hi);

  if (spec.weight == KernelWeight::log_p) {
    // Tail model: theta(t; k, l1) - theta(t; k, l2) ~ -beta sqrt(t) with
    // beta = (c(k,l1) - c(k,l2)) / phi(k); the smooth part of the neglected
    // sum is -(beta/2) integral_{log hi}^inf e^{u/2} K(u) du.
    const double beta = (bias_constant(sys, spec.l1).value -
                         bias_constant(sys, spec.l2).value) /
                        static_cast<double>(sys.euler_phi);
    // integral_{L}^{inf} exp(u/2 - (u - lx)^2 / r) du, shifted to v = u - lx.
    const double L = std::log(hi) - lx;
    const double integral =
        std::sqrt(spec.x) * erfc_scaled_gauss_tail(L, 0.5, spec.r);
    res.compensation = -(beta / 2.0) * integral;
    res.tail_bound = std::abs(res.compensation);
  }
  res.value = res.raw_sum + res.compensation;
  return res;
}

KernelResult bentz_sum(const BentzSpec& spec) {
  if (!(spec.alpha >= 0.0 && spec.alpha <= 0.5))
    throw std::invalid_argument("bentz_sum: alpha must be in [0, 1/2]");
  if (!(spec.x > 0.0)) throw std::invalid_argument("bentz_sum: x must be > 0");

  // All variants are eps-weighted sums; mod4 and chi3 fix (k, l1, l2).
  std::uint64_t k = spec.k, l1 = spec.l1, l2 = spec.l2;
  switch (spec.variant) {
    case BentzVariant::mod4:
      k = 4, l1 = 1, l2 = 3;
      break;
    case BentzVariant::chi3:
      k = 3, l1 = 1, l2 = 2;
      break;
    case BentzVariant::eps:
      break;
  }
  const ResidueSystem sys = build_residue_system(k);
  if (l1 == l2) throw std::invalid_argument("bentz_sum: classes must differ");
  if (sys.index_of(l1) == ResidueSystem::npos ||
      sys.index_of(l2) == ResidueSystem::npos)
    throw std::invalid_argument("bentz_sum: class is not a unit");

  const double X = spec.quarter_x ? 4.0 * spec.x : spec.x;

  // Natural certified cutoff: past log^2 p / X > 300 + alpha log p every term
  // is below e^{-300}; cheaper than any budget for small X.
  const double a = spec.alpha;
  const double u_star = (a * X + std::sqrt(a * a * X * X + 1200.0 * X)) / 2.0;
  const double hi = std::min(spec.cutoff, std::exp(u_star));

  KernelResult res;
  KahanSum acc;
  if (hi >= 2.0) {
    stream_primes(2, static_cast<std::uint64_t>(std::floor(hi)) + 1,
                  [&](std::uint64_t p) {
                    const int e = epsilon(sys, p, l1, l2);
                    if (e == 0) return;
                    const double u = std::log(static_cast<double>(p));
                    acc.add(e * std::exp(-a * u - u * u / X) * u);
                  });
  }
  res.raw_sum = acc.value();
  res.cutoff = std::floor(std::max(hi, 0.0));

  if (std::exp(u_star) > spec.cutoff) {
    res.warning = "kernel support exceeds the prime budget (truncated)";
    // Smooth tail from theta(t; k, l1) - theta(t; k, l2) ~ -beta sqrt(t):
    // -(beta/2) integral_{log hi}^inf exp((1/2 - alpha) u - u^2 / X) du.
    const double beta = (bias_constant(sys, l1).value -
                         bias_constant(sys, l2).value) /
                        static_cast<double>(sys.euler_phi);
    res.compensation =
        -(beta / 2.0) * erfc_scaled_gauss_tail(std::log(hi), 0.5 - a, X);
    res.tail_bound = std::abs(res.compensation);
  }
  res.value = res.raw_sum + res.compensation;
  return res;
}

}  // namespace prlab
