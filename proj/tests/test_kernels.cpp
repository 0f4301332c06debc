// Kernel-weighted sums against brute-force summation oracles.
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "prlab/kahan.hpp"
#include "prlab/kernels.hpp"
#include "prlab/residue.hpp"
#include "prlab/sieve.hpp"

using namespace prlab;

namespace {

bool is_prime_naive(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::pair<std::uint64_t, std::uint32_t> prime_power_naive(std::uint64_t n) {
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    std::uint32_t m = 0;
    std::uint64_t v = n;
    while (v % p == 0) {
      v /= p;
      ++m;
    }
    return v == 1 ? std::make_pair(p, m) : std::make_pair(std::uint64_t{0},
                                                          std::uint32_t{0});
  }
  return n >= 2 ? std::make_pair(n, std::uint32_t{1})
                : std::make_pair(std::uint64_t{0}, std::uint32_t{0});
}

// Brute-force Delta_F(r; k, l1, l2) summed over n <= N.
double abel_naive(KernelWeight w, double r, std::uint64_t k, std::uint64_t l1,
                  std::uint64_t l2, std::uint64_t N) {
  KahanSum s;
  for (std::uint64_t n = 2; n <= N; ++n) {
    const auto [p, m] = prime_power_naive(n);
    if (m == 0) continue;
    double wt = 0.0;
    switch (w) {
      case KernelWeight::unit:
        wt = m == 1 ? 1.0 : 0.0;
        break;
      case KernelWeight::log_p:
        wt = m == 1 ? std::log(double(p)) : 0.0;
        break;
      case KernelWeight::lambda:
        wt = std::log(double(p));
        break;
      case KernelWeight::lambda_over_log:
        wt = 1.0 / m;
        break;
    }
    if (wt == 0.0) continue;
    const int sign = n % k == l1 ? 1 : n % k == l2 ? -1 : 0;
    if (sign) s.add(sign * wt * std::exp(-double(n) * r));
  }
  return s.value();
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("abel delta against brute force") {
  const ResidueSystem s4 = build_residue_system(4);
  const ResidueSystem s3 = build_residue_system(3);
  struct Row {
    const ResidueSystem* sys;
    KernelWeight w;
    double r;
    std::uint64_t l1, l2;
  };
  const Row rows[] = {
      {&s4, KernelWeight::unit, 5.0, 3, 1},
      {&s4, KernelWeight::unit, 0.5, 3, 1},
      {&s4, KernelWeight::log_p, 1.0, 3, 1},
      {&s3, KernelWeight::lambda, 1.0, 2, 1},
      {&s3, KernelWeight::lambda_over_log, 0.25, 2, 1},
      {&s4, KernelWeight::lambda, 0.1, 1, 3},
  };
  for (const auto& row : rows) {
    const auto res = abel_delta(*row.sys, row.w, row.r, row.l1, row.l2);
    // Brute force far past where the kernel is below 1e-40.
    const std::uint64_t N = std::uint64_t(120.0 / row.r) + 10;
    const double oracle =
        abel_naive(row.w, row.r, row.sys->k, row.l1, row.l2, N);
    CHECK_MESSAGE(
        std::abs(res.value - oracle) <=
            res.tail_bound + 1e-12 * std::max(1.0, std::abs(oracle)),
        "r=", row.r, " got ", res.value, " oracle ", oracle);
    CHECK(res.tail_bound < 1e-12 * std::max(std::abs(res.value), 1e-30) +
                               1e-15);
  }
}

TEST_CASE("abel delta leading term at r = 5") {
  // Only n = 3 contributes at this scale: Delta_pi(5; 4, 3, 1) = e^{-15}
  // to a relative error below 1e-8 (next term 7 e^{-35} / e^{-15} ~ 2e-9).
  const ResidueSystem s4 = build_residue_system(4);
  const auto res = abel_delta(s4, KernelWeight::unit, 5.0, 3, 1);
  CHECK(res.value > 0.0);
  CHECK(res.value == doctest::Approx(std::exp(-15.0)).epsilon(1e-6));
  // And the pi-race flips sign with the classes.
  const auto rev = abel_delta(s4, KernelWeight::unit, 5.0, 1, 3);
  CHECK(rev.value == -res.value);  // exactly: same terms, negated signs
}

TEST_CASE("abel delta argument validation") {
  const ResidueSystem s4 = build_residue_system(4);
  CHECK_THROWS_AS(abel_delta(s4, KernelWeight::unit, 0.0, 3, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(abel_delta(s4, KernelWeight::unit, -1.0, 3, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(abel_delta(s4, KernelWeight::unit, 1.0, 3, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(abel_delta(s4, KernelWeight::unit, 1.0, 2, 1),
                  std::invalid_argument);
}

TEST_CASE("chebyshev series") {
  // f = 1: pi(X; 4, 3) - pi(X; 4, 1). X = 12: +3 -5 +7 +11 => 2.
  const auto c1 = chebyshev_series([](double) { return 1.0; }, 12.0);
  CHECK(c1.value == 2.0);
  // X = 4: only p = 3 has entered.
  const auto c2 = chebyshev_series([](double p) { return std::log(p); }, 4.0);
  CHECK(c2.value == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  const auto c3 = chebyshev_series([](double) { return 1.0; }, 2.9);
  CHECK(c3.value == 0.0);
  // Against a direct loop at X = 10000.
  double expect = 0.0;
  for (std::uint64_t p = 3; p <= 10000; ++p)
    if (is_prime_naive(p)) expect += (p % 4 == 3) ? 1.0 : -1.0;
  const auto c4 = chebyshev_series([](double) { return 1.0; }, 10000.0);
  CHECK(c4.value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("kt gauss sum matches a naive loop below the cutoff") {
  const ResidueSystem s4 = build_residue_system(4);
  KTGaussSpec spec;
  spec.x = 1e4;
  spec.r = std::log(1e4);
  spec.cutoff = 2e5;  // keep the oracle loop cheap
  const auto res = kt_gauss_sum(s4, spec);
  KahanSum oracle;
  for (std::uint64_t p = 2; double(p) <= res.cutoff; ++p) {
    if (!is_prime_naive(p)) continue;
    const int sign = p % 4 == 3 ? 1 : p % 4 == 1 ? -1 : 0;
    if (!sign) continue;
    const double lg = std::log(double(p) / spec.x);
    oracle.add(sign * std::log(double(p)) * std::exp(-lg * lg / spec.r));
  }
  CHECK(res.raw_sum == doctest::Approx(oracle.value()).epsilon(1e-12));
  CHECK(res.value == res.raw_sum + res.compensation);
  // Budget truncation is disclosed.
  CHECK(!res.warning.empty());
}

TEST_CASE("kt gauss sum sign structure") {
  const ResidueSystem s4 = build_residue_system(4);
  KTGaussSpec a, b;
  a.l1 = 3;
  a.l2 = 1;
  b.l1 = 1;
  b.l2 = 3;
  a.cutoff = b.cutoff = 1e6;
  const auto ra = kt_gauss_sum(s4, a);
  const auto rb = kt_gauss_sum(s4, b);
  // Swapping the classes negates every term, hence the whole partial sum.
  CHECK(ra.raw_sum == -rb.raw_sum);
  CHECK(ra.compensation == -rb.compensation);
  // The square-class tail model pushes the (3, 1) direction up.
  CHECK(ra.compensation > 0.0);
  KTGaussSpec bad;
  bad.l1 = bad.l2 = 1;
  CHECK_THROWS_AS(kt_gauss_sum(s4, bad), std::invalid_argument);
  KTGaussSpec wide;
  wide.r = 2.0 * std::log(wide.x);  // outside the Knapowski-Turan range
  const auto rw = kt_gauss_sum(s4, wide);
  CHECK(!rw.warning.empty());
}

TEST_CASE("bentz sum small-x exact equivalence") {
  // At x = 0.5 the kernel support ends far below any sane cutoff, so the
  // returned value must equal the naive full sum with no compensation.
  BentzSpec spec;
  spec.x = 0.5;
  spec.alpha = 0.5;
  const auto res = bentz_sum(spec);
  CHECK(res.compensation == 0.0);
  KahanSum oracle;
  for (std::uint64_t p = 3; double(p) <= res.cutoff; ++p) {
    if (!is_prime_naive(p)) continue;
    const double sign = p % 4 == 1 ? 1.0 : -1.0;
    const double lp = std::log(double(p));
    oracle.add(sign * lp * std::pow(double(p), -0.5) *
               std::exp(-lp * lp / spec.x));
  }
  CHECK(res.value == doctest::Approx(oracle.value()).epsilon(1e-12));
  CHECK(res.value < 0.0);  // the p = 3 term dominates
}

TEST_CASE("bentz sum is negative with the predicted scale") {
  for (double x : {50.0, 200.0}) {
    BentzSpec spec;
    spec.x = x;
    spec.alpha = 0.5;
    const auto res = bentz_sum(spec);
    CHECK(res.value < 0.0);
    const double predicted = -0.25 * std::sqrt(3.14159265358979324 * x);
    const double ratio = res.value / predicted;
    CHECK_MESSAGE(ratio > 0.5, "x=", x, " ratio=", ratio);
    CHECK_MESSAGE(ratio < 2.0, "x=", x, " ratio=", ratio);
  }
}

TEST_CASE("bentz sum is continuous in alpha") {
  BentzSpec a, b;
  a.x = b.x = 50.0;
  a.alpha = 0.5;
  b.alpha = 0.5 - 1e-6;
  const double va = bentz_sum(a).value;
  const double vb = bentz_sum(b).value;
  CHECK(std::abs(va - vb) < 1e-3 * std::abs(va));
}

TEST_CASE("bentz chi3 variant") {
  BentzSpec spec;
  spec.variant = BentzVariant::chi3;
  spec.k = 3;
  spec.x = 50.0;
  const auto res = bentz_sum(spec);
  CHECK(res.value < 0.0);  // non-residue class 2 (mod 3) carries more mass
  // Naive equivalence below the cutoff at small x.
  BentzSpec tiny = spec;
  tiny.x = 0.5;
  const auto r2 = bentz_sum(tiny);
  KahanSum oracle;
  for (std::uint64_t p = 2; double(p) <= r2.cutoff; ++p) {
    if (!is_prime_naive(p) || p == 3) continue;
    const double sign = p % 3 == 1 ? 1.0 : -1.0;
    const double lp = std::log(double(p));
    oracle.add(sign * lp * std::pow(double(p), -0.5) *
               std::exp(-lp * lp / tiny.x));
  }
  CHECK(r2.value == doctest::Approx(oracle.value()).epsilon(1e-12));
}

TEST_CASE("bentz quarter-x variant widens the kernel") {
  BentzSpec a, b;
  a.x = b.x = 50.0;
  b.quarter_x = true;
  const double va = bentz_sum(a).value;
  const double vb = bentz_sum(b).value;
  // exp(-log^2 p / (4x)) at x keeps more mass than exp(-log^2 p / x).
  CHECK(std::abs(vb) > std::abs(va));
  CHECK(vb < 0.0);
}

TEST_CASE("eps variant generalizes the hardwired signs") {
  // eps(4; p, 1, 3) reproduces the mod4 variant exactly.
  BentzSpec a;
  a.x = 50.0;
  BentzSpec e;
  e.variant = BentzVariant::eps;
  e.k = 4;
  e.l1 = 1;
  e.l2 = 3;
  e.x = 50.0;
  CHECK(bentz_sum(a).value == bentz_sum(e).value);
  // And swapping classes negates the sum exactly.
  BentzSpec f = e;
  f.l1 = 3;
  f.l2 = 1;
  CHECK(bentz_sum(f).value == -bentz_sum(e).value);
}

}  // TEST_SUITE
