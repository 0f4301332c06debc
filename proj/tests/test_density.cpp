// The FM density machinery: Bessel kernel, transform factors, quadrature.
//
// Oracle layers, weakest code dependence first:
//  - bessel_j0 against values frozen from a 30-digit arbitrary-precision
//    evaluation (independent of this codebase);
//  - BesselFactor against literal products of bessel_j0;
//  - the r = 2 density against a from-scratch adaptive quadrature of the
//    one-dimensional folded integrand (no shared panel code);
//  - full densities against the published reference values;
//  - structural identities: pair sums, permutation symmetries, unbiased
//    classification, conjugation realness.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "prlab/density.hpp"
#include "prlab/quadrature.hpp"
#include "prlab/residue.hpp"
#include "prlab/zeros.hpp"

using namespace prlab;

#ifndef PRLAB_SOURCE_DIR
#error "PRLAB_SOURCE_DIR must point at the repository root"
#endif

namespace {

const std::string kArchiveDir = std::string(PRLAB_SOURCE_DIR) + "/data/zeros";

const ZeroArchive& archive() {
  static const ZeroArchive arch = load_zero_archive(kArchiveDir);
  return arch;
}

QuadratureOptions fast_opts() {
  QuadratureOptions opt;
  opt.target = 1e-4;
  opt.max_refinements = 1;
  return opt;
}

}  // namespace

TEST_SUITE("density") {

TEST_CASE("bessel_j0 against frozen high-precision values") {
  // Reference values computed with 30-digit arbitrary precision arithmetic,
  // spanning the power-series, backward-recurrence and asymptotic regimes.
  const struct {
    double z, j0;
  } table[] = {
      {0.0, 1.0},
      {0.5, 0.93846980724081290423},
      {1.0, 0.76519768655796655145},
      {2.0, 0.22389077914123566805},
      {3.7, -0.39923020337119110577},
      {5.0, -0.17759677131433830435},
      {8.0, 0.17165080713755390609},
      {9.5, -0.19392874768742235540},
      {12.0, 0.047689310796833536624},
      {15.9, -0.16497049948567057115},
      {16.0, -0.17489907398362918483},
      {20.0, 0.16702466434058315473},
      {25.0, 0.096266783275958116174},
      {50.0, 0.055812327669251815005},
      {123.456, -0.071030062418370726870},
      {200.0, -0.015437439930565091592},
  };
  for (const auto& row : table) {
    CHECK_MESSAGE(std::abs(bessel_j0(row.z) - row.j0) < 1e-12, "z=", row.z,
                  " got ", bessel_j0(row.z));
  }
  // Even function, exactly.
  CHECK(bessel_j0(-3.7) == bessel_j0(3.7));
  CHECK(bessel_j0(-123.456) == bessel_j0(123.456));
}

TEST_CASE("bessel_j0 first zero") {
  // j_{0,1} = 2.40482555769577276862...
  double lo = 2.0, hi = 3.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bessel_j0(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  CHECK(lo == doctest::Approx(2.4048255576957728).epsilon(1e-12));
}

TEST_CASE("BesselFactor is a literal product over the loaded zeros") {
  BesselFactor F;
  F.scale = {2.0 / std::sqrt(0.25 + 1.0), 2.0 / std::sqrt(0.25 + 4.0)};
  F.height = 2.0;  // S2 = S4 = 0: no tail model
  for (double z : {0.0, 0.3, 1.0, 2.5, -1.0}) {
    const double expect =
        bessel_j0(F.scale[0] * std::abs(z)) * bessel_j0(F.scale[1] * std::abs(z));
    CHECK(F(z) == doctest::Approx(expect).epsilon(1e-15));
  }
  CHECK(F(0.0) == 1.0);
  CHECK(F(-1.3) == F(1.3));
}

TEST_CASE("make_bessel_factor models the unloaded tail") {
  const ZeroSet* zs = archive().find(4, 1);
  REQUIRE(zs);
  const BesselFactor F = make_bessel_factor(zs->gammas, 4);
  CHECK(F.scale.size() == zs->gammas.size());
  CHECK(F.height == zs->gammas.back());
  // The tail sums are small and positive at this height, and the model
  // uncertainty is one zero-spacing's worth of S2.
  CHECK(F.S2 > 0.0);
  CHECK(F.S2 < 0.05);
  CHECK(F.S4 > 0.0);
  CHECK(F.S4 < F.S2);
  CHECK(F.S2_unc > 0.0);
  CHECK(F.S2_unc < F.S2);
  // S2 against a direct (coarse) Riemann sum of the density model:
  // integral_H^inf (1/2pi) log(q t / 2pi) / (1/4 + t^2) dt.
  const double H = F.height;
  double riemann = 0.0;
  const double dt = 0.05;
  for (double t = H + dt / 2; t < 40000.0; t += dt)
    riemann += (std::log(4.0 * t / (2 * M_PI)) / (2 * M_PI)) /
               (0.25 + t * t) * dt;
  CHECK(F.S2 == doctest::Approx(riemann).epsilon(1e-3));
  // exp tail keeps the factor bounded by 1 and decaying.
  CHECK(F(0.5) < 1.0);
  CHECK(F.tail_uncertainty(1.0) == doctest::Approx(F.S2_unc).epsilon(1e-12));
  CHECK_THROWS_AS(make_bessel_factor({}, 4), std::invalid_argument);
}

TEST_CASE("make_transform wiring") {
  const CharacterTable t4 = build_character_table(4);
  const TransformSpec spec = make_transform(t4, {3, 1}, archive());
  CHECK(spec.k == 4);
  CHECK(spec.dim() == 1);
  REQUIRE(spec.offsets.size() == 1);
  CHECK(spec.offsets[0] == -2.0);  // c(4,3) - c(4,1) = -1 - 1
  REQUIRE(spec.chars.size() == 1);
  CHECK(spec.chars[0].chi == 1);
  REQUIRE(spec.chars[0].diffs.size() == 1);
  CHECK(spec.chars[0].diffs[0] == std::complex<double>(-2.0, 0.0));

  CHECK_THROWS_AS(make_transform(t4, {3, 3}, archive()),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_transform(t4, {2, 1}, archive()),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_transform(t4, {3}, archive()), std::invalid_argument);

  ZeroArchive empty;
  CHECK_THROWS_AS(make_transform(t4, {3, 1}, empty), MissingZeroData);
}

TEST_CASE("rho_hat basics") {
  const CharacterTable t8 = build_character_table(8);
  const TransformSpec spec = make_transform(t8, {3, 5, 7}, archive());
  CHECK(spec.dim() == 2);
  // rho_hat(0) = 1 (a probability measure's transform at the origin).
  const auto one = rho_hat(spec, {0.0, 0.0});
  CHECK(one.real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.imag() == doctest::Approx(0.0).epsilon(1e-14));
  // Conjugation symmetry rho_hat(-eta) = conj(rho_hat(eta)).
  for (const auto& eta : std::vector<std::vector<double>>{
           {0.3, 0.7}, {1.1, -0.4}, {2.0, 2.0}}) {
    const auto plus = rho_hat(spec, eta);
    const auto minus = rho_hat(spec, {-eta[0], -eta[1]});
    CHECK(std::abs(plus - std::conj(minus)) < 1e-14);
    CHECK(std::abs(plus) <= 1.0 + 1e-12);
  }
}

TEST_CASE("two-class density equals a from-scratch quadrature") {
  const CharacterTable t4 = build_character_table(4);
  const DensityResult d = density(t4, {3, 1}, archive(), fast_opts());
  CHECK(d.converged);

  // Independent evaluation: delta = (1 + (2/pi) I) / 2 with
  // I = int_0^H F(2 eta) sin(2 eta) / eta d eta, by the generic adaptive
  // integrator (no shared panel machinery, no epsilon band).
  const ZeroSet* zs = archive().find(4, 1);
  const BesselFactor F = make_bessel_factor(zs->gammas, 4);
  const auto integrand = [&](double eta) {
    return F(2.0 * eta) * std::sin(2.0 * eta) / eta;
  };
  const QuadResult I =
      integrate(integrand, 1e-14, d.eta_cutoff, 1e-12, 1e-12, 20000);
  REQUIRE(I.converged);
  const double direct = 0.5 * (1.0 + (2.0 / M_PI) * I.value);
  CHECK_MESSAGE(std::abs(d.delta - direct) < 2e-6, "delta=", d.delta,
                " direct=", direct);
  // And the race is overwhelmingly biased to the non-residue class.
  CHECK(d.delta > 0.95);
  CHECK(d.delta < 1.0);
  CHECK(d.imag_residue < 1e-10);
  CHECK(d.error_estimate > 0.0);
  CHECK(d.error_estimate < 1e-3);
}

TEST_CASE("published three-class reference densities") {
  const CharacterTable t8 = build_character_table(8);
  const DensityResult d1 = density(t8, {3, 5, 7}, archive(), fast_opts());
  CHECK_MESSAGE(std::abs(d1.delta - 0.1928013) < 5e-3,
                "delta(8;3,5,7) = ", d1.delta);
  CHECK(d1.imag_residue < 1e-10);

  const CharacterTable t12 = build_character_table(12);
  const DensityResult d2 = density(t12, {5, 7, 11}, archive(), fast_opts());
  CHECK_MESSAGE(std::abs(d2.delta - 0.1984521) < 5e-3,
                "delta(12;5,7,11) = ", d2.delta);

  // The shipped archive reaches height ~150+; the residual truncation error
  // after tail compensation sits far below the acceptance tolerance.
  CHECK(d1.error_estimate < 2e-3);
  CHECK(d2.error_estimate < 2e-3);
}

TEST_CASE("pair densities sum to one") {
  const CharacterTable t4 = build_character_table(4);
  const double a = density(t4, {3, 1}, archive(), fast_opts()).delta;
  const double b = density(t4, {1, 3}, archive(), fast_opts()).delta;
  CHECK(a + b == doctest::Approx(1.0).epsilon(1e-6));

  const CharacterTable t12 = build_character_table(12);
  const double c = density(t12, {5, 7}, archive(), fast_opts()).delta;
  const double d = density(t12, {7, 5}, archive(), fast_opts()).delta;
  CHECK(c + d == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("unbiased pair races have density exactly one half") {
  // c(8,3) = c(8,5) = -1: the two classes are exchangeable, the offset and
  // every real-character difference vanish... the integrand is odd, the
  // density pins to 1/2 up to quadrature noise.
  const CharacterTable t8 = build_character_table(8);
  const DensityResult d = density(t8, {3, 5}, archive(), fast_opts());
  CHECK(std::abs(d.delta - 0.5) < 1e-9);
  const auto check = unbiased_check(t8.system(), {3, 5});
  CHECK(check.unbiased);
  const auto biased = unbiased_check(t8.system(), {1, 3});
  CHECK(!biased.unbiased);
}

TEST_CASE("unbiased classification, r = 3 cube orbits") {
  // Mod 7: 2^3 = 1, so (1, 2, 4) is a rho-orbit: unbiased (needs no zeros).
  const ResidueSystem s7 = build_residue_system(7);
  CHECK(unbiased_check(s7, {1, 2, 4}).unbiased);
  CHECK(unbiased_check(s7, {2, 4, 1}).unbiased);
  CHECK(!unbiased_check(s7, {1, 2, 3}).unbiased);
  const ResidueSystem s9 = build_residue_system(9);
  // 4^3 = 64 = 1 (mod 9): orbit (1, 4, 7).
  CHECK(unbiased_check(s9, {1, 4, 7}).unbiased);
  CHECK(!unbiased_check(s9, {1, 2, 4}).unbiased);
  // r >= 4 is always biased.
  const ResidueSystem s8 = build_residue_system(8);
  CHECK(!unbiased_check(s8, {1, 3, 5, 7}).unbiased);
}

TEST_CASE("density argument validation") {
  const CharacterTable t8 = build_character_table(8);
  CHECK_THROWS_AS(density(t8, {3, 3, 5}, archive()), std::invalid_argument);
  CHECK_THROWS_AS(density(t8, {2, 3}, archive()), std::invalid_argument);
  CHECK_THROWS_AS(density(t8, {3}, archive()), std::invalid_argument);
  QuadratureOptions bad;
  bad.epsilon = -1.0;
  CHECK_THROWS_AS(density(t8, {3, 5}, archive(), bad), std::invalid_argument);
}

TEST_CASE("zero-height truncation error shrinks as the archive grows") {
  // Rebuild archives from prefixes of the mod-4 gammas: the computed
  // density must approach the full-archive value monotonically in reach.
  const ZeroSet* full = archive().find(4, 1);
  REQUIRE(full);
  QuadratureOptions opt = fast_opts();
  const double ref = density(build_character_table(4), {3, 1}, archive(), opt)
                         .delta;
  std::vector<double> errs;
  for (double H : {25.0, 50.0, 100.0}) {
    ZeroArchive arch;
    ZeroSet head = *full;
    head.gammas.resize(
        std::lower_bound(head.gammas.begin(), head.gammas.end(), H) -
        head.gammas.begin());
    head.max_height = head.gammas.back();
    arch.sets[{4, 1}] = head;
    arch.partial[4] = false;
    const double v =
        density(build_character_table(4), {3, 1}, arch, opt).delta;
    errs.push_back(std::abs(v - ref));
  }
  CHECK(errs[0] < 5e-3);   // even 25 units of zeros land close
  CHECK(errs[2] < errs[0]);
  CHECK(errs[2] < 5e-4);
}

TEST_CASE("variance-normalized transform profile is near-Gaussian") {
  // The central-limit shape behind the literature's numerics: with
  // V_chi = sum_gamma 2/(1/4+gamma^2) + 2 S2 and sigma^2 = sum_chi
  // |u_chi|^2 V_chi, the product of Bessel factors tracks exp(-sigma^2
  // eta^2 / 2) within 15% while the mass is above 0.2.
  for (std::uint64_t k : {8, 12}) {
    const CharacterTable t = build_character_table(k);
    const std::vector<std::uint64_t> tuple = {1, k - 1};
    const TransformSpec spec = make_transform(t, tuple, archive());
    double sigma2 = 0.0;
    for (const auto& cp : spec.chars) {
      double V = 2.0 * cp.F.S2;
      for (double s : cp.F.scale) V += 0.5 * s * s;
      sigma2 += std::norm(cp.diffs[0]) * V;
    }
    REQUIRE(sigma2 > 0.0);
    for (double eta = 0.05; ; eta += 0.05) {
      const double gauss = std::exp(-0.5 * sigma2 * eta * eta);
      if (gauss < 0.2) break;
      const double P = std::abs(rho_hat(spec, {eta}));
      CHECK_MESSAGE(std::abs(P - gauss) <= 0.15 * gauss, "k=", k,
                    " eta=", eta, " P=", P, " gauss=", gauss);
    }
  }
}

TEST_CASE("symmetry suite on the mod-8 triple") {
  const CharacterTable t8 = build_character_table(8);
  const SymmetryReport rep =
      fm_symmetry_suite(t8, {3, 5, 7}, archive(), fast_opts());
  REQUIRE(rep.items.size() == 5);
  // Item 1 (inversion): every element of (Z/8)^x is its own inverse.
  CHECK(rep.items[0].applied);
  CHECK(rep.items[0].transformed == std::vector<std::uint64_t>{3, 5, 7});
  CHECK(rep.items[0].deviation == 0.0);
  // Item 4 (reversal): all classes are non-squares mod 8.
  CHECK(rep.items[3].applied);
  CHECK(rep.items[3].transformed == std::vector<std::uint64_t>{7, 5, 3});
  CHECK(rep.items[3].deviation < 5e-4);
  CHECK(rep.max_deviation < 5e-4);
  // Items 2 and 3 need a translation with matching bias constants or an
  // all-squares tuple; neither exists among {3,5,7} mod 8.
  CHECK(!rep.items[1].applied);
  CHECK(!rep.items[2].applied);
  // Item 5 (c-flipping translation + reversal): c(8, 3b) = -c(8, b) for
  // every unit b would need a non-square times square pattern that mod 8
  // cannot provide (c = 3 on the square class, -1 elsewhere).
  CHECK(!rep.items[4].applied);
}

TEST_CASE("symmetry suite finds a c-flipping translation mod 5") {
  // Mod 5: c = (1, -1, -1, 1) on (1, 2, 3, 4); multiplying by 2 swaps
  // squares and non-squares, so item 5 applies to (1, 4) via b = 2:
  // reverse to (4, 1), translate to (3, 2).
  const CharacterTable t5 = build_character_table(5);
  const SymmetryReport rep =
      fm_symmetry_suite(t5, {1, 4}, archive(), fast_opts());
  REQUIRE(rep.items.size() == 5);
  CHECK(rep.items[4].applied);
  CHECK(rep.items[4].transformed == std::vector<std::uint64_t>{3, 2});
  CHECK(rep.items[4].deviation < 1e-6);
  // Item 3: both classes are squares mod 5, translation by any unit works.
  CHECK(rep.items[2].applied);
  // The base race is unbiased (c(5,1) = c(5,4)), so everything here is 1/2.
  CHECK(rep.base.delta == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.max_deviation < 1e-6);
}

}  // TEST_SUITE
