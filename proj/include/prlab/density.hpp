#ifndef PRLAB_DENSITY_HPP
#define PRLAB_DENSITY_HPP

/*
 * Limiting logarithmic densities delta_{k; a_1, ..., a_r} of prime-race
 * orderings, conditional on GRH + LI, by the Feuerverger-Martin explicit
 * formula:
 *
 *   delta = 2^{-(r-1)} (1 + sum_{B != 0} (i/pi)^{|B|}
 *                          P.V. int rho_hat(B) prod_{j in B} d eta_j / eta_j)
 *
 *   rho_hat(eta) = exp(i sum_j (c(k,a_j) - c(k,a_{j+1})) eta_j)
 *                  * prod_{chi != chi0} F(|sum_j (chi(a_j) - chi(a_{j+1}))
 *                                          eta_j|, chi)
 *   F(z, chi)    = prod_{gamma > 0} J0(2 z / sqrt(1/4 + gamma^2))
 *
 * Two typesetting ambiguities in the source formula are resolved here and
 * validated against the six printed reference densities: the offset
 * exponential carries the imaginary unit (it is a phase), and both the
 * offset and the character differences use the j, j+1 convention.
 *
 * Numerics.  rho_hat factors as P(eta) e^{i phi(eta)} with P real (product
 * of real Bessel factors) and phi linear with integer coefficients.  Each
 * P.V. integral is folded onto the positive orthant by summing over sign
 * vectors, which turns (i/pi)^{|B|} times the integral into a manifestly
 * real expression; the per-variable even integrand is flat (O(eta^2)) at
 * the origin, so the excised band [0, eps] contributes eps * g(eps) with
 * O(eps^3) error and no principal-value cancellation survives at all.
 * Integration is by fixed outer panels with a Gauss-Kronrod 15 rule per
 * panel (tensorized for |B| >= 2), panels doubled until delta moves less
 * than the target, evaluated in parallel with a deterministic panel-indexed
 * reduction.
 *
 * Truncated zero sets are compensated by exp(-z^2 S2 - z^4 S4/4) per
 * character, with S2 = sum_{gamma > H} (1/4 + gamma^2)^{-1} (and S4 its
 * square analog) estimated from the zero-counting density
 * dN ~ (1/2 pi) log(q t / 2 pi) dt; the S2 model uncertainty is carried
 * into error_estimate.
 */

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "prlab/residue.hpp"
#include "prlab/zeros.hpp"

namespace prlab {

// A density request needs zeros for every non-principal character mod k;
// thrown when the archive has none (or an empty set) for one of them.
struct MissingZeroData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// J0 to ~1e-13 of the oscillation envelope everywhere on the real line:
// power series for |z| <= 8, Miller backward recurrence on (8, 16), Hankel
// asymptotic beyond.
double bessel_j0(double z);

// F(z, chi) over one character's loaded zeros, with analytic tail past the
// loaded height.
struct BesselFactor {
  std::vector<double> scale;  // 2 / sqrt(1/4 + gamma^2) per zero
  double height = 0.0;        // last loaded gamma
  double S2 = 0.0, S4 = 0.0;  // estimated zero sums past `height`
  double S2_unc = 0.0;        // one zero-spacing's worth of S2 model error

  double operator()(double z) const;
  // Relative uncertainty of the tail factor at argument z.
  double tail_uncertainty(double z) const;
};

// Throws std::invalid_argument on an empty zero set.
BesselFactor make_bessel_factor(const std::vector<double>& gammas,
                                std::uint32_t conductor);

// Everything rho_hat needs, precomputed from a tuple.
struct TransformSpec {
  std::uint64_t k = 0;
  std::vector<std::uint64_t> tuple;
  std::vector<double> offsets;  // c(k, a_j) - c(k, a_{j+1}), j = 1..r-1
  struct CharPart {
    std::size_t chi;                          // index in the character table
    std::vector<std::complex<double>> diffs;  // chi(a_j) - chi(a_{j+1})
    BesselFactor F;
  };
  std::vector<CharPart> chars;  // every non-principal character mod k

  std::size_t dim() const { return offsets.size(); }  // r - 1
};

// Throws on duplicate/non-unit classes or a character with no zero data.
TransformSpec make_transform(const CharacterTable& table,
                             const std::vector<std::uint64_t>& tuple,
                             const ZeroArchive& zeros);

// The FM transform at a full (r-1)-vector eta.
std::complex<double> rho_hat(const TransformSpec& spec,
                             const std::vector<double>& eta);

struct QuadratureOptions {
  double epsilon = 1e-4;        // PV excision radius
  double rho_cutoff = 1e-16;    // |rho_hat| level fixing the eta cutoff
  double target = 1e-6;         // refinement stop: |delta_m - delta_{m-1}|
  int initial_panels = 24;      // outer panels per axis (1D and 2D blocks)
  int max_refinements = 2;      // panel-doubling budget past the first pass
  double eta_cutoff = 0.0;      // force the integration cutoff (0 = probe)
  int threads = 0;              // 0 = hardware concurrency (capped at 16)
};

struct DensityResult {
  std::uint64_t k = 0;
  std::vector<std::uint64_t> tuple;
  double delta = 0.0;
  double error_estimate = 0.0;  // quadrature + refinement + zero-tail terms
  double zero_height = 0.0;     // smallest per-character loaded height
  double eta_cutoff = 0.0;      // integration cutoff H
  int panels = 0;               // outer panels per axis at the final pass
  bool converged = false;       // refinement target met within budget
  double imag_residue = 0.0;    // measured conjugation-symmetry violation
  std::string warning;          // e.g. r >= 4 cost note
};

// Throws on invalid tuples or missing zero data.  r = 2 and r = 3 are the
// production paths; r >= 4 runs with a cost warning and fixed coarse panels.
DensityResult density(const CharacterTable& table,
                      const std::vector<std::uint64_t>& tuple,
                      const ZeroArchive& zeros,
                      const QuadratureOptions& opt = {});

// Rubinstein-Sarnak structural classification (no quadrature): the race is
// unbiased iff r = 2 with c(k,a1) = c(k,a2), or r = 3 with the classes in a
// cube-root-of-unity orbit a, a rho, a rho^2.
struct UnbiasedCheck {
  bool unbiased = false;
  std::string reason;
};
UnbiasedCheck unbiased_check(const ResidueSystem& sys,
                             const std::vector<std::uint64_t>& tuple);

// FM symmetry relations: each applicable transform of the tuple is computed
// at matched quadrature and compared against the base density.
struct SymmetryItem {
  int item = 0;  // 1..5, numbering of the source theorem
  bool applied = false;
  std::string reason;  // transform description, or why it was skipped
  std::vector<std::uint64_t> transformed;
  double delta = 0.0;
  double deviation = 0.0;  // |delta(transformed) - delta(base)|
};
struct SymmetryReport {
  DensityResult base;
  std::vector<SymmetryItem> items;
  double max_deviation = 0.0;  // over applied items
};
SymmetryReport fm_symmetry_suite(const CharacterTable& table,
                                 const std::vector<std::uint64_t>& tuple,
                                 const ZeroArchive& zeros,
                                 const QuadratureOptions& opt = {});

}  // namespace prlab

#endif  // PRLAB_DENSITY_HPP
