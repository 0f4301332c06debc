#ifndef PRLAB_ZEROS_HPP
#define PRLAB_ZEROS_HPP

/*
 * Critical-line zero ordinates of Dirichlet L-functions: file ingestion,
 * archive indexing, and validation.
 *
 * File format (text, one file per character):
 *   # modulus: K
 *   # character: t0,t1,...,t_{K-1}
 *   # source: <free-form provenance string>
 *   <gamma>            one decimal ordinate per line, strictly ascending, > 0
 *
 * The character line is a value fingerprint: token a is "0" for non-units
 * and the reduced fraction "num/den" of the angle t in chi(a) = e^{2 pi i t}
 * for units (so "0/1" is the value 1 — never plain "0").  Matching against
 * the canonical character table is by this fingerprint, immune to any
 * labeling convention.
 *
 * A directory archive is the set of *.txt files plus an optional
 * manifest.json carrying per-file provenance and SHA-256 hashes of the
 * gamma decimal strings (hashes are written by the generator and checked by
 * the Python tooling; the C++ loader trusts the text payload it parses).
 *
 * Validation evaluates |L(1/2 + i gamma, chi)| from scratch via
 * Euler-Maclaurin-corrected Hurwitz zeta sums and flags residuals above
 * tolerance; scan_zero_count independently counts critical-line zeros up to
 * height H by sign changes of the rotated completed L-function (primitive
 * characters only, where the functional equation applies directly).
 */

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prlab/residue.hpp"

namespace prlab {

class ZeroFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZeroSet {
  std::uint64_t modulus = 0;
  std::uint32_t character = 0;  // canonical index in build_character_table
  std::vector<double> gammas;   // strictly ascending, all > 0
  std::string source;
  double max_height = 0.0;

  // Empty sets load fine but cannot feed a density computation.
  bool usable() const { return !gammas.empty(); }
};

// Parses and checks one file.  Throws ZeroFormatError on malformed headers,
// a fingerprint matching no character mod K, non-ascending or non-positive
// ordinates.
ZeroSet load_zero_file(const std::string& path);

struct ZeroArchive {
  std::map<std::pair<std::uint64_t, std::uint32_t>, ZeroSet> sets;
  // true when some non-principal character of the modulus has no zero set
  std::map<std::uint64_t, bool> partial;

  const ZeroSet* find(std::uint64_t k, std::uint32_t chi) const {
    auto it = sets.find({k, chi});
    return it == sets.end() ? nullptr : &it->second;
  }
};

// Loads every *.txt in `dir` (sorted by filename).  Throws ZeroFormatError
// if the directory is missing or a file is malformed.
ZeroArchive load_zero_archive(const std::string& dir);

// L(s, chi) by q^{-s} sum_a chi(a) zeta_H(s, a/q) with Euler-Maclaurin
// corrected Hurwitz sums; `terms` is the total summation budget across the
// q residue classes.
std::complex<double> l_value(const CharacterTable& table, std::size_t chi,
                             std::complex<double> s, std::uint64_t terms);

struct ZeroResidual {
  double gamma = 0.0;
  double residual = 0.0;  // |L(1/2 + i gamma, chi)|
  bool ok = false;        // residual <= tolerance
};

struct ValidationReport {
  std::vector<ZeroResidual> zeros;
  std::size_t flagged = 0;  // count with ok == false
  double max_residual = 0.0;
};

// Evaluates every ordinate in `zs`.  Throws std::invalid_argument for the
// principal character (the conditionally convergent series machinery does
// not apply) or when `zs` does not belong to `table`'s modulus/character.
ValidationReport validate_zeros(const CharacterTable& table, const ZeroSet& zs,
                                std::uint64_t terms, double tolerance = 1e-6);

// Counts zeros of L(1/2 + it, chi) with 0 < t <= H by sign changes of the
// rotated completed L on a uniform grid.  Requires chi primitive and
// non-principal.
std::size_t scan_zero_count(const CharacterTable& table, std::size_t chi,
                            double H, double grid = 1e-2,
                            std::uint64_t terms = 4000);

}  // namespace prlab

#endif  // PRLAB_ZEROS_HPP
