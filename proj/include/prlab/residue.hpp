#ifndef PRLAB_RESIDUE_HPP
#define PRLAB_RESIDUE_HPP

/*
 * Modular-arithmetic substrate for the prime races.
 *
 * ResidueSystem: the reduced residues mod k, the quadratic-residue solution
 * counts N_k(l) = #{x mod k : x^2 = l (mod k)}, and the race sign function
 *   epsilon(k; n, l1, l2) = +1 / -1 / 0  for n = l1 / l2 / other (mod k).
 *
 * CharacterTable: all phi(k) Dirichlet characters mod k with values stored
 * as EXACT rational angles — chi(a) = e^(2*pi*i * t) with t = num/lambda a
 * multiple of 1/lambda, lambda the exponent of (Z/k)^x.  Orthogonality and
 * multiplicativity are therefore testable in exact integer arithmetic; the
 * float boundary is crossed only in value().
 *
 * Group construction: CRT over prime powers.  Odd p^e uses a primitive
 * root (lifted from mod p^2, which also generates every higher power);
 * 2 contributes nothing, 4 is cyclic on {-1}, and 2^e (e >= 3) splits as
 * {+-1} x <5>.  Characters are indexed lexicographically by their tuple of
 * component exponents, most-significant component first, so index 0 is the
 * principal character.  This canonical order is what the rest of the code
 * (zero archive, density transforms) refers to.
 *
 * Bias constant: c(q, a) = N_q(a) - 1, the quantity steering every
 * race asymmetry downstream (a quadratic residue pays a positive c).
 */

#include <complex>
#include <cstdint>
#include <vector>

namespace prlab {

struct ResidueSystem {
  std::uint64_t k = 0;
  std::vector<std::uint32_t> reduced;       // units mod k, ascending
  std::vector<std::uint32_t> square_count;  // N_k(reduced[i]) by unit index
  std::uint64_t euler_phi = 0;              // = reduced.size()

  static constexpr std::uint32_t npos = 0xffffffffu;
  // class_of[n mod k] = unit index, or npos for non-units.
  std::vector<std::uint32_t> class_of;

  std::uint32_t index_of(std::uint64_t n) const {
    return class_of[static_cast<std::size_t>(n % k)];
  }
  bool is_unit(std::uint64_t n) const { return index_of(n) != npos; }
  // N_k(a); throws for non-units.
  std::uint32_t square_count_of(std::uint64_t a) const;
};

// Throws std::invalid_argument for k < 3.
ResidueSystem build_residue_system(std::uint64_t k);

// Race sign: +1 if n = l1, -1 if n = l2, 0 otherwise (mod k).
// Throws if l1 = l2 or either is not a unit.
int epsilon(const ResidueSystem& sys, std::uint64_t n, std::uint64_t l1,
            std::uint64_t l2);

struct BiasConstant {
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  int value = 0;  // N_q(a) - 1
};

// Throws for non-unit a.
BiasConstant bias_constant(const ResidueSystem& sys, std::uint64_t a);

class CharacterTable {
 public:
  CharacterTable();
  ~CharacterTable();
  CharacterTable(const CharacterTable&);
  CharacterTable(CharacterTable&&) noexcept;
  CharacterTable& operator=(const CharacterTable&);
  CharacterTable& operator=(CharacterTable&&) noexcept;

  // chi(a) as an exact angle: chi(a) = e^(2*pi*i*angle/lambda()).
  // `a` must be a unit; use value() for the 0-on-non-units convention.
  std::uint32_t angle(std::size_t chi, std::uint64_t a) const;
  std::uint32_t angle_by_unit_index(std::size_t chi, std::size_t u) const;

  // chi(n): 0 for non-units, otherwise the cached root of unity.
  std::complex<double> value(std::size_t chi, std::uint64_t n) const;

  std::size_t size() const { return num_chars_; }             // = phi(k)
  std::uint64_t modulus() const { return sys_.k; }
  std::uint32_t lambda() const { return lambda_; }            // group exponent
  const ResidueSystem& system() const { return sys_; }

  bool is_principal(std::size_t chi) const { return chi == 0; }
  std::size_t principal_index() const { return 0; }
  bool is_real(std::size_t chi) const { return is_real_[chi]; }
  std::uint32_t order(std::size_t chi) const { return order_[chi]; }
  std::size_t conjugate_index(std::size_t chi) const { return conj_[chi]; }
  std::uint32_t conductor(std::size_t chi) const { return conductor_[chi]; }
  // chi(-1): +1 (even) or -1 (odd).
  int parity(std::size_t chi) const;

  friend CharacterTable build_character_table(std::uint64_t k);

  // One cyclic CRT factor of (Z/k)^x; defined in residue.cpp, public only
  // so the construction helpers there can name it.
  struct Component;

 private:
  ResidueSystem sys_;
  std::uint32_t lambda_ = 1;
  std::size_t num_chars_ = 0;
  std::vector<Component> comps_;        // cyclic factors of (Z/k)^x
  std::vector<std::uint32_t> dlogs_;    // num_units x m discrete logs
  std::vector<std::uint32_t> exps_;     // num_chars x m component exponents
  std::vector<bool> is_real_;
  std::vector<std::uint32_t> order_;
  std::vector<std::size_t> conj_;
  std::vector<std::uint32_t> conductor_;
  std::vector<std::complex<double>> roots_;  // e^(2*pi*i*j/lambda)
};

CharacterTable build_character_table(std::uint64_t k);

// Reference conductor computation by direct induction testing: the smallest
// divisor d of k with chi trivial on every unit a = 1 (mod d).  Quadratic in
// k, used by tests to validate the fast per-component conductor above.
std::uint32_t conductor_by_induction(const CharacterTable& table,
                                     std::size_t chi);

}  // namespace prlab

#endif  // PRLAB_RESIDUE_HPP
