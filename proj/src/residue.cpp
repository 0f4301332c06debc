#include "prlab/residue.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace prlab {
namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = (__uint128_t)r * b % m;
    b = (__uint128_t)b * b % m;
    e >>= 1;
  }
  return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> fs;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      fs.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) fs.push_back(n);
  return fs;
}

// Smallest primitive root mod an odd prime p.
std::uint64_t primitive_root(std::uint64_t p) {
  const auto qs = prime_factors(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto q : qs)
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("primitive root not found");  // unreachable for prime p
}

}  // namespace

std::uint32_t ResidueSystem::square_count_of(std::uint64_t a) const {
  const std::uint32_t idx = index_of(a);
  if (idx == npos)
    throw std::invalid_argument("square_count_of: residue is not a unit");
  return square_count[idx];
}

ResidueSystem build_residue_system(std::uint64_t k) {
  if (k < 3) throw std::invalid_argument("modulus must be >= 3");
  ResidueSystem sys;
  sys.k = k;
  sys.class_of.assign(static_cast<std::size_t>(k), ResidueSystem::npos);
  for (std::uint64_t a = 1; a < k; ++a) {
    if (std::gcd(a, k) == 1) {
      sys.class_of[static_cast<std::size_t>(a)] =
          static_cast<std::uint32_t>(sys.reduced.size());
      sys.reduced.push_back(static_cast<std::uint32_t>(a));
    }
  }
  sys.euler_phi = sys.reduced.size();
  sys.square_count.assign(sys.reduced.size(), 0);
  for (std::uint64_t x = 0; x < k; ++x) {
    const std::uint64_t sq = (__uint128_t)x * x % k;
    const std::uint32_t idx = sys.class_of[static_cast<std::size_t>(sq)];
    if (idx != ResidueSystem::npos) ++sys.square_count[idx];
  }
  return sys;
}

int epsilon(const ResidueSystem& sys, std::uint64_t n, std::uint64_t l1,
            std::uint64_t l2) {
  const std::uint32_t i1 = sys.index_of(l1), i2 = sys.index_of(l2);
  if (i1 == ResidueSystem::npos || i2 == ResidueSystem::npos)
    throw std::invalid_argument("epsilon: race classes must be units");
  if (i1 == i2) throw std::invalid_argument("epsilon: race classes must differ");
  const std::uint32_t in = sys.index_of(n);
  if (in == i1) return +1;
  if (in == i2) return -1;
  return 0;
}

BiasConstant bias_constant(const ResidueSystem& sys, std::uint64_t a) {
  BiasConstant c;
  c.q = sys.k;
  c.a = a % sys.k;
  c.value = static_cast<int>(sys.square_count_of(a)) - 1;
  return c;
}

// ---------------------------------------------------------------------------
// Character table
// ---------------------------------------------------------------------------

// One cyclic component of (Z/k)^x, living mod a prime power pe.
struct CharacterTable::Component {
  std::uint64_t prime = 0;
  std::uint32_t pe = 1;             // prime-power modulus
  std::uint32_t n = 1;              // cyclic order
  std::uint32_t lam_over_n = 1;     // lambda / n
  bool is_sign_part = false;        // the {+-1} factor of 2^e (e >= 2)
  std::vector<std::uint32_t> dlog;  // dlog[a mod pe] for units a
};

namespace {

void fill_dlog_cyclic(CharacterTable::Component& c, std::uint64_t gen) {
  c.dlog.assign(c.pe, 0);
  std::uint64_t x = 1 % c.pe;
  for (std::uint32_t j = 0; j < c.n; ++j) {
    c.dlog[static_cast<std::size_t>(x)] = j;
    x = (__uint128_t)x * gen % c.pe;
  }
}

// CRT decomposition of (Z/k)^x into cyclic components in canonical order:
// the 2-part first ({+-1} factor, then <5> when e >= 3), then odd prime
// powers by ascending prime.
std::vector<CharacterTable::Component> decompose(std::uint64_t k) {
  std::vector<CharacterTable::Component> comps;
  std::uint64_t rest = k;
  int e2 = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++e2;
  }
  const std::uint64_t pe2 = std::uint64_t(1) << e2;
  if (e2 == 2) {
    CharacterTable::Component c;
    c.prime = 2;
    c.pe = static_cast<std::uint32_t>(pe2);
    c.n = 2;
    c.is_sign_part = true;
    fill_dlog_cyclic(c, pe2 - 1);  // generated by -1 = 3 (mod 4)
    comps.push_back(std::move(c));
  } else if (e2 >= 3) {
    CharacterTable::Component sign, five;
    sign.prime = five.prime = 2;
    sign.pe = five.pe = static_cast<std::uint32_t>(pe2);
    sign.n = 2;
    sign.is_sign_part = true;
    five.n = static_cast<std::uint32_t>(pe2 / 4);
    sign.dlog.assign(sign.pe, 0);
    five.dlog.assign(five.pe, 0);
    // Every unit mod 2^e is (-1)^s * 5^t uniquely.
    std::uint64_t x = 1;
    for (std::uint32_t t = 0; t < five.n; ++t) {
      sign.dlog[static_cast<std::size_t>(x)] = 0;
      five.dlog[static_cast<std::size_t>(x)] = t;
      const std::uint64_t neg = pe2 - x;
      sign.dlog[static_cast<std::size_t>(neg)] = 1;
      five.dlog[static_cast<std::size_t>(neg)] = t;
      x = x * 5 % pe2;
    }
    comps.push_back(std::move(sign));
    comps.push_back(std::move(five));
  }
  std::uint64_t r = rest;
  for (std::uint64_t p = 3; r > 1;) {
    if (p * p > r) p = r;  // remaining cofactor is prime
    if (r % p != 0) {
      p += 2;
      continue;
    }
    std::uint64_t pe = 1;
    while (r % p == 0) {
      r /= p;
      pe *= p;
    }
    CharacterTable::Component c;
    c.prime = p;
    c.pe = static_cast<std::uint32_t>(pe);
    c.n = static_cast<std::uint32_t>(pe / p * (p - 1));
    std::uint64_t gr = primitive_root(p);
    if (pe > p) {
      // A primitive root mod p^2 generates every higher power as well.
      if (pow_mod(gr, p - 1, p * p) == 1) gr += p;
    }
    fill_dlog_cyclic(c, gr);
    comps.push_back(std::move(c));
  }
  return comps;
}

}  // namespace

CharacterTable build_character_table(std::uint64_t k) {
  CharacterTable t;
  t.sys_ = build_residue_system(k);
  t.comps_ = decompose(k);
  t.num_chars_ = t.sys_.euler_phi;

  std::uint64_t lambda = 1;
  for (const auto& c : t.comps_) lambda = std::lcm(lambda, (std::uint64_t)c.n);
  t.lambda_ = static_cast<std::uint32_t>(lambda);
  for (auto& c : t.comps_)
    c.lam_over_n = static_cast<std::uint32_t>(lambda / c.n);

  const std::size_t m = t.comps_.size();
  const std::size_t nu = t.sys_.reduced.size();

  // Discrete logs of every unit in every component.
  t.dlogs_.assign(nu * m, 0);
  for (std::size_t u = 0; u < nu; ++u) {
    const std::uint64_t a = t.sys_.reduced[u];
    for (std::size_t i = 0; i < m; ++i)
      t.dlogs_[u * m + i] =
          t.comps_[i].dlog[static_cast<std::size_t>(a % t.comps_[i].pe)];
  }

  // Exponent tuples in lexicographic order, most-significant component first;
  // index 0 (all zeros) is the principal character.
  t.exps_.assign(t.num_chars_ * std::max<std::size_t>(m, 1), 0);
  if (m > 0) {
    std::vector<std::uint32_t> cur(m, 0);
    for (std::size_t c = 0; c < t.num_chars_; ++c) {
      std::copy(cur.begin(), cur.end(), t.exps_.begin() + c * m);
      for (std::size_t i = m; i-- > 0;) {
        if (++cur[i] < t.comps_[i].n) break;
        cur[i] = 0;
      }
    }
  }

  // Per-character structure from the exponent tuples (O(m) each).
  t.is_real_.assign(t.num_chars_, false);
  t.order_.assign(t.num_chars_, 1);
  t.conj_.assign(t.num_chars_, 0);
  t.conductor_.assign(t.num_chars_, 1);
  for (std::size_t c = 0; c < t.num_chars_; ++c) {
    const std::uint32_t* e = &t.exps_[c * m];
    std::uint64_t ord = 1, conj_index = 0, cond = 1, cond2 = 1;
    bool real = true;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t n = t.comps_[i].n;
      const std::uint32_t ei = e[i];
      const std::uint32_t o = n / std::gcd(n, ei);
      ord = std::lcm(ord, (std::uint64_t)o);
      if (2ull * ei % n != 0) real = false;
      conj_index = conj_index * n + (ei ? n - ei : 0);
      if (o == 1) continue;
      if (t.comps_[i].prime == 2) {
        std::uint64_t local;
        if (t.comps_[i].is_sign_part) {
          local = 4;
        } else {
          // <5> component: chi(5) of order o = 2^mm has conductor 2^(mm+2).
          std::uint64_t mm = 0, oo = o;
          while (oo > 1) {
            oo >>= 1;
            ++mm;
          }
          local = std::uint64_t(1) << (mm + 2);
        }
        cond2 = std::max(cond2, local);
      } else {
        // o = p^tp * s with s | p-1: local conductor p^(tp+1).
        const std::uint64_t p = t.comps_[i].prime;
        std::uint64_t tpow = 1, oo = o;
        while (oo % p == 0) {
          oo /= p;
          tpow *= p;
        }
        cond *= tpow * p;
      }
    }
    t.order_[c] = static_cast<std::uint32_t>(ord);
    t.is_real_[c] = real;
    t.conj_[c] = static_cast<std::size_t>(conj_index);
    t.conductor_[c] = static_cast<std::uint32_t>(cond * cond2);
  }

  // Roots-of-unity cache at the exact angles, axis values pinned exactly.
  t.roots_.resize(lambda);
  for (std::uint64_t j = 0; j < lambda; ++j) {
    const double th =
        2.0 * M_PI * static_cast<double>(j) / static_cast<double>(lambda);
    t.roots_[j] = {std::cos(th), std::sin(th)};
  }
  t.roots_[0] = {1.0, 0.0};
  if (lambda % 2 == 0) t.roots_[lambda / 2] = {-1.0, 0.0};
  if (lambda % 4 == 0) {
    t.roots_[lambda / 4] = {0.0, 1.0};
    t.roots_[3 * lambda / 4] = {0.0, -1.0};
  }
  return t;
}

CharacterTable::CharacterTable() = default;
CharacterTable::~CharacterTable() = default;
CharacterTable::CharacterTable(const CharacterTable&) = default;
CharacterTable::CharacterTable(CharacterTable&&) noexcept = default;
CharacterTable& CharacterTable::operator=(const CharacterTable&) = default;
CharacterTable& CharacterTable::operator=(CharacterTable&&) noexcept = default;

std::uint32_t CharacterTable::angle_by_unit_index(std::size_t chi,
                                                  std::size_t u) const {
  const std::size_t m = comps_.size();
  const std::uint32_t* e = &exps_[chi * std::max<std::size_t>(m, 1)];
  const std::uint32_t* d = &dlogs_[u * std::max<std::size_t>(m, 1)];
  std::uint64_t ang = 0;
  for (std::size_t i = 0; i < m; ++i)
    ang += (std::uint64_t)e[i] * d[i] % comps_[i].n * comps_[i].lam_over_n;
  return static_cast<std::uint32_t>(ang % lambda_);
}

std::uint32_t CharacterTable::angle(std::size_t chi, std::uint64_t a) const {
  const std::uint32_t u = sys_.index_of(a);
  if (u == ResidueSystem::npos)
    throw std::invalid_argument("character angle: argument is not a unit");
  return angle_by_unit_index(chi, u);
}

std::complex<double> CharacterTable::value(std::size_t chi,
                                           std::uint64_t n) const {
  const std::uint32_t u = sys_.index_of(n);
  if (u == ResidueSystem::npos) return {0.0, 0.0};
  return roots_[angle_by_unit_index(chi, u)];
}

int CharacterTable::parity(std::size_t chi) const {
  return angle(chi, sys_.k - 1) == 0 ? +1 : -1;
}

std::uint32_t conductor_by_induction(const CharacterTable& table,
                                     std::size_t chi) {
  const std::uint64_t k = table.modulus();
  for (std::uint64_t d = 1; d <= k; ++d) {
    if (k % d != 0) continue;
    bool trivial_on_kernel = true;
    for (std::uint64_t a = 1; a < k && trivial_on_kernel;
         a += (d == 1 ? 1 : d)) {
      if (!table.system().is_unit(a)) continue;
      if (table.angle(chi, a) != 0) trivial_on_kernel = false;
    }
    if (trivial_on_kernel) return static_cast<std::uint32_t>(d);
  }
  return static_cast<std::uint32_t>(k);
}

}  // namespace prlab
