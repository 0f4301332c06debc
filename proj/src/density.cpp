#include "prlab/density.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "prlab/kahan.hpp"
#include "prlab/quadrature.hpp"

namespace prlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.2831853071795864769;

// Integrand of int_H^inf log(q t / 2 pi)/(2 pi) (1/4 + t^2)^{-power} dt after
// the substitution t = H/u, which maps the tail onto u in (0, 1].
double zero_tail_integrand(double q, double H, double u, int power) {
  const double t = H / u;
  double lam = std::log(q * t / kTwoPi) / kTwoPi;
  if (lam < 0.0) lam = 0.0;  // the counting density is nonnegative
  const double den = 0.25 + t * t;
  double v = lam / den * (H / (u * u));
  if (power == 2) v /= den;
  return v;
}

double zero_tail_sum(double q, double H, int power) {
  const QuadResult r = integrate(
      [&](double u) { return zero_tail_integrand(q, H, u, power); }, 0.0, 1.0,
      1e-18, 1e-12);
  return r.value;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t k) {
  return (std::uint64_t)((unsigned __int128)a * b % k);
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t k) {
  // Extended Euclid; a is a unit mod k by the caller's validation.
  std::int64_t t = 0, newt = 1;
  std::int64_t r = (std::int64_t)k, newr = (std::int64_t)(a % k);
  while (newr != 0) {
    const std::int64_t q = r / newr;
    std::int64_t tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw std::invalid_argument("inv_mod of a non-unit");
  if (t < 0) t += (std::int64_t)k;
  return (std::uint64_t)t;
}

// Validate and reduce a tuple of residue classes: at least two entries, each
// a unit mod k, pairwise distinct as classes.
std::vector<std::uint64_t> reduce_tuple(const ResidueSystem& sys,
                                        const std::vector<std::uint64_t>& tuple) {
  if (tuple.size() < 2)
    throw std::invalid_argument("a race tuple needs at least two residue classes");
  std::vector<std::uint64_t> red;
  red.reserve(tuple.size());
  for (std::uint64_t a : tuple) {
    const std::uint64_t m = a % sys.k;
    if (!sys.is_unit(m))
      throw std::invalid_argument("residue class " + std::to_string(a) +
                                  " is not coprime to " + std::to_string(sys.k));
    if (std::find(red.begin(), red.end(), m) != red.end())
      throw std::invalid_argument("duplicate residue class " + std::to_string(m) +
                                  " in tuple");
    red.push_back(m);
  }
  return red;
}

// ---------------------------------------------------------------------------
// Folded block integrands.
//
// For a nonempty subset B of the r-1 axes, with b = |B|, the contribution to
// the density bracket is
//
//   C_B = (s_b / pi^b) int_{(0,inf)^b} G_B(eta) prod d eta
//   G_B = sum_{sigma, sigma_1 = +1} (prod sigma) P(sigma*eta) trig(phi_sigma)
//         / prod eta
//
// with trig = sin, s_b = 2 (-1)^{(b+1)/2} for odd b and trig = cos,
// s_b = 2 (-1)^{b/2} for even b (fold the PV integral over sign vectors and
// pair sigma with -sigma; P is even under the full flip and phi is odd).
// G_B extends evenly and analytically through eta_j = 0, so the excised
// [0, eps] slabs collapse to eps * G_B(..., eps, ...) with O(eps^3) error.
//
// Alongside G_B we integrate its sensitivity to a coherent one-sigma shift of
// every character's zero-tail estimate S2 (T_B below, the exact signed
// derivative); |int T_B| is the tail-model term of error_estimate.  The
// cancellations that keep G_B finite at the axes keep T_B finite too, which a
// crude |G| * sum z^2 bound would lose.
// ---------------------------------------------------------------------------

struct CharBlock {
  const BesselFactor* F = nullptr;
  std::vector<double> gram;  // b x b, Re(u_t conj(u_s)) of restricted diffs
  double s2unc = 0.0;
};

struct BlockCtx {
  int b = 0;
  bool odd = false;
  double pref = 0.0;  // s_b / pi^b
  std::vector<std::size_t> axes;
  std::vector<double> d;  // offsets restricted to the block axes
  std::vector<CharBlock> chars;
};

BlockCtx make_block(const TransformSpec& spec, unsigned mask) {
  BlockCtx c;
  for (std::size_t j = 0; j < spec.dim(); ++j)
    if ((mask >> j) & 1u) c.axes.push_back(j);
  c.b = (int)c.axes.size();
  c.odd = (c.b & 1) != 0;
  const int flips = c.odd ? (c.b + 1) / 2 : c.b / 2;
  const double sb = 2.0 * ((flips & 1) ? -1.0 : 1.0);
  c.pref = sb / std::pow(kPi, (double)c.b);
  for (std::size_t j : c.axes) c.d.push_back(spec.offsets[j]);
  for (const auto& part : spec.chars) {
    CharBlock cb;
    cb.F = &part.F;
    cb.s2unc = part.F.S2_unc;
    cb.gram.assign((std::size_t)c.b * c.b, 0.0);
    bool live = false;
    for (int t = 0; t < c.b; ++t)
      for (int s = 0; s < c.b; ++s) {
        const std::complex<double> ut = part.diffs[c.axes[(std::size_t)t]];
        const std::complex<double> us = part.diffs[c.axes[(std::size_t)s]];
        const double g = ut.real() * us.real() + ut.imag() * us.imag();
        cb.gram[(std::size_t)(t * c.b + s)] = g;
        if (std::abs(g) > 1e-30) live = true;
      }
    // A character whose restricted diffs all vanish contributes F(0) = 1.
    if (live) c.chars.push_back(std::move(cb));
  }
  return c;
}

// G_B and T_B at a point of the open positive orthant.
void eval_block(const BlockCtx& c, const double* eta, double* gval, double* tval) {
  const int b = c.b;
  const unsigned half = 1u << (b - 1);
  double g = 0.0, tv = 0.0;
  double sig[12];
  sig[0] = 1.0;
  for (unsigned m = 0; m < half; ++m) {
    double parity = 1.0;
    for (int t = 1; t < b; ++t) {
      const bool neg = ((m >> (t - 1)) & 1u) != 0;
      sig[t] = neg ? -1.0 : 1.0;
      if (neg) parity = -parity;
    }
    double phi = 0.0;
    for (int t = 0; t < b; ++t) phi += c.d[(std::size_t)t] * sig[t] * eta[t];
    double P = 1.0, A = 0.0;
    for (const auto& ch : c.chars) {
      double z2 = 0.0;
      for (int t = 0; t < b; ++t) {
        const double st = sig[t] * eta[t];
        z2 += ch.gram[(std::size_t)(t * b + t)] * st * st;
        for (int s = t + 1; s < b; ++s)
          z2 += 2.0 * ch.gram[(std::size_t)(t * b + s)] * st * sig[s] * eta[s];
      }
      if (z2 < 0.0) z2 = 0.0;
      const double z = std::sqrt(z2);
      double p = 1.0;
      for (double sc : ch.F->scale) {
        p *= bessel_j0(sc * z);
        if (std::abs(p) < 1e-300) {
          p = 0.0;
          break;
        }
      }
      if (p != 0.0) p *= std::exp(-z2 * (ch.F->S2 + 0.25 * z2 * ch.F->S4));
      P *= p;
      A += z2 * ch.s2unc;
      if (P == 0.0) break;
    }
    const double trig = c.odd ? std::sin(phi) : std::cos(phi);
    g += parity * P * trig;
    tv -= parity * P * A * trig;
  }
  double inv = 1.0;
  for (int t = 0; t < b; ++t) inv /= eta[t];
  *gval = g * inv;
  *tval = tv * inv;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& job) {
  int T = threads;
  if (T <= 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    T = hc ? (int)std::min(hc, 16u) : 1;
  }
  T = std::min(T, 64);
  if (count < (std::size_t)T) T = (int)count;
  if (T <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> ws;
  ws.reserve((std::size_t)T);
  for (int t = 0; t < T; ++t)
    ws.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        job(i);
      }
    });
  for (auto& w : ws) w.join();
}

struct BlockInt {
  double value = 0.0;
  double err = 0.0;  // |K15 - G7| accumulated over panels (plus band terms)
  double unc = 0.0;  // |int T_B|, the coherent zero-tail sensitivity
};

// Tensor GK15 over N^b uniform outer panels of [eps, H]^b, plus the excised
// bands.  Panels are claimed atomically but reduced in index order, so the
// result is byte-identical for every thread count.
BlockInt integrate_block(const BlockCtx& c, double eps, double H, int N,
                         int threads) {
  const int b = c.b;
  const double w = (H - eps) / N;
  std::size_t count = 1;
  for (int t = 0; t < b; ++t) count *= (std::size_t)N;
  struct PanelOut {
    double v = 0.0, e = 0.0, u = 0.0;
  };
  std::vector<PanelOut> out(count);

  auto job = [&](std::size_t idx) {
    int pidx[12];
    std::size_t rem = idx;
    for (int t = b - 1; t >= 0; --t) {
      pidx[t] = (int)(rem % (std::size_t)N);
      rem /= (std::size_t)N;
    }
    double xs[12][15], wK[12][15], wG[12][15];
    for (int t = 0; t < b; ++t) {
      const double a = eps + w * pidx[t];
      const double cm = a + 0.5 * w, h = 0.5 * w;
      xs[t][0] = cm;
      wK[t][0] = gk15::wk[0];
      wG[t][0] = gk15::wg[0];
      for (int i = 1; i < 8; ++i) {
        const double dx = h * gk15::xk[i];
        xs[t][2 * i - 1] = cm - dx;
        xs[t][2 * i] = cm + dx;
        wK[t][2 * i - 1] = wK[t][2 * i] = gk15::wk[i];
        const double gw = (i % 2 == 0) ? gk15::wg[i / 2] : 0.0;
        wG[t][2 * i - 1] = wG[t][2 * i] = gw;
      }
    }
    double K = 0.0, G = 0.0, T = 0.0;
    int pos[12] = {0};
    double eta[12];
    for (;;) {
      double wkp = 1.0, wgp = 1.0;
      for (int t = 0; t < b; ++t) {
        eta[t] = xs[t][pos[t]];
        wkp *= wK[t][pos[t]];
        wgp *= wG[t][pos[t]];
      }
      double gv, tv;
      eval_block(c, eta, &gv, &tv);
      K += wkp * gv;
      T += wkp * tv;
      G += wgp * gv;
      int t = b - 1;
      while (t >= 0 && ++pos[t] == 15) {
        pos[t] = 0;
        --t;
      }
      if (t < 0) break;
    }
    const double scale = std::pow(0.5 * w, (double)b);
    out[idx] = {K * scale, std::abs(K - G) * scale, T * scale};
  };
  parallel_for(count, threads, job);

  KahanSum v, e, u;
  for (const auto& p : out) {
    v.add(p.v);
    e.add(p.e);
    u.add(p.u);
  }
  BlockInt r;
  r.value = v.value();
  r.err = e.value();
  double unc_signed = u.value();

  if (b == 1) {
    double gv, tv;
    eval_block(c, &eps, &gv, &tv);
    r.value += eps * gv;
    unc_signed += eps * tv;
  } else if (b == 2) {
    for (int fixed = 0; fixed < 2; ++fixed) {
      KahanSum bv;
      double be = 0.0;
      for (int p = 0; p < N; ++p) {
        const double a = eps + w * p;
        double errp;
        const double val = gk15_panel(
            [&](double y) {
              double eta[2];
              eta[fixed] = eps;
              eta[1 - fixed] = y;
              double gv, tv;
              eval_block(c, eta, &gv, &tv);
              return gv;
            },
            a, a + w, &errp);
        bv.add(val);
        be += errp;
      }
      r.value += eps * bv.value();
      r.err += eps * be;
    }
    double eta2[2] = {eps, eps};
    double gv, tv;
    eval_block(c, eta2, &gv, &tv);
    r.value += eps * eps * gv;
  } else {
    // Order >= 3 blocks ignore the bands; crude scale note folded into err.
    r.err += (double)b * eps * std::abs(r.value);
  }
  r.unc = std::abs(unc_signed);
  return r;
}

// Radius past which |rho_hat| stays under the cutoff along a fan of rays.
// Along every nonzero direction at least one character's argument grows
// (characters separate residue classes, so the signed coefficient vector of
// the tuple cannot annihilate all of them), and each F is a product of >= 100
// decaying Bessel envelopes, so a finite radius always exists.
double probe_cutoff(const TransformSpec& spec, double cutoff,
                    std::string* warning) {
  const std::size_t n = spec.dim();
  std::vector<std::vector<double>> dirs;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> d(n, 0.0);
    d[j] = 1.0;
    dirs.push_back(d);
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = j + 1; l < n; ++l) {
      std::vector<double> d(n, 0.0);
      d[j] = 1.0;
      d[l] = 1.0;
      dirs.push_back(d);
      d[l] = -1.0;
      dirs.push_back(d);
    }
  if (n >= 3)
    for (unsigned m = 0; m < (1u << (n - 1)); ++m) {
      std::vector<double> d(n, 1.0);
      for (std::size_t t = 1; t < n; ++t)
        if ((m >> (t - 1)) & 1u) d[t] = -1.0;
      dirs.push_back(d);
    }
  if (n == 2)
    for (int deg = 15; deg < 90; deg += 15) {
      if (deg == 45) continue;
      const double c0 = std::cos(deg * kPi / 180.0);
      const double s0 = std::sin(deg * kPi / 180.0);
      dirs.push_back({c0, s0});
      dirs.push_back({c0, -s0});
    }

  std::vector<double> eta(n);
  for (double R = 4.0; R <= 1024.0; R *= 2.0) {
    bool ok = true;
    for (const auto& d : dirs) {
      for (double mfac : {1.0, 1.5, 2.0}) {
        for (std::size_t t = 0; t < n; ++t) eta[t] = d[t] * R * mfac;
        if (std::abs(rho_hat(spec, eta)) >= cutoff) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return R;
  }
  if (warning) {
    if (!warning->empty()) *warning += "; ";
    *warning += "eta cutoff probe exhausted at 1024; integrating to 2048";
  }
  return 2048.0;
}

// Conjugation-symmetry residue: the full sign-folded sum of rho_hat over
// {-1,+1}^dim is purely imaginary for odd dim and purely real for even dim;
// the measured leak of the wrong part, normalized by the largest fold seen,
// is the reported residue.
double measure_imag_residue(const TransformSpec& spec, double eps, double H) {
  const std::size_t n = spec.dim();
  const int b = (int)n;
  static const double mult[3] = {0.6180339887498949, 0.7548776662466927,
                                 0.8191725133961645};
  double maxS = 0.0, maxBad = 0.0;
  std::vector<double> eta(n), se(n);
  for (int i = 1; i <= 48; ++i) {
    for (std::size_t t = 0; t < n; ++t) {
      double u = std::fmod(i * mult[t % 3] + 0.1 * (double)t, 1.0);
      eta[t] = eps + u * u * (H - eps);
    }
    std::complex<double> S = 0.0;
    for (unsigned m = 0; m < (1u << b); ++m) {
      double par = 1.0;
      for (int t = 0; t < b; ++t) {
        const bool neg = ((m >> t) & 1u) != 0;
        se[(std::size_t)t] = neg ? -eta[(std::size_t)t] : eta[(std::size_t)t];
        if (neg) par = -par;
      }
      S += par * rho_hat(spec, se);
    }
    const double bad = (b & 1) ? std::abs(S.real()) : std::abs(S.imag());
    maxS = std::max(maxS, std::abs(S));
    maxBad = std::max(maxBad, bad);
  }
  return maxBad / (maxS + 1e-300);
}

}  // namespace

double BesselFactor::operator()(double z) const {
  z = std::abs(z);
  double p = 1.0;
  for (double s : scale) {
    p *= bessel_j0(s * z);
    if (std::abs(p) < 1e-300) return 0.0;
  }
  const double z2 = z * z;
  return p * std::exp(-z2 * (S2 + 0.25 * z2 * S4));
}

double BesselFactor::tail_uncertainty(double z) const { return z * z * S2_unc; }

BesselFactor make_bessel_factor(const std::vector<double>& gammas,
                                std::uint32_t conductor) {
  if (gammas.empty())
    throw std::invalid_argument("a Bessel factor needs at least one zero");
  BesselFactor f;
  f.scale.reserve(gammas.size());
  for (double g : gammas) f.scale.push_back(2.0 / std::sqrt(0.25 + g * g));
  f.height = gammas.back();
  const double q = (double)(conductor ? conductor : 1);
  const double H = f.height;
  f.S2 = zero_tail_sum(q, H, 1);
  f.S4 = zero_tail_sum(q, H, 2);
  f.S2_unc = 1.0 / (0.25 + H * H);  // one edge zero's worth of model error
  return f;
}

TransformSpec make_transform(const CharacterTable& table,
                             const std::vector<std::uint64_t>& tuple,
                             const ZeroArchive& zeros) {
  const ResidueSystem& sys = table.system();
  TransformSpec spec;
  spec.k = sys.k;
  spec.tuple = reduce_tuple(sys, tuple);
  const std::size_t r = spec.tuple.size();
  for (std::size_t j = 0; j + 1 < r; ++j)
    spec.offsets.push_back((double)(bias_constant(sys, spec.tuple[j]).value -
                                    bias_constant(sys, spec.tuple[j + 1]).value));
  for (std::size_t chi = 1; chi < table.size(); ++chi) {
    const ZeroSet* zs = zeros.find(sys.k, (std::uint32_t)chi);
    if (zs == nullptr || !zs->usable())
      throw MissingZeroData("no usable zeros for modulus " +
                            std::to_string(sys.k) + " character " +
                            std::to_string(chi));
    TransformSpec::CharPart part;
    part.chi = chi;
    for (std::size_t j = 0; j + 1 < r; ++j)
      part.diffs.push_back(table.value(chi, spec.tuple[j]) -
                           table.value(chi, spec.tuple[j + 1]));
    part.F = make_bessel_factor(zs->gammas, table.conductor(chi));
    spec.chars.push_back(std::move(part));
  }
  return spec;
}

std::complex<double> rho_hat(const TransformSpec& spec,
                             const std::vector<double>& eta) {
  if (eta.size() != spec.dim())
    throw std::invalid_argument("rho_hat: eta has the wrong dimension");
  double phase = 0.0;
  for (std::size_t j = 0; j < eta.size(); ++j) phase += spec.offsets[j] * eta[j];
  double P = 1.0;
  for (const auto& part : spec.chars) {
    std::complex<double> wsum = 0.0;
    for (std::size_t j = 0; j < eta.size(); ++j) wsum += part.diffs[j] * eta[j];
    P *= part.F(std::abs(wsum));
  }
  return {P * std::cos(phase), P * std::sin(phase)};
}

DensityResult density(const CharacterTable& table,
                      const std::vector<std::uint64_t>& tuple,
                      const ZeroArchive& zeros, const QuadratureOptions& opt) {
  TransformSpec spec = make_transform(table, tuple, zeros);
  const std::size_t n = spec.dim();
  const std::size_t r = n + 1;
  if (r > 5)
    throw std::invalid_argument("density supports tuples of up to five classes");
  if (!(opt.epsilon > 0.0) || opt.initial_panels < 1)
    throw std::invalid_argument("bad quadrature options");

  DensityResult res;
  res.k = spec.k;
  res.tuple = spec.tuple;
  res.zero_height = spec.chars.front().F.height;
  for (const auto& part : spec.chars)
    res.zero_height = std::min(res.zero_height, part.F.height);

  double H = opt.eta_cutoff;
  if (H <= 0.0) H = probe_cutoff(spec, opt.rho_cutoff, &res.warning);
  res.eta_cutoff = H;
  if (opt.epsilon >= H) throw std::invalid_argument("epsilon exceeds the cutoff");
  if (r >= 4) {
    if (!res.warning.empty()) res.warning += "; ";
    res.warning +=
        "r >= 4: blocks of order >= 3 use fixed coarse panels; expect reduced "
        "accuracy";
  }

  std::vector<BlockCtx> blocks;
  for (unsigned mask = 1; mask < (1u << n); ++mask)
    blocks.push_back(make_block(spec, mask));

  const double eps = opt.epsilon;
  int N = opt.initial_panels;
  std::vector<BlockInt> fixed_cache(blocks.size());
  std::vector<char> fixed_done(blocks.size(), 0);

  double delta = 0.0, delta_prev = 0.0, move = 0.0;
  double quad_err = 0.0, unc_tot = 0.0;
  bool have_prev = false;
  for (int pass = 0;; ++pass) {
    KahanSum acc;
    double errs = 0.0, uncs = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const BlockCtx& c = blocks[i];
      BlockInt bi;
      if (c.b <= 2) {
        bi = integrate_block(c, eps, H, N, opt.threads);
      } else if (!fixed_done[i]) {
        bi = integrate_block(c, eps, H, c.b == 3 ? 4 : 2, opt.threads);
        fixed_cache[i] = bi;
        fixed_done[i] = 1;
      } else {
        bi = fixed_cache[i];
      }
      acc.add(c.pref * bi.value);
      errs += std::abs(c.pref) * bi.err;
      uncs += std::abs(c.pref) * bi.unc;
    }
    delta = std::ldexp(1.0 + acc.value(), -(int)(r - 1));
    quad_err = std::ldexp(errs, -(int)(r - 1));
    unc_tot = std::ldexp(uncs, -(int)(r - 1));
    if (have_prev) {
      move = std::abs(delta - delta_prev);
      if (move < opt.target) {
        res.converged = true;
        break;
      }
    }
    if (pass >= opt.max_refinements) {
      if (!have_prev) res.converged = quad_err < opt.target;
      break;
    }
    delta_prev = delta;
    have_prev = true;
    N *= 2;
  }

  res.delta = delta;
  res.panels = N;
  res.error_estimate = quad_err + unc_tot + move + eps * eps * eps +
                       opt.rho_cutoff * std::pow(H, (double)n);
  res.imag_residue = measure_imag_residue(spec, eps, H);
  return res;
}

UnbiasedCheck unbiased_check(const ResidueSystem& sys,
                             const std::vector<std::uint64_t>& tuple) {
  const std::vector<std::uint64_t> red = reduce_tuple(sys, tuple);
  UnbiasedCheck out;
  if (red.size() == 2) {
    const int c1 = bias_constant(sys, red[0]).value;
    const int c2 = bias_constant(sys, red[1]).value;
    if (c1 == c2) {
      out.unbiased = true;
      out.reason = "r = 2 with c(k,a1) = c(k,a2)";
    } else {
      out.reason = "r = 2 with c(k,a1) != c(k,a2)";
    }
  } else if (red.size() == 3) {
    const std::uint64_t i1 = inv_mod(red[0], sys.k);
    const std::uint64_t u = mul_mod(red[1], i1, sys.k);
    const std::uint64_t v = mul_mod(red[2], i1, sys.k);
    const std::uint64_t u2 = mul_mod(u, u, sys.k);
    const std::uint64_t u3 = mul_mod(u2, u, sys.k);
    if (u3 == 1 && u != 1 && v == u2) {
      out.unbiased = true;
      out.reason = "r = 3 cube-root orbit a, a*rho, a*rho^2";
    } else {
      out.reason = "r = 3 classes are not a cube-root-of-unity orbit";
    }
  } else {
    out.reason = "r >= 4 races are always biased";
  }
  return out;
}

SymmetryReport fm_symmetry_suite(const CharacterTable& table,
                                 const std::vector<std::uint64_t>& tuple,
                                 const ZeroArchive& zeros,
                                 const QuadratureOptions& opt) {
  SymmetryReport rep;
  rep.base = density(table, tuple, zeros, opt);
  const ResidueSystem& sys = table.system();
  const std::uint64_t k = sys.k;
  const std::vector<std::uint64_t>& base = rep.base.tuple;
  const std::size_t r = base.size();

  auto c_of = [&](std::uint64_t a) { return bias_constant(sys, a).value; };
  auto is_square = [&](std::uint64_t a) { return sys.square_count_of(a) > 0; };
  auto push = [&](int item, bool applied, std::string reason,
                  std::vector<std::uint64_t> tr) {
    SymmetryItem it;
    it.item = item;
    it.applied = applied;
    it.reason = std::move(reason);
    if (applied) {
      it.transformed = std::move(tr);
      if (it.transformed == base) {
        it.delta = rep.base.delta;
        it.deviation = 0.0;
        it.reason += " (fixes the tuple)";
      } else {
        const DensityResult d = density(table, it.transformed, zeros, opt);
        it.delta = d.delta;
        it.deviation = std::abs(d.delta - rep.base.delta);
      }
      rep.max_deviation = std::max(rep.max_deviation, it.deviation);
    }
    rep.items.push_back(std::move(it));
  };

  {  // 1: classwise inversion
    std::vector<std::uint64_t> tr;
    for (std::uint64_t a : base) tr.push_back(inv_mod(a, k));
    push(1, true, "a_j -> a_j^{-1}", tr);
  }
  {  // 2: translation by the smallest b with matching bias constants
    std::uint64_t found = 0;
    for (std::uint64_t b : sys.reduced) {
      if (b == 1) continue;
      bool ok = true;
      for (std::uint64_t a : base)
        if (c_of(a) != c_of(mul_mod(b, a, k))) {
          ok = false;
          break;
        }
      if (ok) {
        found = b;
        break;
      }
    }
    if (found) {
      std::vector<std::uint64_t> tr;
      for (std::uint64_t a : base) tr.push_back(mul_mod(found, a, k));
      push(2, true,
           "translation by b = " + std::to_string(found) +
               " with matching bias constants",
           tr);
    } else {
      push(2, false, "no translation preserves every bias constant", {});
    }
  }
  {  // 3: all squares admit every translation; take the smallest
    bool all_sq = true;
    for (std::uint64_t a : base) all_sq = all_sq && is_square(a);
    if (all_sq && sys.reduced.size() > 1) {
      const std::uint64_t b = sys.reduced[1];  // smallest unit > 1
      std::vector<std::uint64_t> tr;
      for (std::uint64_t a : base) tr.push_back(mul_mod(b, a, k));
      push(3, true,
           "all classes are squares; translation by b = " + std::to_string(b),
           tr);
    } else {
      push(3, false, "classes are not all squares", {});
    }
  }
  {  // 4: reversal when the classes agree on squareness
    bool all_sq = true, all_nsq = true;
    for (std::uint64_t a : base) {
      if (is_square(a)) all_nsq = false;
      else all_sq = false;
    }
    if (all_sq || all_nsq) {
      std::vector<std::uint64_t> tr(base.rbegin(), base.rend());
      push(4, true,
           all_sq ? "reversal (all classes are squares)"
                  : "reversal (no class is a square)",
           tr);
    } else {
      push(4, false, "classes mix squares and non-squares", {});
    }
  }
  {  // 5: translation flipping every bias constant, composed with reversal
    std::uint64_t found = 0;
    for (std::uint64_t b : sys.reduced) {
      bool ok = true;
      for (std::uint64_t a : base)
        if (c_of(a) == c_of(mul_mod(b, a, k))) {
          ok = false;
          break;
        }
      if (ok) {
        found = b;
        break;
      }
    }
    if (found) {
      std::vector<std::uint64_t> tr;
      for (std::size_t j = 0; j < r; ++j)
        tr.push_back(mul_mod(found, base[r - 1 - j], k));
      push(5, true,
           "translation by b = " + std::to_string(found) +
               " with flipped bias constants, reversed",
           tr);
    } else {
      push(5, false, "no translation flips every bias constant", {});
    }
  }
  return rep;
}

}  // namespace prlab
