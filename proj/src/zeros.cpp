#include "prlab/zeros.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace prlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(trim(s.substr(pos)));
      break;
    }
    out.push_back(trim(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

// Reduced angle fraction "num/den" for chi(a); units only.
std::string angle_token(const CharacterTable& table, std::size_t chi,
                        std::uint64_t a) {
  const std::uint64_t num = table.angle(chi, a);
  const std::uint64_t den = table.lambda();
  const std::uint64_t g = std::gcd(num == 0 ? den : num, den);
  return std::to_string(num / g) + "/" + std::to_string(den / g);
}

std::size_t match_fingerprint(const CharacterTable& table,
                              const std::vector<std::string>& tokens,
                              const std::string& path) {
  const auto& sys = table.system();
  const std::uint64_t k = sys.k;
  if (tokens.size() != k)
    throw ZeroFormatError(path + ": character fingerprint has " +
                          std::to_string(tokens.size()) + " tokens, expected " +
                          std::to_string(k));
  for (std::size_t chi = 0; chi < table.size(); ++chi) {
    bool ok = true;
    for (std::uint64_t a = 0; a < k && ok; ++a) {
      if (sys.index_of(a) == ResidueSystem::npos)
        ok = tokens[a] == "0";
      else
        ok = tokens[a] == angle_token(table, chi, a);
    }
    if (ok) return chi;
  }
  throw ZeroFormatError(path +
                        ": character fingerprint matches no character mod " +
                        std::to_string(k));
}

}  // namespace

ZeroSet load_zero_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ZeroFormatError(path + ": cannot open");

  ZeroSet zs;
  std::string fingerprint;
  bool have_modulus = false, have_character = false;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      if (body.rfind("modulus:", 0) == 0) {
        zs.modulus = std::strtoull(body.c_str() + 8, nullptr, 10);
        have_modulus = true;
      } else if (body.rfind("character:", 0) == 0) {
        fingerprint = trim(body.substr(10));
        have_character = true;
      } else if (body.rfind("source:", 0) == 0) {
        zs.source = trim(body.substr(7));
      }
      continue;
    }
    char* end = nullptr;
    const double g = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || trim(end) != "")
      throw ZeroFormatError(path + ": bad ordinate line '" + t + "'");
    if (!(g > 0.0))
      throw ZeroFormatError(path + ": ordinates must be positive, got " + t);
    if (!zs.gammas.empty() && g <= zs.gammas.back())
      throw ZeroFormatError(path + ": ordinates not strictly ascending at " +
                            t);
    zs.gammas.push_back(g);
  }
  if (!have_modulus || zs.modulus < 3)
    throw ZeroFormatError(path + ": missing or invalid '# modulus:' header");
  if (!have_character)
    throw ZeroFormatError(path + ": missing '# character:' header");

  const CharacterTable table = build_character_table(zs.modulus);
  zs.character = static_cast<std::uint32_t>(
      match_fingerprint(table, split(fingerprint, ','), path));
  zs.max_height = zs.gammas.empty() ? 0.0 : zs.gammas.back();
  return zs;
}

ZeroArchive load_zero_archive(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw ZeroFormatError(dir + ": not a directory");

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());

  ZeroArchive arch;
  for (const auto& f : files) {
    ZeroSet zs = load_zero_file(f);
    const auto key = std::make_pair(zs.modulus, zs.character);
    if (arch.sets.count(key))
      throw ZeroFormatError(f + ": duplicate zero set for this character");
    arch.sets.emplace(key, std::move(zs));
  }
  for (const auto& [key, zs] : arch.sets) {
    const std::uint64_t k = key.first;
    if (arch.partial.count(k)) continue;
    const ResidueSystem sys = build_residue_system(k);
    bool partial = false;
    // Character index 0 is principal; every other index needs a set.
    for (std::uint32_t chi = 1; chi < sys.euler_phi; ++chi)
      if (!arch.sets.count({k, chi})) partial = true;
    arch.partial[k] = partial;
  }
  return arch;
}

// ------------------------------------------------------- L evaluation ------

namespace {

using cplx = std::complex<double>;

// Euler-Maclaurin tail coefficients B_{2r} / (2r)! for r = 1..9.
constexpr double kBernFac[9] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
};

// Hurwitz zeta(s, w) for 0 < w <= 1, Re s > -1, via Euler-Maclaurin with M
// leading terms and 9 correction terms.
cplx hurwitz_zeta_em(cplx s, double w, std::uint64_t M) {
  cplx head = 0.0;
  for (std::uint64_t j = 0; j < M; ++j)
    head += std::exp(-s * std::log(static_cast<double>(j) + w));
  const double Nw = static_cast<double>(M) + w;
  const cplx logNw = std::log(Nw);
  const cplx Npow = std::exp(-s * logNw);  // (M+w)^{-s}
  cplx tail = Npow * Nw / (s - 1.0) + Npow * 0.5;
  // sum_r kBernFac[r-1] * s(s+1)...(s+2r-2) * (M+w)^{-s-(2r-1)}
  cplx poch = s;           // (s)_1
  cplx scale = Npow / Nw;  // (M+w)^{-s-1}
  for (int r = 1; r <= 9; ++r) {
    tail += kBernFac[r - 1] * poch * scale;
    poch *= (s + static_cast<double>(2 * r - 1)) *
            (s + static_cast<double>(2 * r));
    scale /= Nw * Nw;
  }
  return head + tail;
}

// Lanczos (g = 7, 9 terms) log-gamma for Re z > 0.
cplx log_gamma(cplx z) {
  static const double c[9] = {
      0.99999999999980993,      676.5203681218851,    -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,  12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  cplx shift = 0.0;
  while (z.real() < 0.5) {  // Gamma(z) = Gamma(z+1)/z
    shift -= std::log(z);
    z += 1.0;
  }
  z -= 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return shift + 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t +
         std::log(x);
}

}  // namespace

cplx l_value(const CharacterTable& table, std::size_t chi, cplx s,
             std::uint64_t terms) {
  const auto& sys = table.system();
  const double q = static_cast<double>(sys.k);
  const std::uint64_t M =
      std::max<std::uint64_t>(terms / sys.k, 32);
  cplx sum = 0.0;
  for (std::uint64_t a : sys.reduced) {
    const cplx ca = table.value(chi, a);
    sum += ca * hurwitz_zeta_em(s, static_cast<double>(a) / q, M);
  }
  return std::exp(-s * std::log(q)) * sum;
}

ValidationReport validate_zeros(const CharacterTable& table, const ZeroSet& zs,
                                std::uint64_t terms, double tolerance) {
  if (zs.modulus != table.system().k)
    throw std::invalid_argument("validate_zeros: modulus mismatch");
  if (zs.character >= table.size())
    throw std::invalid_argument("validate_zeros: bad character index");
  if (table.is_principal(zs.character))
    throw std::invalid_argument(
        "validate_zeros: principal character unsupported");
  ValidationReport rep;
  rep.zeros.reserve(zs.gammas.size());
  for (const double g : zs.gammas) {
    ZeroResidual zr;
    zr.gamma = g;
    zr.residual = std::abs(l_value(table, zs.character, {0.5, g}, terms));
    zr.ok = zr.residual <= tolerance;
    if (!zr.ok) ++rep.flagged;
    rep.max_residual = std::max(rep.max_residual, zr.residual);
    rep.zeros.push_back(zr);
  }
  return rep;
}

std::size_t scan_zero_count(const CharacterTable& table, std::size_t chi,
                            double H, double grid, std::uint64_t terms) {
  if (table.is_principal(chi))
    throw std::invalid_argument("scan_zero_count: principal character");
  const auto& sys = table.system();
  if (table.conductor(chi) != sys.k)
    throw std::invalid_argument("scan_zero_count: character must be primitive");
  const double q = static_cast<double>(sys.k);
  const int kappa = table.parity(chi) < 0 ? 1 : 0;

  // Root number eps = tau(chi) / (i^kappa sqrt q).
  cplx tau = 0.0;
  for (std::uint64_t a : sys.reduced)
    tau += table.value(chi, a) *
           std::exp(cplx(0.0, 2.0 * M_PI * static_cast<double>(a) / q));
  cplx eps = tau / (std::pow(cplx(0.0, 1.0), kappa) * std::sqrt(q));
  if (std::abs(std::abs(eps) - 1.0) > 1e-8)
    throw std::invalid_argument("scan_zero_count: |eps| != 1 (not primitive?)");
  // Lambda(1/2 + it) = eps * conj(Lambda(1/2 + it)), so rotating by
  // e^{-i arg(eps)/2} lands the completed L on the real axis.
  const cplx rot = std::exp(cplx(0.0, -0.5 * std::arg(eps)));

  auto Z = [&](double t) -> double {
    const cplx s(0.5, t);
    const cplx half = (s + static_cast<double>(kappa)) / 2.0;
    const cplx lam = std::exp(half * std::log(q / M_PI) + log_gamma(half)) *
                     l_value(table, chi, s, terms);
    return (rot * lam).real();
  };

  std::size_t count = 0;
  double prev = Z(grid);
  for (double t = 2.0 * grid; t <= H + grid * 0.5; t += grid) {
    const double cur = Z(t);
    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) ++count;
    if (cur != 0.0) prev = cur;
  }
  return count;
}

}  // namespace prlab
