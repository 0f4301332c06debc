// Zero archive ingestion, L-value validation, independent zero counting.
//
// The from-scratch checks here are the heavy artillery: every shipped
// ordinate is re-evaluated as |L(1/2 + i gamma, chi)| via Euler-Maclaurin
// Hurwitz sums that share no code with the archive generator, and the zero
// counts are cross-checked by sign scanning the rotated completed L.
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "prlab/residue.hpp"
#include "prlab/zeros.hpp"

using namespace prlab;
namespace fs = std::filesystem;

#ifndef PRLAB_SOURCE_DIR
#error "PRLAB_SOURCE_DIR must point at the repository root"
#endif

namespace {

const std::string kArchiveDir = std::string(PRLAB_SOURCE_DIR) + "/data/zeros";

// Writes a synthetic zero file and returns its path.
fs::path write_zero_file(const fs::path& dir, const std::string& name,
                         const std::string& body) {
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream f(p);
  f << body;
  return p;
}

const char* kMod4Header =
    "# modulus: 4\n"
    "# character: 0,0/1,0,1/2\n"
    "# source: synthetic test data\n";

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("zeros") {

TEST_CASE("shipped archive loads and is complete for the working moduli") {
  const ZeroArchive arch = load_zero_archive(kArchiveDir);
  CHECK(arch.sets.size() == 11);
  for (std::uint64_t k : {3, 4, 5, 8, 12}) {
    REQUIRE(arch.partial.count(k) == 1);
    CHECK_MESSAGE(!arch.partial.at(k), "archive partial for k=", k);
    const CharacterTable t = build_character_table(k);
    for (std::size_t chi = 1; chi < t.size(); ++chi) {
      const ZeroSet* zs = arch.find(k, static_cast<std::uint32_t>(chi));
      REQUIRE_MESSAGE(zs != nullptr, "k=", k, " chi=", chi);
      CHECK(zs->usable());
      CHECK_MESSAGE(zs->gammas.size() >= 100, "k=", k, " chi=", chi,
                    " has only ", zs->gammas.size(), " zeros");
      CHECK(zs->max_height == zs->gammas.back());
    }
  }
  // The classic first ordinates.
  const ZeroSet* z4 = arch.find(4, 1);
  REQUIRE(z4);
  CHECK(z4->gammas.front() == doctest::Approx(6.0209489047).epsilon(1e-9));
  const ZeroSet* z3 = arch.find(3, 1);
  REQUIRE(z3);
  CHECK(z3->gammas.front() == doctest::Approx(8.0397371557).epsilon(1e-9));
}

TEST_CASE("lifted characters share the primitive ordinates") {
  // L(s, chi) for imprimitive chi differs from its primitive core only by
  // finitely many Euler factors, which are zero-free on the critical line;
  // the shipped lifts must therefore replicate the primitive gammas.
  const ZeroArchive arch = load_zero_archive(kArchiveDir);
  const CharacterTable t12 = build_character_table(12);
  const CharacterTable t3 = build_character_table(3);
  const CharacterTable t4 = build_character_table(4);
  // Find the mod-12 characters of conductor 3 and 4.
  for (std::size_t chi = 1; chi < t12.size(); ++chi) {
    const ZeroSet* lift = arch.find(12, static_cast<std::uint32_t>(chi));
    REQUIRE(lift);
    if (t12.conductor(chi) == 3) {
      const ZeroSet* core = arch.find(3, 1);
      REQUIRE(core);
      const std::size_t n = std::min(lift->gammas.size(), core->gammas.size());
      for (std::size_t i = 0; i < n; ++i)
        CHECK(lift->gammas[i] == doctest::Approx(core->gammas[i]).epsilon(1e-12));
    } else if (t12.conductor(chi) == 4) {
      const ZeroSet* core = arch.find(4, 1);
      REQUIRE(core);
      const std::size_t n = std::min(lift->gammas.size(), core->gammas.size());
      for (std::size_t i = 0; i < n; ++i)
        CHECK(lift->gammas[i] == doctest::Approx(core->gammas[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("format violations are rejected") {
  TempDir tmp("prlab_test_zero_fmt");
  // Non-ascending ordinates.
  auto p = write_zero_file(tmp.path, "bad_order.txt",
                           std::string(kMod4Header) + "3.0\n2.0\n");
  CHECK_THROWS_AS(load_zero_file(p.string()), ZeroFormatError);
  // Non-positive ordinate.
  p = write_zero_file(tmp.path, "bad_sign.txt",
                      std::string(kMod4Header) + "-1.5\n");
  CHECK_THROWS_AS(load_zero_file(p.string()), ZeroFormatError);
  p = write_zero_file(tmp.path, "bad_zero.txt",
                      std::string(kMod4Header) + "0.0\n");
  CHECK_THROWS_AS(load_zero_file(p.string()), ZeroFormatError);
  // Garbage ordinate line.
  p = write_zero_file(tmp.path, "bad_line.txt",
                      std::string(kMod4Header) + "6.02 oops\n");
  CHECK_THROWS_AS(load_zero_file(p.string()), ZeroFormatError);
  // Missing headers.
  p = write_zero_file(tmp.path, "bad_header.txt", "6.02\n7.0\n");
  CHECK_THROWS_AS(load_zero_file(p.string()), ZeroFormatError);
  // Fingerprint that matches no character mod 4.
  p = write_zero_file(tmp.path, "bad_chi.txt",
                      "# modulus: 4\n# character: 0,0/1,0,1/3\n# source: x\n"
                      "6.02\n");
  CHECK_THROWS_AS(load_zero_file(p.string()), ZeroFormatError);
  // Missing file.
  CHECK_THROWS_AS(load_zero_file((tmp.path / "nope.txt").string()),
                  ZeroFormatError);
}

TEST_CASE("empty sets load but are unusable") {
  TempDir tmp("prlab_test_zero_empty");
  const auto p = write_zero_file(tmp.path, "empty.txt", kMod4Header);
  const ZeroSet zs = load_zero_file(p.string());
  CHECK(zs.modulus == 4);
  CHECK(zs.character == 1);
  CHECK(!zs.usable());
  CHECK(zs.gammas.empty());
}

TEST_CASE("archive indexing, duplicates, and the partial flag") {
  TempDir tmp("prlab_test_zero_arch");
  write_zero_file(tmp.path, "a.txt",
                  std::string(kMod4Header) + "6.0209489046976\n");
  ZeroArchive arch = load_zero_archive(tmp.path.string());
  CHECK(arch.sets.size() == 1);
  REQUIRE(arch.find(4, 1) != nullptr);
  CHECK(arch.find(4, 1)->gammas.size() == 1);
  CHECK(arch.find(4, 0) == nullptr);
  REQUIRE(arch.partial.count(4) == 1);
  CHECK(!arch.partial.at(4));  // the only non-principal character is covered

  // A mod-8 file covering one of three non-principal characters.
  write_zero_file(tmp.path, "b.txt",
                  "# modulus: 8\n# character: 0,0/1,0,1/2,0,1/2,0,0/1\n"
                  "# source: x\n12.0\n");
  arch = load_zero_archive(tmp.path.string());
  REQUIRE(arch.partial.count(8) == 1);
  CHECK(arch.partial.at(8));

  // Duplicate fingerprints in one directory are an error.
  write_zero_file(tmp.path, "c.txt",
                  std::string(kMod4Header) + "7.0\n");
  CHECK_THROWS_AS(load_zero_archive(tmp.path.string()), ZeroFormatError);

  CHECK_THROWS_AS(load_zero_archive((tmp.path / "missing").string()),
                  ZeroFormatError);
}

TEST_CASE("l_value hits known constants") {
  const CharacterTable t4 = build_character_table(4);
  // L(2, chi_{-4}) is Catalan's constant.
  const auto G = l_value(t4, 1, {2.0, 0.0}, 4000);
  CHECK(G.real() == doctest::Approx(0.91596559417721902).epsilon(1e-11));
  CHECK(std::abs(G.imag()) < 1e-11);
  // L(3, chi_{-4}) = pi^3 / 32.
  const auto L3 = l_value(t4, 1, {3.0, 0.0}, 4000);
  const double pi = 3.14159265358979324;
  CHECK(L3.real() == doctest::Approx(pi * pi * pi / 32.0).epsilon(1e-11));
  // L(2, chi_3): no closed form needed; check against a plain (slowly
  // converging but absolutely summable) Dirichlet series partial sum with
  // a million terms.
  const CharacterTable t3 = build_character_table(3);
  const auto L = l_value(t3, 1, {2.0, 0.0}, 4000);
  std::complex<double> direct = 0.0;
  for (std::uint64_t n = 1; n <= 1000000; ++n)
    direct += t3.value(1, n) / std::complex<double>(double(n) * double(n), 0.0);
  CHECK(std::abs(L - direct) < 1e-6);
}

TEST_CASE("shipped ordinates are actual zeros") {
  // Every shipped gamma <= 100 for the primitive characters of conductor
  // 3, 4, 5, 8, 12 must make |L(1/2 + i gamma)| vanish to tolerance.
  const ZeroArchive arch = load_zero_archive(kArchiveDir);
  for (std::uint64_t k : {3, 4, 5, 8, 12}) {
    const CharacterTable t = build_character_table(k);
    for (std::size_t chi = 1; chi < t.size(); ++chi) {
      if (t.conductor(chi) != t.modulus()) continue;  // lifts mirror cores
      const ZeroSet* full = arch.find(k, static_cast<std::uint32_t>(chi));
      REQUIRE(full);
      ZeroSet head = *full;
      head.gammas.resize(
          std::lower_bound(head.gammas.begin(), head.gammas.end(), 100.0) -
          head.gammas.begin());
      head.max_height = head.gammas.empty() ? 0.0 : head.gammas.back();
      REQUIRE(head.gammas.size() >= 20);
      const ValidationReport rep = validate_zeros(t, head, 20000, 1e-6);
      CHECK_MESSAGE(rep.flagged == 0, "k=", k, " chi=", chi, " max residual ",
                    rep.max_residual);
      CHECK(rep.max_residual < 1e-6);
    }
  }
}

TEST_CASE("validation flags a perturbed ordinate") {
  const ZeroArchive arch = load_zero_archive(kArchiveDir);
  const CharacterTable t4 = build_character_table(4);
  ZeroSet zs = *arch.find(4, 1);
  zs.gammas.resize(10);
  zs.max_height = zs.gammas.back();
  zs.gammas[3] += 1e-2;  // push one ordinate off the zero
  const ValidationReport rep = validate_zeros(t4, zs, 20000, 1e-6);
  CHECK(rep.flagged == 1);
  CHECK(!rep.zeros[3].ok);
  CHECK(rep.zeros[3].residual > 1e-4);
  // Principal characters are rejected outright.
  CHECK_THROWS_AS(validate_zeros(t4, ZeroSet{4, 0, {6.0}, "", 6.0}, 1000),
                  std::invalid_argument);
}

TEST_CASE("independent zero count agrees with the archive") {
  const ZeroArchive arch = load_zero_archive(kArchiveDir);
  const CharacterTable t4 = build_character_table(4);
  const ZeroSet* zs = arch.find(4, 1);
  REQUIRE(zs);
  const double H = 60.0;
  const std::size_t expect = static_cast<std::size_t>(
      std::lower_bound(zs->gammas.begin(), zs->gammas.end(), H) -
      zs->gammas.begin());
  CHECK(scan_zero_count(t4, 1, H) == expect);

  const CharacterTable t3 = build_character_table(3);
  const ZeroSet* z3 = arch.find(3, 1);
  REQUIRE(z3);
  const std::size_t expect3 = static_cast<std::size_t>(
      std::lower_bound(z3->gammas.begin(), z3->gammas.end(), H) -
      z3->gammas.begin());
  CHECK(scan_zero_count(t3, 1, H) == expect3);
}

TEST_CASE("zero counts grow superlinearly in the height") {
  // dN/dt ~ (1/2 pi) log(q t / 2 pi): N(150) must exceed 2 N(75).
  const ZeroArchive arch = load_zero_archive(kArchiveDir);
  for (std::uint64_t k : {4, 8}) {
    const CharacterTable t = build_character_table(k);
    for (std::size_t chi = 1; chi < t.size(); ++chi) {
      const ZeroSet* zs = arch.find(k, static_cast<std::uint32_t>(chi));
      REQUIRE(zs);
      if (zs->max_height < 150.0) continue;
      const auto count_below = [&](double H) {
        return std::lower_bound(zs->gammas.begin(), zs->gammas.end(), H) -
               zs->gammas.begin();
      };
      CHECK_MESSAGE(count_below(150.0) > 2 * count_below(75.0), "k=", k,
                    " chi=", chi);
    }
  }
}

}  // TEST_SUITE
