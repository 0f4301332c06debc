// Segmented sieve against trial division, plus the checkpoint container.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "prlab/sieve.hpp"

using namespace prlab;

namespace {

// Oracle: trial division.
bool is_prime_naive(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> primes_naive(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t n = lo; n < hi; ++n)
    if (is_prime_naive(n)) v.push_back(n);
  return v;
}

std::vector<std::uint64_t> collect(std::uint64_t lo, std::uint64_t hi,
                                   SieveOptions opt = {}) {
  std::vector<std::uint64_t> v;
  stream_primes(lo, hi, [&](std::uint64_t p) { v.push_back(p); }, opt);
  return v;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("sieve") {

TEST_CASE("small ranges match trial division") {
  CHECK(collect(2, 30) ==
        std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(collect(2, 3) == std::vector<std::uint64_t>{2});
  CHECK(collect(2, 100) == primes_naive(2, 100));
  CHECK(collect(5000, 5100) == primes_naive(5000, 5100));
  CHECK_THROWS_AS(PrimeStream(10, 10), std::invalid_argument);
}

TEST_CASE("the Leech window") {
  // The first mod-4 crossing sits at the twin pair 26861, 26863.
  const auto v = collect(26850, 26870);
  CHECK(v == std::vector<std::uint64_t>{26861, 26863});
  CHECK(is_prime_naive(26861));
  CHECK(is_prime_naive(26863));
}

TEST_CASE("prime counts at classic checkpoints") {
  std::uint64_t n = 0;
  stream_primes(2, 1000001, [&](std::uint64_t) { ++n; });
  CHECK(n == 78498);  // pi(10^6)
  n = 0;
  stream_primes(2, 100001, [&](std::uint64_t) { ++n; });
  CHECK(n == 9592);  // pi(10^5)
}

TEST_CASE("segment size does not change the stream") {
  const auto ref = collect(1000, 50000);
  for (std::size_t bytes : {256u, 4096u, 1u << 20}) {
    SieveOptions opt;
    opt.segment_bytes = bytes;
    CHECK(collect(1000, 50000, opt) == ref);
  }
}

TEST_CASE("worker count does not change the stream") {
  const auto ref = collect(2, 200000);
  for (unsigned threads : {1u, 2u, 4u, 7u}) {
    SieveOptions opt;
    opt.threads = threads;
    opt.segment_bytes = 1024;  // force many segments through the reorderer
    CHECK(collect(2, 200000, opt) == ref);
  }
}

TEST_CASE("simple sieve agrees") {
  CHECK(simple_sieve(100) == primes_naive(2, 101));
  CHECK(simple_sieve(1).empty());
  CHECK(simple_sieve(2) == std::vector<std::uint64_t>{2});
}

TEST_CASE("higher prime powers") {
  const auto v = higher_prime_powers(2, 20);
  REQUIRE(v.size() == 4);  // 4, 8, 9, 16
  CHECK(v[0].n == 4);
  CHECK(v[0].p == 2);
  CHECK(v[0].m == 2);
  CHECK(v[1].n == 8);
  CHECK(v[1].m == 3);
  CHECK(v[2].n == 9);
  CHECK(v[2].p == 3);
  CHECK(v[3].n == 16);
  CHECK(v[3].m == 4);
  CHECK(v[0].log_p == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  // Window not containing the underlying primes still finds the powers.
  const auto w = higher_prime_powers(120, 130);
  REQUIRE(w.size() == 3);  // 121 = 11^2, 125 = 5^3, 128 = 2^7
  CHECK(w[0].n == 121);
  CHECK(w[1].n == 125);
  CHECK(w[2].n == 128);
}

TEST_CASE("merged prime power stream is sorted and complete") {
  std::vector<std::uint64_t> ns;
  const std::uint64_t count = stream_prime_powers(
      2, 20, [&](const PrimePowerEvent& e) { ns.push_back(e.n); });
  CHECK(count == ns.size());
  CHECK(ns == std::vector<std::uint64_t>{2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17,
                                         19});
}

TEST_CASE("checkpoint round trip") {
  const auto path = temp_file("prlab_test_checkpoint.bin");
  Checkpoint cp;
  cp.position = 123456789;
  for (int i = 0; i < 300; ++i) cp.payload.push_back(std::byte(i * 7 & 0xff));
  save_checkpoint(path.string(), cp);
  const Checkpoint back = load_checkpoint(path.string());
  CHECK(back.position == cp.position);
  CHECK(back.payload == cp.payload);
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint rejects corruption") {
  const auto path = temp_file("prlab_test_checkpoint_bad.bin");
  Checkpoint cp;
  cp.position = 42;
  cp.payload = {std::byte{1}, std::byte{2}, std::byte{3}};
  save_checkpoint(path.string(), cp);

  // Flip one payload byte: the stored hash must catch it.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-2, std::ios::end);
    char c;
    f.seekg(-2, std::ios::end);
    f.get(c);
    f.seekp(-2, std::ios::end);
    c ^= 0x40;
    f.put(c);
  }
  CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointFormatError);

  // Wrong magic.
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << "XXXX1 something that is not a checkpoint";
  }
  CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointFormatError);

  // Truncated container.
  save_checkpoint(path.string(), cp);
  std::filesystem::resize_file(path, 10);
  CHECK_THROWS_AS(load_checkpoint(path.string()), CheckpointFormatError);

  CHECK_THROWS_AS(load_checkpoint("/nonexistent/prlab.ckpt"),
                  CheckpointFormatError);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
