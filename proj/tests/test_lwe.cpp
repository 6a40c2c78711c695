/*
 * Copyright 2026 The Cipherfleet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "cipherfleet/lwe.hpp"
#include "cipherfleet/serialize.hpp"

using namespace cipherfleet;

namespace {

// The experiment configuration: p = 10^10, L = 10^6, N = 10, r/2 = 100.
CipherParams reference_params() { return CipherParams(10, 6, 10, 100); }

// Independent reconstruction oracle: multiply a digit row by an explicitly
// built gadget matrix R = [10^0 .. 10^(d-1)]^T (x) I_(N+1).
std::vector<BigInt> apply_gadget(const CipherParams& params,
                                 const std::vector<std::uint8_t>& digits) {
  const int N = params.key_length();
  const int d = params.digits();
  std::vector<BigInt> out(static_cast<std::size_t>(N) + 1, BigInt(0));
  BigInt power = 1;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= N; ++j) {
      out[static_cast<std::size_t>(j)] +=
          power * digits[static_cast<std::size_t>(i) * (N + 1) + j];
    }
    power *= 10;
  }
  return out;
}

}  // namespace

TEST_CASE("mod_centered matches the floor formula") {
  CHECK(mod_centered(BigInt(0), BigInt(100)) == 0);
  CHECK(mod_centered(BigInt(50), BigInt(100)) == -50);
  CHECK(mod_centered(BigInt(-151), BigInt(100)) == 49);
  // brute-force against the literal floor expression across a range
  for (int a = -500; a <= 500; ++a) {
    const BigInt q(36);
    const BigInt expect =
        BigInt(a) -
        BigInt(static_cast<long long>(
            std::floor((a + 18.0) / 36.0))) * q;
    CHECK(mod_centered(BigInt(a), q) == expect);
  }
}

TEST_CASE("keygen is deterministic per seed and distinct across seeds") {
  const CipherParams params = reference_params();
  Rng r1(0), r2(0);
  const SecretKey k1 = keygen(params, r1);
  const SecretKey k2 = keygen(params, r2);
  CHECK(k1.sk == k2.sk);
  CHECK(k1.sk.size() == 10);
  CHECK(k1.s()[0] == 1);

  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const SecretKey k = keygen(params, rng);
    std::string repr;
    for (const BigInt& v : k.sk) repr += v.str() + ",";
    seen.insert(repr);
  }
  CHECK(seen.size() == 100);
}

TEST_CASE("secret key components are centered residues") {
  const CipherParams params = reference_params();
  Rng rng(7);
  const SecretKey key = keygen(params, rng);
  for (const BigInt& v : key.sk) {
    CHECK(v >= -params.half_q());
    CHECK(v < params.half_q());
  }
}

TEST_CASE("encrypt with zero randomness gives the bare scaled message") {
  const CipherParams params = reference_params();
  Rng rng(1);
  const SecretKey key = keygen(params, rng);
  const int N = params.key_length();

  const Ciphertext ct = encrypt_with(
      params, key, {BigInt(0)}, std::vector<BigInt>(N, BigInt(0)), {0});
  for (const BigInt& v : ct.mat) CHECK(v == 0);

  const Ciphertext ct2 = encrypt_with(
      params, key, {BigInt(42)}, std::vector<BigInt>(N, BigInt(0)), {0});
  CHECK(ct2.at(0, 0) == params.L() * 42);
  CHECK(decrypt(params, key, ct2)[0] == 42);
}

TEST_CASE("encrypt rejects plaintexts at the p/2 boundary") {
  const CipherParams params = reference_params();
  Rng rng(2);
  const SecretKey key = keygen(params, rng);
  CHECK_THROWS_AS(encrypt(params, key, {params.half_p()}, rng),
                  MessageOutOfRange);
  CHECK_THROWS_AS(encrypt(params, key, {-params.half_p() - 1}, rng),
                  MessageOutOfRange);
  CHECK_NOTHROW(encrypt(params, key, {params.half_p() - 1}, rng));
}

TEST_CASE("decrypt(encrypt(m)) round-trips") {
  const CipherParams params = reference_params();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const SecretKey key = keygen(params, rng);
    CHECK(decrypt(params, key, encrypt(params, key, {BigInt(1234)}, rng))[0] ==
          1234);
    CHECK(decrypt(params, key, encrypt(params, key, {BigInt(42)}, rng))[0] ==
          42);
  }
}

TEST_CASE("round-trip property across the plaintext space") {
  const CipherParams params = reference_params();
  Rng rng(99);
  const SecretKey key = keygen(params, rng);
  for (int trial = 0; trial < 1000; ++trial) {
    const BigInt m = rng.uniform_centered(params.p());
    const Ciphertext ct = encrypt(params, key, {m}, rng);
    CHECK(decrypt(params, key, ct)[0] == m);
    for (const BigInt& v : ct.mat) {
      CHECK(v >= -params.half_q());
      CHECK(v < params.half_q());
    }
  }
}

TEST_CASE("identical seeds produce bit-identical ciphertexts") {
  const CipherParams params = reference_params();
  Rng kr(5);
  const SecretKey key = keygen(params, kr);
  Rng r1(17), r2(17);
  const Ciphertext a = encrypt(params, key, {BigInt(777)}, r1);
  const Ciphertext b = encrypt(params, key, {BigInt(777)}, r2);
  CHECK(a.mat == b.mat);
}

TEST_CASE("homomorphic addition") {
  const CipherParams params = reference_params();
  Rng rng(3);
  const SecretKey key = keygen(params, rng);

  SUBCASE("additive identity") {
    const Ciphertext z = add_ct(params, encrypt(params, key, {BigInt(0)}, rng),
                                encrypt(params, key, {BigInt(0)}, rng));
    CHECK(decrypt(params, key, z)[0] == 0);
  }
  SUBCASE("plaintext oracle") {
    const Ciphertext s = add_ct(params, encrypt(params, key, {BigInt(7)}, rng),
                                encrypt(params, key, {BigInt(5)}, rng));
    CHECK(decrypt(params, key, s)[0] == 12);
  }
  SUBCASE("wrap at p/2") {
    const BigInt half = params.half_p();
    const Ciphertext s =
        add_ct(params, encrypt(params, key, {half - 1}, rng),
               encrypt(params, key, {BigInt(1)}, rng));
    CHECK(decrypt(params, key, s)[0] == -half);
  }
  SUBCASE("dimension mismatch") {
    const Ciphertext one = encrypt(params, key, {BigInt(1)}, rng);
    const Ciphertext two = encrypt(params, key, {BigInt(1), BigInt(2)}, rng);
    CHECK_THROWS_AS(add_ct(params, one, two), DimensionMismatch);
  }
  SUBCASE("randomized oracle") {
    for (int trial = 0; trial < 200; ++trial) {
      const BigInt m1 = rng.uniform_centered(params.p() / 2);
      const BigInt m2 = rng.uniform_centered(params.p() / 2);
      const Ciphertext s =
          add_ct(params, encrypt(params, key, {m1}, rng),
                 encrypt(params, key, {m2}, rng));
      CHECK(decrypt(params, key, s)[0] == mod_centered(m1 + m2, params.p()));
    }
  }
}

TEST_CASE("negation and plaintext multiplication") {
  const CipherParams params = reference_params();
  Rng rng(4);
  const SecretKey key = keygen(params, rng);
  const Ciphertext ct = encrypt(params, key, {BigInt(321)}, rng);
  CHECK(decrypt(params, key, negate_ct(params, ct))[0] == -321);
  CHECK(decrypt(params, key, mult_plain(params, ct, BigInt(5)))[0] == 1605);
  CHECK(decrypt(params, key, mult_plain(params, ct, BigInt(-2)))[0] == -642);
}

TEST_CASE("digit decomposition") {
  SUBCASE("zero row") {
    const CipherParams params = reference_params();
    const std::vector<BigInt> row(params.key_length() + 1, BigInt(0));
    for (const auto d : decompose(params, row)) CHECK(d == 0);
  }
  SUBCASE("scalar 305 with q = 10^3") {
    // p = 10^2, L = 10^1 -> q = 10^3, three digit blocks
    const CipherParams params(2, 1, 2, 0);
    std::vector<BigInt> row{BigInt(305), BigInt(0), BigInt(0)};
    const auto digits = decompose(params, row);
    CHECK(digits[0 * 3 + 0] == 5);
    CHECK(digits[1 * 3 + 0] == 0);
    CHECK(digits[2 * 3 + 0] == 3);
    const auto rebuilt = apply_gadget(params, digits);
    CHECK(rebuilt[0] == 305);
  }
  SUBCASE("reconstruction identity on random rows") {
    const CipherParams params = reference_params();
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<BigInt> row;
      for (int j = 0; j <= params.key_length(); ++j) {
        row.push_back(rng.uniform_centered(params.q()));
      }
      const auto digits = decompose(params, row);
      for (const auto d : digits) CHECK(d <= 9);
      const auto rebuilt = apply_gadget(params, digits);
      for (int j = 0; j <= params.key_length(); ++j) {
        CHECK(mod_centered(rebuilt[static_cast<std::size_t>(j)], params.q()) ==
              mod_centered(row[static_cast<std::size_t>(j)], params.q()));
      }
    }
  }
}

TEST_CASE("homomorphic multiplication") {
  const CipherParams params = reference_params();
  Rng rng(6);
  const SecretKey key = keygen(params, rng);

  SUBCASE("annihilator and identity multipliers") {
    const MultiplierCiphertext zero =
        encrypt_multiplier(params, key, BigInt(0), rng);
    const MultiplierCiphertext one =
        encrypt_multiplier(params, key, BigInt(1), rng);
    const Ciphertext m = encrypt(params, key, {BigInt(123456)}, rng);
    CHECK(decrypt(params, key, mult_ct(params, zero, m))[0] == 0);
    CHECK(decrypt(params, key, mult_ct(params, one, m))[0] == 123456);
  }
  SUBCASE("plaintext product oracle") {
    const MultiplierCiphertext three =
        encrypt_multiplier(params, key, BigInt(3), rng);
    const Ciphertext four = encrypt(params, key, {BigInt(4)}, rng);
    CHECK(decrypt(params, key, mult_ct(params, three, four))[0] == 12);
  }
  SUBCASE("multiplier range check") {
    CHECK_THROWS_AS(encrypt_multiplier(params, key, params.half_p(), rng),
                    MessageOutOfRange);
  }
  SUBCASE("dimension mismatch") {
    const CipherParams other(10, 6, 4, 100);
    Rng orng(1);
    const SecretKey okey = keygen(other, orng);
    const MultiplierCiphertext mc =
        encrypt_multiplier(other, okey, BigInt(2), orng);
    const Ciphertext ct = encrypt(params, key, {BigInt(9)}, rng);
    CHECK_THROWS_AS(mult_ct(params, mc, ct), DimensionMismatch);
  }
  SUBCASE("randomized product oracle") {
    // Multiplier magnitudes bounded so |m1|*r/2 plus the digit-sum noise
    // stays under L/2 = 5*10^5 (worst case 3000*100 + 16*11*9*100 < 459k).
    for (int trial = 0; trial < 200; ++trial) {
      const BigInt m1 = rng.uniform_centered(BigInt(2 * 3000));
      const BigInt m2 = rng.uniform_centered(BigInt(2 * 1000000));
      const MultiplierCiphertext mc = encrypt_multiplier(params, key, m1, rng);
      const Ciphertext ct = encrypt(params, key, {m2}, rng);
      CHECK(decrypt(params, key, mult_ct(params, mc, ct))[0] == m1 * m2);
    }
  }
}

TEST_CASE("multiplier ciphertext shape") {
  const CipherParams params = reference_params();
  Rng rng(8);
  const SecretKey key = keygen(params, rng);
  const MultiplierCiphertext mc =
      encrypt_multiplier(params, key, BigInt(7), rng);
  CHECK(mc.rows == params.digits() * (params.key_length() + 1));
  CHECK(mc.cols == params.key_length() + 1);
  for (const BigInt& v : mc.mat) {
    CHECK(v >= -params.half_q());
    CHECK(v < params.half_q());
  }
}

TEST_CASE("error budget formula") {
  const CipherParams params(8, 6, 10, 100);  // digits = 14
  CHECK(error_budget(params, 0, 5, 5) == 0);
  CHECK(error_budget(params, 1, 0, 1) == 100);
  CHECK(error_budget(params, 1, 1, 0) == BigInt(14) * 11 * 9 * 100);
  CHECK(error_budget(params, 2000, 1, 1) ==
        BigInt(2000) * (100 + BigInt(14) * 11 * 9 * 100));
}

TEST_CASE("key and ciphertext JSON round-trips") {
  const CipherParams params = reference_params();
  Rng rng(12);
  const SecretKey key = keygen(params, rng);

  const auto [params2, key2] =
      key_from_json_text(key_to_json_text(params, key));
  CHECK(params2 == params);
  CHECK(key2.sk == key.sk);

  const Ciphertext ct = encrypt(params, key, {BigInt(123), BigInt(-46)}, rng);
  const Ciphertext ct2 = ciphertext_from_json_text(ciphertext_to_json_text(ct));
  CHECK(ct2.rows == ct.rows);
  CHECK(ct2.cols == ct.cols);
  CHECK(ct2.mat == ct.mat);
  CHECK(decrypt(params, key, ct2) == decrypt(params, key, ct));

  const MultiplierCiphertext mc =
      encrypt_multiplier(params, key, BigInt(-5), rng);
  const MultiplierCiphertext mc2 =
      multiplier_from_json_text(multiplier_to_json_text(mc));
  CHECK(mc2.mat == mc.mat);

  CHECK_THROWS_AS(key_from_json_text("{broken"), IoError);
}

TEST_CASE("params invariants are enforced") {
  CHECK_THROWS_AS(CipherParams(10, 6, 0, 100), ValidationError);
  // err_bound must stay below L/2
  CHECK_THROWS_AS(CipherParams(10, 1, 10, 100), ValidationError);
  const CipherParams p(10, 6, 10, 100);
  CHECK(p.q() == p.p() * p.L());
  CHECK(p.digits() == 16);
}
