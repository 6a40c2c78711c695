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
#include <benchmark/benchmark.h>

#include "cipherfleet/controller.hpp"
#include "cipherfleet/lwe.hpp"

using namespace cipherfleet;

namespace {

CipherParams params_for(int n) { return CipherParams(10, 6, n, 100); }

void BM_Encrypt(benchmark::State& state) {
  const CipherParams params = params_for(static_cast<int>(state.range(0)));
  Rng rng(1);
  const SecretKey key = keygen(params, rng);
  const std::vector<BigInt> m{BigInt(123456)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(encrypt(params, key, m, rng));
  }
}
BENCHMARK(BM_Encrypt)->Arg(10)->Arg(20)->Arg(30)->Arg(35);

void BM_Decrypt(benchmark::State& state) {
  const CipherParams params = params_for(static_cast<int>(state.range(0)));
  Rng rng(2);
  const SecretKey key = keygen(params, rng);
  const Ciphertext ct = encrypt(params, key, {BigInt(123456)}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decrypt(params, key, ct));
  }
}
BENCHMARK(BM_Decrypt)->Arg(10)->Arg(35);

void BM_AddCt(benchmark::State& state) {
  const CipherParams params = params_for(static_cast<int>(state.range(0)));
  Rng rng(3);
  const SecretKey key = keygen(params, rng);
  const Ciphertext a = encrypt(params, key, {BigInt(7)}, rng);
  const Ciphertext b = encrypt(params, key, {BigInt(5)}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(add_ct(params, a, b));
  }
}
BENCHMARK(BM_AddCt)->Arg(10)->Arg(35);

void BM_EncryptMultiplier(benchmark::State& state) {
  const CipherParams params = params_for(static_cast<int>(state.range(0)));
  Rng rng(4);
  const SecretKey key = keygen(params, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(encrypt_multiplier(params, key, BigInt(3), rng));
  }
}
BENCHMARK(BM_EncryptMultiplier)->Arg(10)->Arg(20)->Arg(35);

void BM_MultCt(benchmark::State& state) {
  const CipherParams params = params_for(static_cast<int>(state.range(0)));
  Rng rng(5);
  const SecretKey key = keygen(params, rng);
  const MultiplierCiphertext mc = encrypt_multiplier(params, key, BigInt(3), rng);
  const Ciphertext ct = encrypt(params, key, {BigInt(123456)}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mult_ct(params, mc, ct));
  }
}
BENCHMARK(BM_MultCt)->Arg(10)->Arg(20)->Arg(30)->Arg(35);

void BM_EstimatorStep(benchmark::State& state) {
  const CipherParams params(10, 13, static_cast<int>(state.range(0)), 100);
  Rng rng(6);
  const SecretKey key = keygen(params, rng);
  EncryptedEstimatorBank bank(params, Pow10Scale{-2}, Pow10Scale{4}, 1.0,
                              0.01);
  bank.add_edge(0, key, rng);
  const Ciphertext diff = encrypt(params, key, {BigInt(250)}, rng);
  for (auto _ : state) {
    bank.step(0, diff);
  }
}
BENCHMARK(BM_EstimatorStep)->Arg(10)->Arg(35);

}  // namespace

BENCHMARK_MAIN();
