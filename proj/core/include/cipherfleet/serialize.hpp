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
//
// JSON persistence for key material and ciphertexts. Residues are stored as
// decimal strings (row-major, centered in [-q/2, q/2)); see README for the
// exact layout.
#ifndef CIPHERFLEET_SERIALIZE_HPP_
#define CIPHERFLEET_SERIALIZE_HPP_

#include <string>

#include "cipherfleet/lwe.hpp"

namespace cipherfleet {

std::string params_to_json_text(const CipherParams& params);
CipherParams params_from_json_text(const std::string& text);
CipherParams load_params(const std::string& path);

// Key files embed their parameters so a key is never applied under the
// wrong modulus.
std::string key_to_json_text(const CipherParams& params, const SecretKey& key);
std::pair<CipherParams, SecretKey> key_from_json_text(const std::string& text);
void save_key(const CipherParams& params, const SecretKey& key,
              const std::string& path);
std::pair<CipherParams, SecretKey> load_key(const std::string& path);

std::string ciphertext_to_json_text(const Ciphertext& ct);
Ciphertext ciphertext_from_json_text(const std::string& text);

std::string multiplier_to_json_text(const MultiplierCiphertext& mc);
MultiplierCiphertext multiplier_from_json_text(const std::string& text);

}  // namespace cipherfleet

#endif  // CIPHERFLEET_SERIALIZE_HPP_
