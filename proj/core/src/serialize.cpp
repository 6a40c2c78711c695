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
#include "cipherfleet/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cipherfleet {

using nlohmann::json;

namespace {

json params_to_json(const CipherParams& p) {
  return json{{"p_exp", p.p_exp()},
              {"L_exp", p.L_exp()},
              {"N", p.key_length()},
              {"err_bound", p.err_bound()}};
}

CipherParams params_from_json(const json& j) {
  return CipherParams(j.at("p_exp").get<int>(), j.at("L_exp").get<int>(),
                      j.at("N").get<int>(),
                      j.at("err_bound").get<std::int64_t>());
}

json matrix_to_json(int rows, int cols, const std::vector<BigInt>& mat) {
  json out = json::array();
  for (int r = 0; r < rows; ++r) {
    json row = json::array();
    for (int c = 0; c < cols; ++c) {
      row.push_back(mat[static_cast<std::size_t>(r) * cols + c].str());
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<BigInt> matrix_from_json(const json& j, int& rows, int& cols) {
  rows = static_cast<int>(j.size());
  cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
  std::vector<BigInt> mat;
  mat.reserve(static_cast<std::size_t>(rows) * cols);
  for (const auto& row : j) {
    if (static_cast<int>(row.size()) != cols) {
      throw IoError("ragged ciphertext matrix in file");
    }
    for (const auto& cell : row) {
      mat.emplace_back(cell.get<std::string>());
    }
  }
  return mat;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

std::string params_to_json_text(const CipherParams& params) {
  return params_to_json(params).dump(2) + "\n";
}

CipherParams params_from_json_text(const std::string& text) {
  try {
    return params_from_json(parse(text, "params file"));
  } catch (const json::exception& e) {
    throw IoError(std::string("params field missing or mistyped: ") +
                  e.what());
  }
}

CipherParams load_params(const std::string& path) {
  return params_from_json_text(read_file(path));
}

std::string key_to_json_text(const CipherParams& params,
                             const SecretKey& key) {
  json j;
  j["params"] = params_to_json(params);
  json sk = json::array();
  for (const BigInt& v : key.sk) sk.push_back(v.str());
  j["sk"] = sk;
  return j.dump(2) + "\n";
}

std::pair<CipherParams, SecretKey> key_from_json_text(
    const std::string& text) {
  const json j = parse(text, "key file");
  try {
    CipherParams params = params_from_json(j.at("params"));
    SecretKey key;
    for (const auto& v : j.at("sk")) {
      key.sk.emplace_back(v.get<std::string>());
    }
    if (static_cast<int>(key.sk.size()) != params.key_length()) {
      throw IoError("key length does not match params N");
    }
    return {params, key};
  } catch (const json::exception& e) {
    throw IoError(std::string("key field missing or mistyped: ") + e.what());
  }
}

void save_key(const CipherParams& params, const SecretKey& key,
              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out << key_to_json_text(params, key);
}

std::pair<CipherParams, SecretKey> load_key(const std::string& path) {
  return key_from_json_text(read_file(path));
}

std::string ciphertext_to_json_text(const Ciphertext& ct) {
  json j;
  j["rows"] = ct.rows;
  j["cols"] = ct.cols;
  j["mat"] = matrix_to_json(ct.rows, ct.cols, ct.mat);
  return j.dump() + "\n";
}

Ciphertext ciphertext_from_json_text(const std::string& text) {
  const json j = parse(text, "ciphertext");
  Ciphertext ct;
  ct.mat = matrix_from_json(j.at("mat"), ct.rows, ct.cols);
  return ct;
}

std::string multiplier_to_json_text(const MultiplierCiphertext& mc) {
  json j;
  j["rows"] = mc.rows;
  j["cols"] = mc.cols;
  j["mat"] = matrix_to_json(mc.rows, mc.cols, mc.mat);
  return j.dump() + "\n";
}

MultiplierCiphertext multiplier_from_json_text(const std::string& text) {
  const json j = parse(text, "multiplier ciphertext");
  MultiplierCiphertext mc;
  mc.mat = matrix_from_json(j.at("mat"), mc.rows, mc.cols);
  return mc;
}

}  // namespace cipherfleet
