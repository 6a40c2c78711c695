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
#ifndef CIPHERFLEET_ERRORS_HPP_
#define CIPHERFLEET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cipherfleet {

struct MessageOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonIntegerStateMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonIntegerCoefficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownEdge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownAgent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PlaintextOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ScaleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidEdge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CollocatedAgents : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cipherfleet

#endif  // CIPHERFLEET_ERRORS_HPP_
