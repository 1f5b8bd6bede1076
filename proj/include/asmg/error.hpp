/*
 Copyright 2026 The asmg Authors.
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace asmg {

enum class ErrorKind {
  config,        // invalid parameters, inconsistent sizes
  dimension,     // operand shape mismatch
  invalid_input, // non-positive coefficient, bad vector contents
  io,            // file could not be opened or parsed
  factorization, // non-positive / zero pivot
  stall,         // an inner iterative solve did not converge
  breakdown,     // Krylov breakdown (loss of definiteness)
  internal       // invariant violated; indicates a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace asmg
