// Copyright 2026 The gibbsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace gibbsq {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched operator sizes, bad qubit indices, or a register above the cap.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the mathematical domain of the operation
/// (non-Hermitian generator, negative inverse temperature, p > 1/4, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The input is valid but the requested quantity does not exist for it,
/// e.g. the gap of a reducible Markov chain.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace gibbsq
