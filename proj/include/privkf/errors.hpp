// Copyright 2026 The privkf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace privkf {

// Base of every error raised by the library. exit_code() is what the CLI
// returns: 1 for bad input, 2 for numerical or protocol failure.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 2; }
};

class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class CsvError : public InputError {
 public:
  using InputError::InputError;
};

class KeygenError : public InputError {
 public:
  using InputError::InputError;
};

class PlaintextRangeError : public Error {
 public:
  using Error::Error;
};

class KeyMismatchError : public Error {
 public:
  using Error::Error;
};

class CiphertextError : public Error {
 public:
  using Error::Error;
};

class EncodeOverflowError : public Error {
 public:
  using Error::Error;
};

class ExponentBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotPositiveDefiniteError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class IncompleteRoundError : public Error {
 public:
  using Error::Error;
};

class BarrierViolation : public Error {
 public:
  using Error::Error;
};

// The coalition lacks an input the attack needs (singular F, withheld model
// matrices).
class AttackInapplicable : public Error {
 public:
  using Error::Error;
};

}  // namespace privkf
