// Copyright 2026 The ppcm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ppcm {

/// Base of every error raised by the library. The CLI maps the subclasses
/// onto exit codes, so new error kinds should derive from one of the two
/// families below rather than from Error directly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input or configuration problems (CLI exit status 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Numerical and domain failures (CLI exit status 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, std::size_t required_cutoff)
      : NumericalError(what), required_cutoff_(required_cutoff) {}
  std::size_t required_cutoff() const noexcept { return required_cutoff_; }

 private:
  std::size_t required_cutoff_;
};

class InstabilityError : public NumericalError {
 public:
  InstabilityError(const std::string& what, double coarse, double fine)
      : NumericalError(what), coarse_(coarse), fine_(fine) {}
  double coarse_estimate() const noexcept { return coarse_; }
  double fine_estimate() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditionedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateDesignError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BracketError : public NumericalError {
 public:
  BracketError(const std::string& what, double loglik_low, double loglik_high)
      : NumericalError(what), loglik_low_(loglik_low), loglik_high_(loglik_high) {}
  double loglik_low() const noexcept { return loglik_low_; }
  double loglik_high() const noexcept { return loglik_high_; }

 private:
  double loglik_low_;
  double loglik_high_;
};

}  // namespace ppcm
