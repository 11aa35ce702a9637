// Copyright 2026 The qdb Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotPositive : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class InvalidChannel : public Error {
 public:
  using Error::Error;
};

class InvalidBasis : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// A negative power was requested of a matrix with a kernel.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NonInvertibleState : public Error {
 public:
  using Error::Error;
};

class NonInvertibleSigma : public Error {
 public:
  using Error::Error;
};

class EtdbNotSatisfied : public Error {
 public:
  using Error::Error;
};

class ThetaStateMismatch : public Error {
 public:
  using Error::Error;
};

class NotDiagonalizedJointly : public Error {
 public:
  using Error::Error;
};

class ZeroSigmaComponent : public Error {
 public:
  using Error::Error;
};

class InvalidOperator : public Error {
 public:
  using Error::Error;
};

class InvalidChain : public Error {
 public:
  using Error::Error;
};

/// Two independently coded evaluations of the same quantity disagreed.
class ConsistencyFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace qdb
