// Copyright 2026 The Fatou Workbench Authors
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

#ifndef FATOU_ERRORS_H_
#define FATOU_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fatou {

// Base class for every error raised by the library. Subclasses mirror the
// error conditions named in each module's contract.
class FatouError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad ordinal strings, schema violations, bad budgets.
class ParseError : public FatouError {
 public:
  using FatouError::FatouError;
};

class PreconditionError : public FatouError {
 public:
  using FatouError::FatouError;
};

class SpaceMismatch : public FatouError {
 public:
  using FatouError::FatouError;
};

// A limit-stage norm has no exact certificate; use norm_bounds instead.
class Uncertifiable : public FatouError {
 public:
  using FatouError::FatouError;
};

// A stored certificate turned out to be inconsistent. Always a defect.
class CertificateError : public FatouError {
 public:
  using FatouError::FatouError;
};

class BudgetExhausted : public FatouError {
 public:
  using FatouError::FatouError;
};

}  // namespace fatou

#endif  // FATOU_ERRORS_H_
