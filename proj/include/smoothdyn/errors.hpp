// Copyright 2026 The smoothdyn Authors
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

#ifndef SMOOTHDYN_ERRORS_HPP_
#define SMOOTHDYN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace smoothdyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments: bad node index, duplicate edge, p outside [0,1], ...
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied component broke its contract (e.g. an adversary
/// proposing an edge outside the allowed set).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Internal bookkeeping is inconsistent. Always a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace smoothdyn

#endif  // SMOOTHDYN_ERRORS_HPP_
