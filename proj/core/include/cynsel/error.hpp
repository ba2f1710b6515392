// Copyright 2026 The cynsel Authors
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

#ifndef CYNSEL_ERROR_HPP_
#define CYNSEL_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace cynsel {

// Runtime failure inside the engine (exit code 1 at the CLI).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data or configuration (exit code 2 at the CLI).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

}  // namespace cynsel

#endif  // CYNSEL_ERROR_HPP_
