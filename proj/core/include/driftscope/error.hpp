// Copyright 2026 The Driftscope Authors.
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

#ifndef DRIFTSCOPE_ERROR_HPP_
#define DRIFTSCOPE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace driftscope {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that does not follow a documented file format. The message names the
// file and line (or record id) at fault.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Caller-supplied parameters or data that violate an operation's
// preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace driftscope

#endif  // DRIFTSCOPE_ERROR_HPP_
