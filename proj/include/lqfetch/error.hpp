// Copyright 2026 The lqfetch Authors
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

namespace lqfetch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (spin-system config, pattern strings, CLI values).
class ParseError : public Error {
   public:
    using Error::Error;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// Qubit index out of range or clashing indices.
class IndexError : public Error {
   public:
    using Error::Error;
};

/// A numerical tolerance was breached (non-unitary result, residual coherence, ...).
class NumericalError : public Error {
   public:
    using Error::Error;
};

/// A frequency could not be mapped back to a unique database item.
class DecodeError : public Error {
   public:
    using Error::Error;
};

}  // namespace lqfetch
