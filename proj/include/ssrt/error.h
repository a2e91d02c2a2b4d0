// Copyright 2026 The ssr-telescopy Authors
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

#ifndef SSRT_ERROR_H
#define SSRT_ERROR_H

#include <stdexcept>
#include <string>

namespace ssrt {

/// Base class for every error raised by the library. Validation failures in
/// the CLI map all of these onto exit code 2.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Bad scalar argument (negative dimension, |g| outside [0,1], ...).
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// Mismatched mode counts, non-square or non-Hermitian matrices.
class ShapeError : public Error {
   public:
    using Error::Error;
};

/// Photon-number or mode-count limits exceeded.
class CapacityError : public Error {
   public:
    using Error::Error;
};

class NormalizationError : public Error {
   public:
    using Error::Error;
};

/// A quantity is singular at the requested point (e.g. H_|g| at |g| = 1).
class SingularityError : public Error {
   public:
    using Error::Error;
};

class UnsupportedError : public Error {
   public:
    using Error::Error;
};

/// Internal invariant broken (probabilities not summing to one, ...).
class ConsistencyError : public Error {
   public:
    using Error::Error;
};

}  // namespace ssrt

#endif  // SSRT_ERROR_H
