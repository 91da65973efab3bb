// Copyright 2026 The tnmagic Authors
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

namespace tnmagic {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error payload.
class Error : public std::runtime_error {
   public:
    Error(std::string kind, const std::string &what) : std::runtime_error(what), kind_(std::move(kind)) {
    }
    const std::string &kind() const noexcept {
        return kind_;
    }

   private:
    std::string kind_;
};

class InvalidInput : public Error {
   public:
    explicit InvalidInput(const std::string &what) : Error("invalid_input", what) {
    }
};

class ShapeError : public Error {
   public:
    explicit ShapeError(const std::string &what) : Error("shape", what) {
    }
};

/// Raised when an operation would exceed a configured size limit (dense
/// contraction length, replica bond dimension, enumeration size).
class SizeLimitError : public Error {
   public:
    explicit SizeLimitError(const std::string &what) : Error("size_limit", what) {
    }
};

class NumericalFailure : public Error {
   public:
    explicit NumericalFailure(const std::string &what) : Error("numerical_failure", what) {
    }
};

class IoError : public Error {
   public:
    explicit IoError(const std::string &what) : Error("io", what) {
    }
};

}  // namespace tnmagic
