// Copyright 2026 The ahsp-sim Authors
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

namespace ahsp {

enum class ErrorKind {
    InvalidArgument,
    ResourceCap,
    InvariantViolation,
    Io,
};

/// Base exception for everything the simulator throws. The kind maps onto
/// the C API status codes and the CLI exit codes.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_invalid(const std::string &what) {
    throw Error(ErrorKind::InvalidArgument, what);
}

[[noreturn]] inline void fail_cap(const std::string &what) {
    throw Error(ErrorKind::ResourceCap, what);
}

[[noreturn]] inline void fail_invariant(const std::string &what) {
    throw Error(ErrorKind::InvariantViolation, what);
}

}  // namespace ahsp
