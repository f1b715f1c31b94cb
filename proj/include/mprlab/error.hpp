/*
 * Copyright 2026 The mprlab Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.

*/

#pragma once

#include <stdexcept>
#include <string>

namespace mprlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// r * p_c >= 1: the backoff chain has no stationary distribution.
class SteadyStateUnreachable : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be invertible (or full column rank) is not.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// More simultaneous users than the receiver can separate.
class CapabilityExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed frame bytes handed to a decoder.
class FrameError : public Error {
 public:
  using Error::Error;
};

/// Scenario text that fails to parse or validate. Carries the offending line.
class ConfigError : public Error {
 public:
  ConfigError(int line, std::string key, const std::string& what)
      : Error("line " + std::to_string(line) + (key.empty() ? "" : ", key '" + key + "'") + ": " +
              what),
        line_(line),
        key_(std::move(key)) {}

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

}  // namespace mprlab
