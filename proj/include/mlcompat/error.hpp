// Copyright 2026 The mlcompat Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace mlcompat {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InvalidUtf8 : public Error {
 public:
  explicit InvalidUtf8(std::size_t offset)
      : Error("invalid UTF-8 at byte " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class MalformedFile : public Error {
 public:
  MalformedFile(std::string reason, std::size_t line)
      : Error("malformed file (line " + std::to_string(line) + "): " + reason),
        reason_(std::move(reason)),
        line_(line) {}
  const std::string& reason() const { return reason_; }
  std::size_t line() const { return line_; }

 private:
  std::string reason_;
  std::size_t line_;
};

class RuleSetError : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  EmptyInput() : Error("operation requires a non-empty input") {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class LevelOutOfRange : public Error {
 public:
  explicit LevelOutOfRange(double level)
      : Error("threshold level outside [0,1]: " + std::to_string(level)) {}
};

class PlacementInfeasible : public Error {
 public:
  using Error::Error;
};

class BadCalibration : public Error {
 public:
  BadCalibration(double min_ref, double max_ref)
      : Error("calibration requires max_ref > min_ref (got min " +
              std::to_string(min_ref) + ", max " + std::to_string(max_ref) +
              ")") {}
};

class CorrectnessFailure : public Error {
 public:
  explicit CorrectnessFailure(std::string name)
      : Error("benchmark failed its correctness check: " + name),
        name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

}  // namespace mlcompat
