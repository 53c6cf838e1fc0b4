/*
 * Copyright 2026 The bergman authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Base class for all recoverable errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfChart : Error {
  explicit OutOfChart(const std::string& msg = "point outside chart domain")
      : Error(msg) {}
};

struct NonPositiveForm : Error {
  explicit NonPositiveForm(const std::string& msg) : Error(msg) {}
};

struct BadModulus : Error {
  explicit BadModulus(const std::string& msg) : Error(msg) {}
};

struct WrongModel : Error {
  explicit WrongModel(const std::string& msg) : Error(msg) {}
};

struct IncompatiblePower : Error {
  explicit IncompatiblePower(const std::string& msg) : Error(msg) {}
};

struct TruncationTooSmall : Error {
  explicit TruncationTooSmall(const std::string& msg) : Error(msg) {}
};

struct OrderTooSmall : Error {
  explicit OrderTooSmall(const std::string& msg) : Error(msg) {}
};

struct IndefiniteGram : Error {
  explicit IndefiniteGram(const std::string& msg) : Error(msg) {}
};

struct GridTooCoarse : Error {
  explicit GridTooCoarse(const std::string& msg) : Error(msg) {}
};

struct QuadratureDiverged : Error {
  explicit QuadratureDiverged(const std::string& msg) : Error(msg) {}
};

struct BelowFloor : Error {
  explicit BelowFloor(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace bergman
