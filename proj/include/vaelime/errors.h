/*
 * Copyright 2026 The vaelime Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VAELIME_ERRORS_H_
#define VAELIME_ERRORS_H_

#include <stdexcept>
#include <string>

namespace vaelime {

// Root of every error raised by the library. The CLI maps subclasses of
// ConfigError to exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class DegenerateSystem : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

class WrongKind : public Error {
 public:
  using Error::Error;
};

class BlackBoxFailure : public Error {
 public:
  BlackBoxFailure(std::size_t sample_index, const std::string& what)
      : Error("black-box prediction failed on sample " +
              std::to_string(sample_index) + ": " + what),
        sample_index_(sample_index) {}
  std::size_t sample_index() const { return sample_index_; }

 private:
  std::size_t sample_index_;
};

// Input and configuration problems detected before any compute runs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : ConfigError("parse error at row " + std::to_string(row) +
                    ", column " + std::to_string(column) + ": " + what),
        row_(row),
        column_(column) {}
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class NonFiniteValue : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DuplicateHeader : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyDataset : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace vaelime

#endif  // VAELIME_ERRORS_H_
