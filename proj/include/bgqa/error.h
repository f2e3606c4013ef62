// Copyright 2026 The bgqa Authors
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

#ifndef BGQA_ERROR_H_
#define BGQA_ERROR_H_

#include <stdexcept>
#include <string>

namespace bgqa {

// Base of every error raised by the library. The subclasses map onto the
// command-line exit codes: DataError -> 1, UsageError -> 2,
// TransportError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating input data (dataset, corpus, index files).
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or arguments supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Index directory whose format version is not the one this build reads.
class IndexVersionError : public DataError {
 public:
  IndexVersionError(int found, int expected)
      : DataError("index format version " + std::to_string(found) +
                  " is not supported (this build reads version " +
                  std::to_string(expected) + ")"),
        found_(found),
        expected_(expected) {}

  int found() const { return found_; }
  int expected() const { return expected_; }

 private:
  int found_;
  int expected_;
};

// Truncated or otherwise damaged index files.
class IndexCorruptError : public DataError {
 public:
  using DataError::DataError;
};

// Failures talking to a remote scorer.
class TransportError : public Error {
 public:
  using Error::Error;
};

// The remote scorer answered, but not with a usable body.
class MalformedResponseError : public TransportError {
 public:
  using TransportError::TransportError;
};

// The remote scorer returned a logit vector of the wrong length.
class LengthMismatchError : public MalformedResponseError {
 public:
  LengthMismatchError(size_t expected, size_t got, const std::string& context = "")
      : MalformedResponseError(context + "scorer returned " + std::to_string(got) +
                               " logits for " + std::to_string(expected) +
                               " options"),
        expected_(expected),
        got_(got) {}

  size_t expected() const { return expected_; }
  size_t got() const { return got_; }

 private:
  size_t expected_;
  size_t got_;
};

}  // namespace bgqa

#endif  // BGQA_ERROR_H_
