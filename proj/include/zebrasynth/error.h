// Copyright 2026 The Zebrasynth Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef ZEBRASYNTH_ERROR_H_
#define ZEBRASYNTH_ERROR_H_

#include <stdexcept>
#include <string>

namespace zebrasynth {

// Bad arguments to a library call (violated precondition).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data: config files, annotations, rasters.
// `where` names the offending field path or file:line.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(where),
        detail_(what) {}

  const std::string& where() const { return where_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string where_;
  std::string detail_;
};

// Filesystem failures (unwritable output, missing input file).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_ERROR_H_
