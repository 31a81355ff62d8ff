// Copyright (c) 2026 The coc-asr Authors
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

#ifndef COC_ERRORS_H_
#define COC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace coc {

// Unreadable or unwritable file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (corpus lines, tables, wire JSON).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid option or argument combination.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Chat backend failed to produce a completion.
class ClientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContextOverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coc

#endif  // COC_ERRORS_H_
