// Copyright 2026 The ngramclf Authors
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

#ifndef NGRAMCLF_ERROR_H_
#define NGRAMCLF_ERROR_H_

#include <stdexcept>
#include <string>

namespace ngramclf {

// Raised for malformed user input: data files, configs, model files and
// violated preconditions on user-supplied values. Tools map it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ngramclf

#endif  // NGRAMCLF_ERROR_H_
