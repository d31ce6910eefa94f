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

#ifndef NGRAMCLF_TOOLS_CLI_H_
#define NGRAMCLF_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace ngramclf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

// Runs one invocation, e.g. {"ngramclf", "stats", "--data", "x.tsv"}.
// Normal output goes to `out`, diagnostics and the effective config to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ngramclf::cli

#endif  // NGRAMCLF_TOOLS_CLI_H_
