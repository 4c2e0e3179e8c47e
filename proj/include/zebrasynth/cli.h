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
//
// Command-line front end: generate, export, evaluate, report, preview.
#ifndef ZEBRASYNTH_CLI_H_
#define ZEBRASYNTH_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace zebrasynth {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Relative --out paths resolve under this directory when it is set.
inline constexpr const char* kOutputRootEnv = "ZEBRASYNTH_OUTPUT_ROOT";

// `args` excludes the program name. Results go to `out`, diagnostics to
// `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int RunCli(int argc, char** argv);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_CLI_H_
