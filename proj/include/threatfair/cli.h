/*
 * Copyright 2026 The threatfair Authors.
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

#ifndef THREATFAIR_CLI_H_
#define THREATFAIR_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace threatfair::cli {

// Exit codes.
inline constexpr int kExitOk = 0;          // success, or fair verdict
inline constexpr int kExitUnfair = 1;      // check found a bound exceeded
inline constexpr int kExitInvalid = 2;     // model or edit failed validation
inline constexpr int kExitIo = 3;          // file could not be read/written
inline constexpr int kExitUsage = 64;      // bad flags or arguments

// Runs `threatfair <command> ...`; args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace threatfair::cli

#endif  // THREATFAIR_CLI_H_
