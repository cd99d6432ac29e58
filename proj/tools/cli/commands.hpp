// Copyright 2026 The ioncav Authors
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

#include <iosfwd>
#include <string>
#include <vector>

namespace ioncav::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kNumericalFailure = 2 };

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Output files go to the configured output directory, which
// IONCAV_OUTPUT_DIR overrides and --output-dir overrides in turn.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ioncav::cli
