// Copyright 2026 The weier Authors
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

#ifndef WEIER_CLI_HPP
#define WEIER_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace weier
{

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_usage = 2,
    exit_evaluation = 3,
};

/// Runs the tool. args excludes the program name.
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

int cli_main(int argc, char **argv, std::ostream &out, std::ostream &err);

} // namespace weier

#endif
