// Copyright 2026 The mdclean Authors.
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

#ifndef MDCLEAN_CLI_H_
#define MDCLEAN_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace mdclean::cli {

enum ExitStatus {
  kOk = 0,
  kValidationFailure = 1,
  kSemanticFailure = 2,
  kIoFailure = 3,
};

// Runs one command; `args` excludes the program name. Results go to `out`
// (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace mdclean::cli

#endif  // MDCLEAN_CLI_H_
